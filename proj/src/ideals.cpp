#include "tmk/ideals.hpp"

#include <algorithm>

#include "tmk/errors.hpp"

namespace tmk {

namespace {

// row-style HNF: upper triangular with positive pivots, entries above each
// pivot reduced into [0, pivot)
std::vector<std::vector<Int>> hnf_reduce(std::vector<std::vector<Int>> rows, size_t d) {
    size_t row = 0;
    for (size_t col = 0; col < d && row < rows.size(); ++col) {
        while (true) {
            size_t piv = rows.size();
            for (size_t r = row; r < rows.size(); ++r)
                if (rows[r][col] != 0 &&
                    (piv == rows.size() || abs(rows[r][col]) < abs(rows[piv][col])))
                    piv = r;
            if (piv == rows.size()) break;
            std::swap(rows[row], rows[piv]);
            bool clean = true;
            for (size_t r = row + 1; r < rows.size(); ++r) {
                if (rows[r][col] == 0) continue;
                Int q;
                mpz_fdiv_q(q.get_mpz_t(), rows[r][col].get_mpz_t(), rows[row][col].get_mpz_t());
                for (size_t c = 0; c < d; ++c) rows[r][c] -= q * rows[row][c];
                if (rows[r][col] != 0) clean = false;
            }
            if (clean) break;
        }
        if (row < rows.size() && rows[row][col] != 0) {
            if (rows[row][col] < 0)
                for (size_t c = 0; c < d; ++c) rows[row][c] = -rows[row][c];
            ++row;
        }
    }
    rows.resize(row);
    for (size_t r = rows.size(); r-- > 0;) {
        size_t pc = 0;
        while (pc < d && rows[r][pc] == 0) ++pc;
        if (pc == d) continue;
        for (size_t rr = 0; rr < r; ++rr) {
            if (rows[rr][pc] == 0) continue;
            Int q;
            mpz_fdiv_q(q.get_mpz_t(), rows[rr][pc].get_mpz_t(), rows[r][pc].get_mpz_t());
            for (size_t c = 0; c < d; ++c) rows[rr][c] -= q * rows[r][c];
        }
    }
    return rows;
}

std::vector<Int> integral_basis_coords(const FieldElement& a) {
    auto bc = a.field()->to_basis_coords(a.coords());
    std::vector<Int> out;
    for (auto& c : bc) {
        if (c.get_den() != 1) fail(errkind::domain, "element is not in the order");
        out.push_back(c.get_num());
    }
    return out;
}

}  // namespace

Ideal::Ideal(FieldPtr K, std::vector<std::vector<Int>> rows) : K_(std::move(K)) {
    size_t d = static_cast<size_t>(K_->degree());
    h_ = hnf_reduce(std::move(rows), d);
    if (h_.size() != d) fail(errkind::internal, "ideal module has rank < d");
}

Ideal Ideal::whole_ring(FieldPtr K) {
    size_t d = static_cast<size_t>(K->degree());
    std::vector<std::vector<Int>> rows(d, std::vector<Int>(d, Int(0)));
    for (size_t i = 0; i < d; ++i) rows[i][i] = 1;
    return Ideal(std::move(K), std::move(rows));
}

Ideal Ideal::principal(const FieldElement& a) {
    auto K = a.field();
    if (a.is_zero()) fail(errkind::zero_input, "principal ideal of 0");
    size_t d = static_cast<size_t>(K->degree());
    std::vector<std::vector<Int>> rows;
    for (size_t j = 0; j < d; ++j)
        rows.push_back(integral_basis_coords(a * K->basis_element(static_cast<int>(j))));
    return Ideal(K, std::move(rows));
}

Ideal Ideal::two_element(FieldPtr K, const Int& p, const ZPoly& g) {
    size_t d = static_cast<size_t>(K->degree());
    FieldElement gt = K->zero();
    {
        FieldElement th = K->theta_elem(), pw = K->one();
        for (size_t i = 0; i < g.size(); ++i) {
            gt = gt + pw * K->from_rat(Rat(g[i]));
            pw = pw * th;
        }
    }
    std::vector<std::vector<Int>> rows;
    for (size_t j = 0; j < d; ++j) {
        auto wj = K->basis_element(static_cast<int>(j));
        rows.push_back(integral_basis_coords(wj * K->from_rat(Rat(p))));
        rows.push_back(integral_basis_coords(wj * gt));
    }
    return Ideal(std::move(K), std::move(rows));
}

Int Ideal::norm() const {
    Int n(1);
    for (size_t i = 0; i < h_.size(); ++i) n *= h_[i][i];
    return n;
}

bool Ideal::contains(const FieldElement& a) const {
    // solve x * H = v for integer x; H upper triangular, so column i is
    // settled by row i once rows < i are eliminated
    auto v = a.field()->to_basis_coords(a.coords());
    size_t d = h_.size();
    for (size_t i = 0; i < d; ++i) {
        Rat q = v[i] / Rat(h_[i][i]);
        if (q.get_den() != 1) return false;
        for (size_t c = i; c < d; ++c) v[c] -= q * Rat(h_[i][c]);
    }
    for (auto& x : v)
        if (x != 0) return false;
    return true;
}

Ideal Ideal::mul(const Ideal& other) const {
    size_t d = h_.size();
    std::vector<std::vector<Int>> rows;
    for (size_t i = 0; i < d; ++i)
        for (size_t j = 0; j < d; ++j) {
            FieldElement a =
                K_->element(K_->from_basis_coords(std::vector<Rat>(h_[i].begin(), h_[i].end())));
            FieldElement b = K_->element(
                K_->from_basis_coords(std::vector<Rat>(other.h_[j].begin(), other.h_[j].end())));
            rows.push_back(integral_basis_coords(a * b));
        }
    return Ideal(K_, std::move(rows));
}

Ideal Ideal::pow(unsigned k) const {
    Ideal r = whole_ring(K_);
    Ideal b = *this;
    while (k) {
        if (k & 1) r = r.mul(b);
        if (k >>= 1) b = b.mul(b);
    }
    return r;
}

Ideal Ideal::conjugate() const {
    if (K_->degree() != 2) fail(errkind::domain, "conjugate ideal: quadratic fields only");
    // sigma(alpha) = -a1/a2 - alpha for f = a2 x^2 + a1 x + a0
    const QPoly& f = K_->min_poly();
    Rat s = -f[1] / f[2];
    std::vector<std::vector<Int>> rows;
    for (size_t i = 0; i < h_.size(); ++i) {
        FieldElement a =
            K_->element(K_->from_basis_coords(std::vector<Rat>(h_[i].begin(), h_[i].end())));
        auto c = a.coords();
        FieldElement img = K_->element({c[0] + c[1] * s, -c[1]});
        rows.push_back(integral_basis_coords(img));
    }
    return Ideal(K_, std::move(rows));
}

bool Ideal::operator==(const Ideal& other) const {
    return K_.get() == other.K_.get() && h_ == other.h_;
}

}  // namespace tmk
