#include "tmk/number_field.hpp"
#include <cmath>

#include <algorithm>
#include <set>
#include <sstream>

#include "tmk/errors.hpp"
#include "tmk/modpoly.hpp"

namespace tmk {

// ---------- exact linear algebra ----------

Rat mat_det(std::vector<std::vector<Rat>> m) {
    size_t n = m.size();
    Rat det(1);
    for (size_t col = 0; col < n; ++col) {
        size_t piv = col;
        while (piv < n && m[piv][col] == 0) ++piv;
        if (piv == n) return Rat(0);
        if (piv != col) {
            std::swap(m[piv], m[col]);
            det = -det;
        }
        det *= m[col][col];
        Rat inv = 1 / m[col][col];
        for (size_t r = col + 1; r < n; ++r) {
            if (m[r][col] == 0) continue;
            Rat fct = m[r][col] * inv;
            for (size_t c = col; c < n; ++c) m[r][c] -= fct * m[col][c];
        }
    }
    return det;
}

std::optional<std::vector<Rat>> mat_solve(std::vector<std::vector<Rat>> m, std::vector<Rat> b) {
    size_t n = m.size();
    for (size_t col = 0; col < n; ++col) {
        size_t piv = col;
        while (piv < n && m[piv][col] == 0) ++piv;
        if (piv == n) return std::nullopt;
        std::swap(m[piv], m[col]);
        std::swap(b[piv], b[col]);
        Rat inv = 1 / m[col][col];
        for (size_t r = 0; r < n; ++r) {
            if (r == col || m[r][col] == 0) continue;
            Rat fct = m[r][col] * inv;
            for (size_t c = col; c < n; ++c) m[r][c] -= fct * m[col][c];
            b[r] -= fct * b[col];
        }
    }
    std::vector<Rat> x(n);
    for (size_t i = 0; i < n; ++i) x[i] = b[i] / m[i][i];
    return x;
}

std::optional<std::vector<std::vector<Rat>>> mat_inverse(const std::vector<std::vector<Rat>>& m) {
    size_t n = m.size();
    std::vector<std::vector<Rat>> a = m, inv(n, std::vector<Rat>(n, Rat(0)));
    for (size_t i = 0; i < n; ++i) inv[i][i] = 1;
    for (size_t col = 0; col < n; ++col) {
        size_t piv = col;
        while (piv < n && a[piv][col] == 0) ++piv;
        if (piv == n) return std::nullopt;
        std::swap(a[piv], a[col]);
        std::swap(inv[piv], inv[col]);
        Rat ic = 1 / a[col][col];
        for (size_t c = 0; c < n; ++c) {
            a[col][c] *= ic;
            inv[col][c] *= ic;
        }
        for (size_t r = 0; r < n; ++r) {
            if (r == col || a[r][col] == 0) continue;
            Rat fct = a[r][col];
            for (size_t c = 0; c < n; ++c) {
                a[r][c] -= fct * a[col][c];
                inv[r][c] -= fct * inv[col][c];
            }
        }
    }
    return inv;
}

QPoly char_poly_of_matrix(const std::vector<std::vector<Rat>>& m) {
    size_t n = m.size();
    std::vector<Rat> xs, ys;
    for (size_t t = 0; t <= n; ++t) {
        std::vector<std::vector<Rat>> a = m;
        for (size_t i = 0; i < n; ++i) {
            for (size_t j = 0; j < n; ++j) a[i][j] = -a[i][j];
            a[i][i] += Rat(static_cast<long>(t));
        }
        xs.emplace_back(static_cast<long>(t));
        ys.push_back(mat_det(std::move(a)));
    }
    return qp_interpolate(xs, ys);
}

// ---------- FieldElement ----------

FieldElement::FieldElement(FieldPtr field, std::vector<Rat> coords)
    : field_(std::move(field)), c_(std::move(coords)) {
    c_.resize(static_cast<size_t>(field_->degree()), Rat(0));
}

bool FieldElement::is_zero() const {
    for (const auto& x : c_)
        if (x != 0) return false;
    return true;
}

bool FieldElement::is_rational() const {
    for (size_t i = 1; i < c_.size(); ++i)
        if (c_[i] != 0) return false;
    return true;
}

Rat FieldElement::rational_value() const {
    if (!is_rational()) fail(errkind::domain, "element is not rational");
    return c_.empty() ? Rat(0) : c_[0];
}

namespace {
void require_same_field(const FieldElement& a, const FieldElement& b) {
    if (a.field().get() != b.field().get())
        fail(errkind::domain, "elements of different number fields");
}
}  // namespace

FieldElement FieldElement::operator+(const FieldElement& o) const {
    require_same_field(*this, o);
    std::vector<Rat> r = c_;
    for (size_t i = 0; i < r.size(); ++i) r[i] += o.c_[i];
    return FieldElement(field_, std::move(r));
}

FieldElement FieldElement::operator-(const FieldElement& o) const {
    require_same_field(*this, o);
    std::vector<Rat> r = c_;
    for (size_t i = 0; i < r.size(); ++i) r[i] -= o.c_[i];
    return FieldElement(field_, std::move(r));
}

FieldElement FieldElement::operator-() const {
    std::vector<Rat> r = c_;
    for (auto& x : r) x = -x;
    return FieldElement(field_, std::move(r));
}

FieldElement FieldElement::operator*(const FieldElement& o) const {
    require_same_field(*this, o);
    QPoly prod = qp_mul(as_poly(), o.as_poly());
    QPoly red = qp_mod(prod, field_->min_poly());
    red.resize(static_cast<size_t>(field_->degree()), Rat(0));
    return FieldElement(field_, std::move(red));
}

FieldElement FieldElement::inverse() const {
    if (is_zero()) fail(errkind::div_zero, "inverse of zero element");
    // extended euclid: u*g + v*f = 1 over Q
    QPoly g = as_poly();
    const QPoly& f = field_->min_poly();
    QPoly r0 = f, r1 = g, t0, t1{Rat(1)};
    while (!r1.empty()) {
        auto [q, r2] = qp_divmod(r0, r1);
        QPoly t2 = qp_sub(t0, qp_mul(q, t1));
        r0 = std::move(r1);
        r1 = std::move(r2);
        t0 = std::move(t1);
        t1 = std::move(t2);
    }
    if (qp_deg(r0) != 0) fail(errkind::internal, "inverse: gcd with min_poly not constant");
    QPoly inv = qp_scale(t0, 1 / r0[0]);
    inv = qp_mod(inv, f);
    inv.resize(static_cast<size_t>(field_->degree()), Rat(0));
    return FieldElement(field_, std::move(inv));
}

FieldElement FieldElement::operator/(const FieldElement& o) const {
    return *this * o.inverse();
}

FieldElement FieldElement::pow(long e) const {
    FieldElement base = e < 0 ? inverse() : *this;
    unsigned long k = static_cast<unsigned long>(e < 0 ? -e : e);
    FieldElement r = field_->one();
    while (k) {
        if (k & 1) r = r * base;
        base = base * base;
        k >>= 1;
    }
    return r;
}

bool FieldElement::operator==(const FieldElement& o) const {
    require_same_field(*this, o);
    return c_ == o.c_;
}

QPoly FieldElement::as_poly() const {
    QPoly p(c_.begin(), c_.end());
    return qp_normalize(std::move(p));
}

Rat FieldElement::trace() const {
    auto m = field_->mult_matrix(*this);
    Rat t(0);
    for (size_t i = 0; i < m.size(); ++i) t += m[i][i];
    return t;
}

Rat FieldElement::norm() const {
    if (is_zero()) return Rat(0);
    return mat_det(field_->mult_matrix(*this));
}

QPoly FieldElement::char_poly() const { return char_poly_of_matrix(field_->mult_matrix(*this)); }

QPoly FieldElement::min_poly() const {
    // least k with 1, e, .., e^k dependent: row reduce the coordinate vectors
    int d = field_->degree();
    std::vector<FieldElement> pows{field_->one()};
    for (int k = 1; k <= d; ++k) pows.push_back(pows.back() * *this);
    for (int k = 1; k <= d; ++k) {
        // solve sum_{i<k} x_i e^i = e^k
        std::vector<std::vector<Rat>> m(static_cast<size_t>(d), std::vector<Rat>(k));
        for (int i = 0; i < k; ++i)
            for (int row = 0; row < d; ++row) m[row][i] = pows[i].coords()[row];
        // least squares not needed: consistent iff solvable; use gaussian elim on augmented
        std::vector<std::vector<Rat>> aug = m;
        for (int row = 0; row < d; ++row) aug[row].push_back(pows[k].coords()[row]);
        // row echelon
        size_t rank = 0;
        std::vector<int> pivot_col;
        for (int col = 0; col <= k && rank < aug.size(); ++col) {
            size_t piv = rank;
            while (piv < aug.size() && aug[piv][col] == 0) ++piv;
            if (piv == aug.size()) continue;
            std::swap(aug[piv], aug[rank]);
            Rat ic = 1 / aug[rank][col];
            for (int c = col; c <= k; ++c) aug[rank][c] *= ic;
            for (size_t r = 0; r < aug.size(); ++r) {
                if (r == rank || aug[r][col] == 0) continue;
                Rat fct = aug[r][col];
                for (int c = col; c <= k; ++c) aug[r][c] -= fct * aug[rank][c];
            }
            pivot_col.push_back(col);
            ++rank;
        }
        bool consistent = true;
        for (auto c : pivot_col)
            if (c == k) consistent = false;
        if (!consistent) continue;
        // read solution
        std::vector<Rat> x(static_cast<size_t>(k), Rat(0));
        for (size_t r = 0; r < rank; ++r)
            if (pivot_col[r] < k) x[pivot_col[r]] = aug[r][k];
        QPoly mp(x.begin(), x.end());
        mp = qp_neg(mp);
        mp.resize(static_cast<size_t>(k) + 1, Rat(0));
        mp[static_cast<size_t>(k)] = 1;
        return qp_normalize(std::move(mp));
    }
    fail(errkind::internal, "min_poly: no relation found");
}

bool FieldElement::is_algebraic_integer() const {
    QPoly mp = min_poly();
    for (const auto& c : mp)
        if (c.get_den() != 1) return false;
    return true;
}

std::string FieldElement::str() const {
    std::ostringstream os;
    os << "[";
    for (size_t i = 0; i < c_.size(); ++i) {
        if (i) os << ",";
        os << c_[i].get_str();
    }
    os << "]";
    return os.str();
}

// ---------- NumberField construction ----------

FieldPtr NumberField::make(const QPoly& min_poly,
                           const std::optional<std::vector<std::vector<Rat>>>& basis) {
    auto nf = std::shared_ptr<NumberField>(new NumberField());
    nf->f_ = qp_primitive_z(qp_normalize(min_poly));
    if (qp_deg(nf->f_) < 1) fail(errkind::domain, "min_poly must have degree >= 1");
    nf->d_ = qp_deg(nf->f_);
    nf->a0_ = nf->f_.back().get_num();
    nf->check_irreducible();
    // monic minimal polynomial of theta = a0*alpha:
    // theta^d + a_{d-1} theta^{d-1} + a_{d-2} a0 theta^{d-2} + ... + a_0 a0^{d-1}
    {
        QPoly tp(static_cast<size_t>(nf->d_) + 1, Rat(0));
        tp[static_cast<size_t>(nf->d_)] = 1;
        Int pw(1);
        for (int i = nf->d_ - 1; i >= 0; --i) {
            tp[static_cast<size_t>(i)] = nf->f_[static_cast<size_t>(i)] * Rat(pw);
            pw *= nf->a0_;
        }
        nf->theta_poly_ = tp;
    }
    nf->compute_signature();
    nf->setup_basis(basis);
    nf->compute_discriminant_theta();
    return nf;
}

void NumberField::compute_signature() {
    sturm_ = std::make_shared<SturmChain>(f_);
    real_root_ivs_ = qp_isolate_real_roots(f_);
    r1_ = static_cast<int>(real_root_ivs_.size());
    if ((d_ - r1_) % 2 != 0) fail(errkind::internal, "signature: parity violation");
    r2_ = (d_ - r1_) / 2;
}

// ---------- irreducibility ----------

namespace {

// certified root disks of a squarefree rational polynomial (monic-normalized
// internally); returned as rectangles, unordered. Retries with higher
// precision until the a-posteriori disks are pairwise disjoint.
struct MpfCplx {
    Mpf re, im;
};

std::vector<CC> certified_roots_raw(const QPoly& fq, mpfr_prec_t prec) {
    int d = qp_deg(fq);
    // numeric Durand-Kerner at `prec` bits
    std::vector<MpfCplx> z(static_cast<size_t>(d));
    // initial points on a circle of the root bound radius
    Rat bound = qp_root_bound(fq);
    {
        Mpf r = Mpf::from_rat(bound, prec, MPFR_RNDN);
        Mpf angle(prec), c(prec), s(prec), two_pi(prec);
        mpfr_const_pi(two_pi.raw(), MPFR_RNDN);
        mpfr_mul_ui(two_pi.raw(), two_pi.raw(), 2, MPFR_RNDN);
        for (int i = 0; i < d; ++i) {
            mpfr_mul_d(angle.raw(), two_pi.raw(), (i + 0.25) / d + 0.0079, MPFR_RNDN);
            mpfr_cos(c.raw(), angle.raw(), MPFR_RNDN);
            mpfr_sin(s.raw(), angle.raw(), MPFR_RNDN);
            z[static_cast<size_t>(i)].re = Mpf(prec);
            z[static_cast<size_t>(i)].im = Mpf(prec);
            mpfr_mul(z[static_cast<size_t>(i)].re.raw(), c.raw(), r.raw(), MPFR_RNDN);
            mpfr_mul(z[static_cast<size_t>(i)].im.raw(), s.raw(), r.raw(), MPFR_RNDN);
        }
    }
    // monic coefficients as mpfr
    std::vector<MpfCplx> coef(static_cast<size_t>(d) + 1);
    for (int i = 0; i <= d; ++i) {
        Rat c = fq[static_cast<size_t>(i)] / fq.back();
        coef[static_cast<size_t>(i)].re = Mpf::from_rat(c, prec, MPFR_RNDN);
        coef[static_cast<size_t>(i)].im = Mpf(prec);
    }
    auto cadd = [&](const MpfCplx& a, const MpfCplx& b) {
        MpfCplx r{Mpf(prec), Mpf(prec)};
        mpfr_add(r.re.raw(), a.re.raw(), b.re.raw(), MPFR_RNDN);
        mpfr_add(r.im.raw(), a.im.raw(), b.im.raw(), MPFR_RNDN);
        return r;
    };
    auto csub = [&](const MpfCplx& a, const MpfCplx& b) {
        MpfCplx r{Mpf(prec), Mpf(prec)};
        mpfr_sub(r.re.raw(), a.re.raw(), b.re.raw(), MPFR_RNDN);
        mpfr_sub(r.im.raw(), a.im.raw(), b.im.raw(), MPFR_RNDN);
        return r;
    };
    auto cmul = [&](const MpfCplx& a, const MpfCplx& b) {
        MpfCplx r{Mpf(prec), Mpf(prec)};
        Mpf t1(prec), t2(prec);
        mpfr_mul(t1.raw(), a.re.raw(), b.re.raw(), MPFR_RNDN);
        mpfr_mul(t2.raw(), a.im.raw(), b.im.raw(), MPFR_RNDN);
        mpfr_sub(r.re.raw(), t1.raw(), t2.raw(), MPFR_RNDN);
        mpfr_mul(t1.raw(), a.re.raw(), b.im.raw(), MPFR_RNDN);
        mpfr_mul(t2.raw(), a.im.raw(), b.re.raw(), MPFR_RNDN);
        mpfr_add(r.im.raw(), t1.raw(), t2.raw(), MPFR_RNDN);
        return r;
    };
    auto cdiv = [&](const MpfCplx& a, const MpfCplx& b) {
        MpfCplx r{Mpf(prec), Mpf(prec)};
        Mpf den(prec), t1(prec), t2(prec);
        mpfr_sqr(t1.raw(), b.re.raw(), MPFR_RNDN);
        mpfr_sqr(t2.raw(), b.im.raw(), MPFR_RNDN);
        mpfr_add(den.raw(), t1.raw(), t2.raw(), MPFR_RNDN);
        mpfr_mul(t1.raw(), a.re.raw(), b.re.raw(), MPFR_RNDN);
        mpfr_mul(t2.raw(), a.im.raw(), b.im.raw(), MPFR_RNDN);
        mpfr_add(t1.raw(), t1.raw(), t2.raw(), MPFR_RNDN);
        mpfr_div(r.re.raw(), t1.raw(), den.raw(), MPFR_RNDN);
        mpfr_mul(t1.raw(), a.im.raw(), b.re.raw(), MPFR_RNDN);
        mpfr_mul(t2.raw(), a.re.raw(), b.im.raw(), MPFR_RNDN);
        mpfr_sub(t1.raw(), t1.raw(), t2.raw(), MPFR_RNDN);
        mpfr_div(r.im.raw(), t1.raw(), den.raw(), MPFR_RNDN);
        return r;
    };
    auto evalf = [&](const MpfCplx& x) {
        MpfCplx acc = coef[static_cast<size_t>(d)];
        for (int i = d - 1; i >= 0; --i) acc = cadd(cmul(acc, x), coef[static_cast<size_t>(i)]);
        return acc;
    };

    int iters = 400 + 4 * static_cast<int>(prec);
    Mpf tol(prec);
    mpfr_set_ui_2exp(tol.raw(), 1, -static_cast<long>(prec * 3 / 4), MPFR_RNDN);
    for (int it = 0; it < iters; ++it) {
        Mpf maxcorr(prec);
        mpfr_set_zero(maxcorr.raw(), 1);
        for (int i = 0; i < d; ++i) {
            MpfCplx denom{Mpf(prec), Mpf(prec)};
            mpfr_set_ui(denom.re.raw(), 1, MPFR_RNDN);
            for (int j = 0; j < d; ++j)
                if (j != i) denom = cmul(denom, csub(z[static_cast<size_t>(i)], z[static_cast<size_t>(j)]));
            MpfCplx w = cdiv(evalf(z[static_cast<size_t>(i)]), denom);
            z[static_cast<size_t>(i)] = csub(z[static_cast<size_t>(i)], w);
            Mpf m1(prec), m2(prec);
            mpfr_abs(m1.raw(), w.re.raw(), MPFR_RNDN);
            mpfr_abs(m2.raw(), w.im.raw(), MPFR_RNDN);
            mpfr_max(m1.raw(), m1.raw(), m2.raw(), MPFR_RNDN);
            mpfr_max(maxcorr.raw(), maxcorr.raw(), m1.raw(), MPFR_RNDN);
        }
        if (mpfr_cmp(maxcorr.raw(), tol.raw()) < 0) break;
    }

    // a-posteriori certification: disks of radius d*|W_i| around the exact
    // dyadic points cover the roots; pairwise disjoint => one root each.
    std::vector<CC> rects;
    for (int i = 0; i < d; ++i) {
        Rat zr = z[static_cast<size_t>(i)].re.to_rat();
        Rat zi = z[static_cast<size_t>(i)].im.to_rat();
        CC zp = CC::from_rats(zr, zi, prec);
        CC num = qp_eval_cc(fq, zp, prec);
        CC den(RR::from_rat(fq.back(), prec), RR::exact_zero(prec));
        for (int j = 0; j < d; ++j) {
            if (j == i) continue;
            CC zj = CC::from_rats(z[static_cast<size_t>(j)].re.to_rat(),
                                  z[static_cast<size_t>(j)].im.to_rat(), prec);
            den = den * (zp - zj);
        }
        RR den_abs2 = den.abs_sq();
        if (!den_abs2.definitely_positive()) return {};
        RR w_abs = (num.abs_sq() / den_abs2).sqrt();
        RR rad = w_abs * RR::from_int(d, prec);
        RR rre = RR(Mpf::from_rat(zr, prec, MPFR_RNDD), Mpf::from_rat(zr, prec, MPFR_RNDU)) - rad;
        RR rre_hi = RR(Mpf::from_rat(zr, prec, MPFR_RNDD), Mpf::from_rat(zr, prec, MPFR_RNDU)) + rad;
        RR rim = RR(Mpf::from_rat(zi, prec, MPFR_RNDD), Mpf::from_rat(zi, prec, MPFR_RNDU)) - rad;
        RR rim_hi = RR(Mpf::from_rat(zi, prec, MPFR_RNDD), Mpf::from_rat(zi, prec, MPFR_RNDU)) + rad;
        rects.emplace_back(RR(rre.lo(), rre_hi.hi()), RR(rim.lo(), rim_hi.hi()));
    }
    // disjointness of the rectangles (conservative: compare as boxes)
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j) {
            const CC& a = rects[static_cast<size_t>(i)];
            const CC& b = rects[static_cast<size_t>(j)];
            bool sep = a.re().definitely_lt(b.re()) || b.re().definitely_lt(a.re()) ||
                       a.im().definitely_lt(b.im()) || b.im().definitely_lt(a.im());
            if (!sep) return {};
        }
    return rects;
}

std::vector<CC> certified_roots(const QPoly& fq, mpfr_prec_t prec) {
    for (mpfr_prec_t p = std::max<mpfr_prec_t>(prec, 96);; p *= 2) {
        if (p > (mpfr_prec_t(1) << 16)) fail(errkind::internal, "root certification: precision cap");
        auto r = certified_roots_raw(fq, p);
        if (!r.empty()) return r;
    }
}

}  // namespace

void NumberField::check_irreducible() const {
    if (d_ == 1) return;
    QPoly fp = qp_derivative(f_);
    if (qp_deg(qp_gcd(f_, fp)) > 0)
        fail(errkind::reducible, "polynomial has repeated factors");
    // rational root test
    {
        Int c0 = f_.front().get_num();
        if (c0 == 0) fail(errkind::reducible, "polynomial divisible by x");
        auto divisors = [](const Int& n) {
            std::vector<Int> ds{1};
            for (const auto& [p, e] : factorize(n)) {
                size_t sz = ds.size();
                Int pk(1);
                for (long i = 0; i < e; ++i) {
                    pk *= p;
                    for (size_t k = 0; k < sz; ++k) ds.push_back(ds[k] * pk);
                }
            }
            return ds;
        };
        for (const Int& pn : divisors(c0))
            for (const Int& qn : divisors(a0_))
                for (int s : {1, -1}) {
                    Rat cand(s * pn, qn);
                    cand.canonicalize();
                    if (qp_eval(f_, cand) == 0)
                        fail(errkind::reducible, "rational root " + cand.get_str());
                }
    }
    if (d_ <= 3) return;  // no rational root and degree <= 3 => irreducible

    // mod-p factor degree pattern analysis
    std::set<int> possible;  // possible proper factor degrees 1..d-1
    for (int k = 1; k < d_; ++k) possible.insert(k);
    Int disc_num = qp_discriminant(f_).get_num();
    int tried = 0;
    for (Int p = 2; tried < 6 && !possible.empty(); mpz_nextprime(p.get_mpz_t(), p.get_mpz_t())) {
        if (a0_ % p == 0 || disc_num % p == 0) continue;
        ++tried;
        auto fac = factor_mod_p(zp_from_qpoly(qp_primitive_z(f_)), p);
        std::vector<int> degs;
        for (auto& [g, e] : fac)
            for (int i = 0; i < e; ++i) degs.push_back(zp_deg(g));
        // subset sums
        std::vector<char> reach(static_cast<size_t>(d_) + 1, 0);
        reach[0] = 1;
        for (int dg : degs)
            for (int s = d_; s >= dg; --s)
                if (reach[static_cast<size_t>(s - dg)]) reach[static_cast<size_t>(s)] = 1;
        for (auto it = possible.begin(); it != possible.end();)
            it = reach[static_cast<size_t>(*it)] ? std::next(it) : possible.erase(it);
    }
    if (possible.empty()) return;

    // exhaustive factor-degree elimination via certified root subsets
    for (mpfr_prec_t prec = 128;; prec *= 2) {
        if (prec > (mpfr_prec_t(1) << 14))
            fail(errkind::internal, "irreducibility: precision cap exceeded");
        auto roots = certified_roots(f_, prec);
        bool all_eliminated = true;
        for (int k : possible) {
            if (k > d_ - k) continue;  // complements handled symmetrically
            std::vector<int> idx(static_cast<size_t>(k));
            for (int i = 0; i < k; ++i) idx[static_cast<size_t>(i)] = i;
            while (true) {
                // candidate a0 * prod (x - rho_i): interval coefficients
                std::vector<CC> gc{CC(RR::from_rat(Rat(a0_), prec), RR::exact_zero(prec))};
                for (int i : idx) {
                    std::vector<CC> ng(gc.size() + 1,
                                       CC(RR::exact_zero(prec), RR::exact_zero(prec)));
                    for (size_t t = 0; t < gc.size(); ++t) {
                        ng[t + 1] = ng[t + 1] + gc[t];
                        CC mr = CC(RR::exact_zero(prec), RR::exact_zero(prec)) -
                                roots[static_cast<size_t>(i)];
                        ng[t] = ng[t] + gc[t] * mr;
                    }
                    gc = std::move(ng);
                }
                bool excluded = false, all_int = true;
                QPoly cand(gc.size(), Rat(0));
                for (size_t t = 0; t < gc.size(); ++t) {
                    if (!gc[t].im().contains_zero()) {
                        excluded = true;
                        break;
                    }
                    // unique integer in the real interval?
                    Rat lo = gc[t].re().lo().to_rat(), hi = gc[t].re().hi().to_rat();
                    Int ilo = ceil_rat(lo), ihi = floor_rat(hi);
                    if (ilo > ihi) {
                        excluded = true;
                        break;
                    }
                    if (ilo != ihi) {
                        all_int = false;
                        break;
                    }
                    cand[t] = Rat(ilo);
                }
                if (!excluded && all_int) {
                    QPoly g = qp_primitive_z(qp_normalize(std::move(cand)));
                    if (qp_deg(g) == k && qp_is_zero(qp_mod(f_, g)))
                        fail(errkind::reducible, "factor found of degree " + std::to_string(k));
                    excluded = true;  // integer candidate does not divide
                }
                if (!excluded) {
                    all_eliminated = false;
                    break;
                }
                // next combination
                int pos = k - 1;
                while (pos >= 0 && idx[static_cast<size_t>(pos)] == d_ - k + pos) --pos;
                if (pos < 0) break;
                ++idx[static_cast<size_t>(pos)];
                for (int t = pos + 1; t < k; ++t)
                    idx[static_cast<size_t>(t)] = idx[static_cast<size_t>(t - 1)] + 1;
            }
            if (!all_eliminated) break;
        }
        if (all_eliminated) return;
    }
}

// ---------- basis, discriminant, theta ----------

void NumberField::setup_basis(const std::optional<std::vector<std::vector<Rat>>>& basis) {
    size_t n = static_cast<size_t>(d_);
    if (!basis) {
        basis_.assign(n, std::vector<Rat>(n, Rat(0)));
        Int pw(1);
        for (size_t j = 0; j < n; ++j) {
            basis_[j][j] = Rat(pw);
            pw *= a0_;
        }
    } else {
        basis_ = *basis;
        if (basis_.size() != n) fail(errkind::non_integral, "basis must have d elements");
        for (auto& row : basis_) {
            row.resize(n, Rat(0));
        }
        if (mat_det(basis_) == 0) fail(errkind::non_integral, "basis is not a Q-basis");
    }
    auto inv = mat_inverse(basis_);
    if (!inv) fail(errkind::non_integral, "basis is not invertible");
    basis_inv_ = *inv;
}

std::vector<Rat> NumberField::to_basis_coords(const std::vector<Rat>& power_coords) const {
    size_t n = static_cast<size_t>(d_);
    std::vector<Rat> out(n, Rat(0));
    // basis_ rows are w_j in power coords; we need x with sum x_j w_j = target:
    // solve basis_^T x = power_coords
    std::vector<std::vector<Rat>> m(n, std::vector<Rat>(n));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) m[i][j] = basis_[j][i];
    auto sol = mat_solve(std::move(m), power_coords);
    if (!sol) fail(errkind::internal, "to_basis_coords: singular basis");
    return *sol;
}

std::vector<Rat> NumberField::from_basis_coords(const std::vector<Rat>& bc) const {
    size_t n = static_cast<size_t>(d_);
    std::vector<Rat> out(n, Rat(0));
    for (size_t j = 0; j < n; ++j)
        for (size_t i = 0; i < n; ++i) out[i] += bc[j] * basis_[j][i];
    return out;
}

FieldElement NumberField::element(std::vector<Rat> power_coords) const {
    return FieldElement(shared_from_this(), std::move(power_coords));
}

FieldElement NumberField::from_rat(const Rat& q) const {
    std::vector<Rat> c(static_cast<size_t>(d_), Rat(0));
    if (!c.empty()) c[0] = q;
    return FieldElement(shared_from_this(), std::move(c));
}

FieldElement NumberField::gen() const {
    std::vector<Rat> c(static_cast<size_t>(d_), Rat(0));
    if (d_ >= 2) c[1] = 1;
    // for d == 1 the generator is the rational root of f
    if (d_ == 1) c[0] = -f_[0] / f_[1];
    return FieldElement(shared_from_this(), std::move(c));
}

FieldElement NumberField::theta_elem() const {
    return gen() * from_rat(Rat(a0_));
}

FieldElement NumberField::basis_element(int j) const {
    return FieldElement(shared_from_this(), basis_[static_cast<size_t>(j)]);
}

std::vector<std::vector<Rat>> NumberField::mult_matrix(const FieldElement& a) const {
    size_t n = static_cast<size_t>(d_);
    std::vector<std::vector<Rat>> m(n, std::vector<Rat>(n, Rat(0)));
    QPoly ap = a.as_poly();
    QPoly cur = ap;  // a * alpha^j, reduced
    for (size_t j = 0; j < n; ++j) {
        if (j > 0) {
            cur.insert(cur.begin(), Rat(0));  // multiply by alpha
            cur = qp_mod(cur, f_);
        }
        for (size_t i = 0; i < cur.size(); ++i) m[i][j] = cur[i];
    }
    return m;
}

void NumberField::compute_discriminant_theta() {
    size_t n = static_cast<size_t>(d_);
    // integrality of the basis: each w_j an algebraic integer, ring closed
    std::vector<FieldElement> w;
    for (size_t j = 0; j < n; ++j) w.push_back(basis_element(static_cast<int>(j)));
    for (auto& e : w)
        if (!e.is_algebraic_integer())
            fail(errkind::non_integral, "basis element is not an algebraic integer");
    // 1 must lie in the Z-span, and products must stay in the Z-span
    {
        auto in_span = [&](const FieldElement& e) {
            auto bc = to_basis_coords(e.coords());
            for (const auto& c : bc)
                if (c.get_den() != 1) return false;
            return true;
        };
        if (!in_span(one())) fail(errkind::non_integral, "1 not in the Z-span of the basis");
        for (size_t i = 0; i < n; ++i)
            for (size_t j = i; j < n; ++j)
                if (!in_span(w[i] * w[j]))
                    fail(errkind::non_integral, "basis Z-span is not closed under multiplication");
    }
    // trace-form discriminant
    std::vector<std::vector<Rat>> tf(n, std::vector<Rat>(n));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i; j < n; ++j) {
            Rat t = (w[i] * w[j]).trace();
            tf[i][j] = t;
            tf[j][i] = t;
        }
    Rat dsc = mat_det(std::move(tf));
    if (dsc.get_den() != 1 || dsc == 0)
        fail(errkind::non_integral, "discriminant of basis not a nonzero integer");
    disc_ = dsc.get_num();
    // sign sanity: sign(D) = (-1)^{r2}
    if ((r2_ % 2 == 0) != (disc_ > 0))
        fail(errkind::internal, "discriminant sign inconsistent with signature");

    // theta <= sqrt|D| check (warning only)
    for (mpfr_prec_t p = 128;; p *= 2) {
        RR th = theta(p);
        RR d_abs = RR::from_rat(Rat(abs(disc_)), p);
        RR th2 = th.sq();
        if (th2.definitely_le(d_abs)) {
            theta_warning_ = false;
            break;
        }
        if (d_abs.definitely_lt(th2)) {
            theta_warning_ = true;
            break;
        }
        if (p > 4096) {  // undecided tie: theta == sqrt|D| satisfies the bound
            theta_warning_ = false;
            break;
        }
    }
}

RR NumberField::theta(mpfr_prec_t prec) const {
    auto iv_max = [](const RR& a, const RR& b) {
        mpfr_prec_t p = std::max(a.prec(), b.prec());
        Mpf lo(p), hi(p);
        mpfr_max(lo.raw(), a.lo().raw(), b.lo().raw(), MPFR_RNDD);
        mpfr_max(hi.raw(), a.hi().raw(), b.hi().raw(), MPFR_RNDU);
        return RR(std::move(lo), std::move(hi));
    };
    RR best = RR::from_int(1, prec);
    auto roots = embeddings(prec);
    for (int i = 0; i < d_; ++i) {
        RR sum = RR::exact_zero(prec);
        for (size_t j = 0; j < static_cast<size_t>(d_); ++j) {
            QPoly wp = qp_normalize(QPoly(basis_[j].begin(), basis_[j].end()));
            CC val = qp_eval_cc(wp, roots[static_cast<size_t>(i)], prec);
            sum = sum + val.abs();
        }
        best = iv_max(best, sum);
    }
    return best;
}

// ---------- embeddings ----------

const QPoly& NumberField::pair_sum_poly() const {
    if (!pair_sum_) {
        // P(y) = Res_z(f(z), f(y - z)) up to scalar; interpolate in y
        int n = d_ * d_;
        std::vector<Rat> xs, ys;
        for (int t = 0; xs.size() < static_cast<size_t>(n) + 1; ++t) {
            Rat yt(t);
            // f(yt - z) as poly in z
            QPoly fyz;  // coefficients in z
            QPoly shifted{yt, Rat(-1)};  // yt - z
            QPoly acc{Rat(1)};
            QPoly res{Rat(0)};
            for (size_t i = 0; i < f_.size(); ++i) {
                res = qp_add(res, qp_scale(acc, f_[i]));
                acc = qp_mul(acc, shifted);
            }
            fyz = res;
            xs.push_back(yt);
            ys.push_back(qp_resultant(f_, fyz));
        }
        pair_sum_ = qp_interpolate(xs, ys);
    }
    return *pair_sum_;
}

std::vector<CC> NumberField::compute_roots(mpfr_prec_t prec) const {
    size_t n = static_cast<size_t>(d_);
    std::vector<CC> out(n);
    // real embeddings from Sturm isolation, refined by bisection
    std::vector<std::pair<Rat, Rat>> ivs = real_root_ivs_;
    for (size_t i = 0; i < ivs.size(); ++i) {
        auto iv = ivs[i];
        // bisect until the rational interval is below 2^-prec in width
        Rat target = pow_rat(Rat(1, 2), static_cast<long>(prec));
        while (iv.second - iv.first > target) iv = qp_refine_root(f_, *sturm_, iv);
        out[i] = CC(RR(Mpf::from_rat(iv.first, prec, MPFR_RNDD),
                       Mpf::from_rat(iv.second, prec, MPFR_RNDU)),
                    RR::exact_zero(prec));
    }
    if (r2_ == 0) return out;

    for (mpfr_prec_t p = prec;; p *= 2) {
        if (p > (mpfr_prec_t(1) << 16)) fail(errkind::internal, "embeddings: precision cap");
        auto rects = certified_roots_raw(f_, p);
        if (rects.empty()) continue;
        std::vector<CC> upper;
        int touching = 0;
        for (auto& r : rects) {
            if (r.im().lo().sgn() > 0) upper.push_back(r);
            else if (r.im().hi().sgn() < 0) continue;
            else ++touching;
        }
        if (touching != r1_ || static_cast<int>(upper.size()) != r2_) continue;
        // canonical order among upper roots: by re, ties by im; re-equality
        // decided exactly through the pair-sum polynomial
        bool need_retry = false;
        auto re_equal = [&](const CC& a, const CC& b) -> std::optional<bool> {
            RR sa = a.re() + a.re();
            RR sb = b.re() + b.re();
            QPoly P = pair_sum_poly();
            QPoly sf = qp_gcd(P, qp_derivative(P));
            if (qp_deg(sf) > 0) P = qp_divmod(P, sf).first;
            auto ivsP = qp_isolate_real_roots(P);
            SturmChain stP(P);
            auto locate = [&](const RR& v) -> int {
                int found = -1;
                for (size_t k = 0; k < ivsP.size(); ++k) {
                    auto [lo, hi] = ivsP[k];
                    // v inside (lo, hi]?
                    if (mpfr_cmp_q(v.lo().raw(), lo.get_mpq_t()) > 0 &&
                        mpfr_cmp_q(v.hi().raw(), hi.get_mpq_t()) <= 0) {
                        found = static_cast<int>(k);
                        break;
                    }
                }
                return found;
            };
            // refine the isolating intervals so containment can be checked
            for (int rounds = 0; rounds < 64; ++rounds) {
                int ia = locate(sa), ib = locate(sb);
                if (ia >= 0 && ib >= 0) return ia == ib;
                bool progressed = false;
                for (auto& iv : ivsP) {
                    if (iv.second - iv.first > Rat(1, 1000000)) {
                        iv = qp_refine_root(P, stP, iv);
                        progressed = true;
                    }
                }
                if (!progressed) break;
            }
            return std::nullopt;
        };
        std::vector<size_t> order(upper.size());
        for (size_t i = 0; i < order.size(); ++i) order[i] = i;
        // insertion sort with certified comparisons
        auto less = [&](const CC& a, const CC& b) -> std::optional<bool> {
            if (a.re().definitely_lt(b.re())) return true;
            if (b.re().definitely_lt(a.re())) return false;
            auto eq = re_equal(a, b);
            if (!eq) return std::nullopt;
            if (!*eq) return std::nullopt;  // unequal but numerically unresolved
            if (a.im().definitely_lt(b.im())) return true;
            if (b.im().definitely_lt(a.im())) return false;
            return std::nullopt;
        };
        std::stable_sort(order.begin(), order.end(), [&](size_t x, size_t y) {
            auto r = less(upper[x], upper[y]);
            if (!r) need_retry = true;
            return r.value_or(false);
        });
        if (need_retry) continue;
        for (int j = 0; j < r2_; ++j) out[static_cast<size_t>(r1_ + j)] = upper[order[static_cast<size_t>(j)]];
        for (int j = 0; j < r2_; ++j)
            out[static_cast<size_t>(r1_ + r2_ + j)] = upper[order[static_cast<size_t>(j)]].conj();
        return out;
    }
}

const EmbeddingTable& NumberField::table_at(mpfr_prec_t prec) const {
    std::lock_guard<std::mutex> lk(mu_);
    if (table_.prec < prec) {
        table_.roots = compute_roots(prec);
        table_.prec = prec;
    }
    return table_;
}

std::vector<CC> NumberField::embeddings(mpfr_prec_t prec) const {
    return table_at(prec).roots;
}

std::vector<CC> NumberField::embed(const FieldElement& a, mpfr_prec_t prec) const {
    // evaluate at refined generator enclosures until the requested output
    // width is met (polynomial evaluation is Lipschitz on the enclosure)
    QPoly ap = a.as_poly();
    for (mpfr_prec_t p = prec;; p *= 2) {
        if (p > (mpfr_prec_t(1) << 16)) fail(errkind::internal, "embed: precision cap");
        auto roots = embeddings(p);
        std::vector<CC> vals;
        vals.reserve(roots.size());
        bool ok = true;
        double target = std::pow(2.0, -static_cast<double>(prec));
        for (auto& r : roots) {
            CC v = qp_eval_cc(ap, r, p);
            if (v.re().width() > target || v.im().width() > target) {
                ok = false;
                break;
            }
            vals.push_back(std::move(v));
        }
        if (ok) return vals;
    }
}

int NumberField::sign_at_real_embedding(const QPoly& g, int i) const {
    if (i < 0 || i >= r1_) fail(errkind::domain, "not a real embedding index");
    if (qp_is_zero(g)) return 0;
    QPoly common = qp_gcd(f_, g);
    auto iv = real_root_ivs_[static_cast<size_t>(i)];
    if (qp_deg(common) > 0) {
        SturmChain stc(common);
        if (stc.count_in(iv.first, iv.second) == 1) return 0;
    }
    for (int rounds = 0;; ++rounds) {
        if (rounds > 100000) fail(errkind::internal, "sign_at_real_embedding: no separation");
        mpfr_prec_t p = 128 + 64 * (rounds / 8);
        RR x(Mpf::from_rat(iv.first, p, MPFR_RNDD), Mpf::from_rat(iv.second, p, MPFR_RNDU));
        auto s = qp_eval_rr(g, x, p).sign();
        if (s && *s != 0) return *s;
        iv = qp_refine_root(f_, *sturm_, iv);
    }
}

int NumberField::cmp_abs2_at_complex_embedding(const QPoly& g, int j, const Rat& c) const {
    if (j < r1_ || j >= d_) fail(errkind::domain, "not a complex embedding index");
    // fast path: interval ladder
    for (mpfr_prec_t p = 96; p <= 96 * 32; p *= 2) {
        auto roots = embeddings(p);
        RR v = qp_eval_cc(g, roots[static_cast<size_t>(j)], p).abs_sq();
        auto cmp = v.cmp_rat(c);
        if (cmp) return *cmp;
    }
    // exact path: B(y) = prod over ordered root pairs (y - g(rho_a) g(rho_b));
    // decide the multiplicity of c and isolate matching pairs
    int n2 = d_ * d_;
    std::vector<Rat> xs, ys;
    int dg = std::max(qp_deg(g), 0);
    for (int t = 0; static_cast<int>(xs.size()) < n2 + 1; ++t) {
        Rat yt(t);
        // D_yt(z) = Res_w(f(w), yt - g(z) g(w)): interpolate in z
        int dz = d_ * dg + 1;
        std::vector<Rat> zs, ds;
        for (int u = 0; static_cast<int>(zs.size()) < dz + 1; ++u) {
            Rat z0(u);
            Rat gz = qp_eval(g, z0);
            // yt - gz*g(w) as poly in w
            QPoly pw = qp_scale(g, -gz);
            pw = qp_add(pw, qp_const(yt));
            zs.push_back(z0);
            ds.push_back(qp_resultant(f_, pw));
        }
        QPoly D = qp_interpolate(zs, ds);
        xs.push_back(yt);
        ys.push_back(qp_resultant(f_, D));
    }
    QPoly B = qp_interpolate(xs, ys);
    // multiplicity of c as a root of B
    int mult = 0;
    QPoly rem = B;
    while (!qp_is_zero(rem) && qp_eval(rem, c) == 0) {
        rem = qp_divmod(rem, QPoly{-c, Rat(1)}).first;
        ++mult;
    }
    for (mpfr_prec_t p = 96;; p *= 2) {
        if (p > (mpfr_prec_t(1) << 16))
            fail(errkind::internal, "cmp_abs2: precision cap in exact path");
        auto roots = embeddings(p);
        RR ours = qp_eval_cc(g, roots[static_cast<size_t>(j)], p).abs_sq();
        auto cmp = ours.cmp_rat(c);
        if (cmp) return *cmp;
        if (mult == 0) continue;  // not equal; the ladder will separate
        int containing = 0;
        bool ours_contains = false;
        for (int a = 0; a < d_; ++a)
            for (int b = 0; b < d_; ++b) {
                CC prod = qp_eval_cc(g, roots[static_cast<size_t>(a)], p) *
                          qp_eval_cc(g, roots[static_cast<size_t>(b)], p);
                if (prod.re().contains_rat(c) && prod.im().contains_zero()) {
                    ++containing;
                    // our pair is (j, conj j): conj j index
                    int cj = (j < r1_ + r2_) ? j + r2_ : j - r2_;
                    if (a == j && b == cj) ours_contains = true;
                }
            }
        if (containing == mult && ours_contains) return 0;
        // otherwise refine further; a pair with value != c separates eventually
    }
}

std::string NumberField::describe() const {
    std::ostringstream os;
    os << "Q[x]/(";
    for (int i = d_; i >= 0; --i) {
        const Rat& cf = f_[static_cast<size_t>(i)];
        if (cf == 0) continue;
        os << (cf > 0 && i != d_ ? "+" : "") << cf.get_str() << "*x^" << i;
    }
    os << "), d=" << d_ << ", sig=(" << r1_ << "," << r2_ << "), disc=" << disc_.get_str();
    return os.str();
}

}  // namespace tmk
