#include "tmk/poly.hpp"

#include <algorithm>

#include "tmk/errors.hpp"

namespace tmk {

QPoly qp_normalize(QPoly p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
    return p;
}

int qp_deg(const QPoly& p) { return static_cast<int>(p.size()) - 1; }
bool qp_is_zero(const QPoly& p) { return p.empty(); }

QPoly qp_from_ints(const std::vector<long>& c) {
    QPoly p;
    p.reserve(c.size());
    for (long v : c) p.emplace_back(v);
    return qp_normalize(std::move(p));
}

QPoly qp_x() { return QPoly{Rat(0), Rat(1)}; }

QPoly qp_const(const Rat& c) { return c == 0 ? QPoly{} : QPoly{c}; }

QPoly qp_add(const QPoly& a, const QPoly& b) {
    QPoly r(std::max(a.size(), b.size()), Rat(0));
    for (size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (size_t i = 0; i < b.size(); ++i) r[i] += b[i];
    return qp_normalize(std::move(r));
}

QPoly qp_sub(const QPoly& a, const QPoly& b) {
    QPoly r(std::max(a.size(), b.size()), Rat(0));
    for (size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
    return qp_normalize(std::move(r));
}

QPoly qp_neg(const QPoly& a) {
    QPoly r = a;
    for (auto& c : r) c = -c;
    return r;
}

QPoly qp_mul(const QPoly& a, const QPoly& b) {
    if (a.empty() || b.empty()) return {};
    QPoly r(a.size() + b.size() - 1, Rat(0));
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    }
    return qp_normalize(std::move(r));
}

QPoly qp_scale(const QPoly& a, const Rat& c) {
    if (c == 0) return {};
    QPoly r = a;
    for (auto& x : r) x *= c;
    return r;
}

std::pair<QPoly, QPoly> qp_divmod(const QPoly& a, const QPoly& b) {
    if (b.empty()) fail(errkind::div_zero, "polynomial division by zero");
    QPoly rem = a, quot;
    int db = qp_deg(b);
    if (qp_deg(a) >= db) quot.assign(a.size() - b.size() + 1, Rat(0));
    const Rat& lc = b.back();
    while (qp_deg(rem) >= db) {
        int k = qp_deg(rem) - db;
        Rat c = rem.back() / lc;
        quot[k] = c;
        for (int i = 0; i <= db; ++i) rem[k + i] -= c * b[i];
        rem = qp_normalize(std::move(rem));
    }
    return {qp_normalize(std::move(quot)), std::move(rem)};
}

QPoly qp_mod(const QPoly& a, const QPoly& b) { return qp_divmod(a, b).second; }

QPoly qp_monic(const QPoly& a) {
    if (a.empty()) return a;
    return qp_scale(a, 1 / a.back());
}

QPoly qp_gcd(const QPoly& a, const QPoly& b) {
    QPoly x = a, y = b;
    while (!y.empty()) {
        QPoly r = qp_mod(x, y);
        x = std::move(y);
        y = std::move(r);
    }
    return qp_monic(x);
}

QPoly qp_derivative(const QPoly& a) {
    if (a.size() <= 1) return {};
    QPoly r(a.size() - 1);
    for (size_t i = 1; i < a.size(); ++i) r[i - 1] = a[i] * Rat(static_cast<long>(i));
    return qp_normalize(std::move(r));
}

bool qp_is_squarefree(const QPoly& a) {
    return qp_deg(qp_gcd(a, qp_derivative(a))) <= 0;
}

Rat qp_eval(const QPoly& a, const Rat& x) {
    Rat r(0);
    for (size_t i = a.size(); i-- > 0;) r = r * x + a[i];
    return r;
}

RR qp_eval_rr(const QPoly& a, const RR& x, mpfr_prec_t prec) {
    RR r = RR::exact_zero(prec);
    for (size_t i = a.size(); i-- > 0;) r = r * x + RR::from_rat(a[i], prec);
    return r;
}

CC qp_eval_cc(const QPoly& a, const CC& x, mpfr_prec_t prec) {
    CC r(RR::exact_zero(prec), RR::exact_zero(prec));
    for (size_t i = a.size(); i-- > 0;)
        r = r * x + CC(RR::from_rat(a[i], prec), RR::exact_zero(prec));
    return r;
}

Rat qp_resultant(const QPoly& a, const QPoly& b) {
    // Euclidean algorithm with the standard transformation rules.
    if (a.empty() || b.empty()) return Rat(0);
    QPoly f = a, g = b;
    Rat res(1);
    while (qp_deg(g) > 0) {
        QPoly r = qp_mod(f, g);
        int df = qp_deg(f), dg = qp_deg(g), dr = qp_deg(r);
        // res(f,g) = (-1)^(df*dg) lc(g)^(df-dr) res(g,r), with res(g,0)=0
        Rat sign((df % 2 && dg % 2) ? -1 : 1);
        if (r.empty()) return Rat(0);
        res *= sign * pow_rat(g.back(), df - dr);
        f = std::move(g);
        g = std::move(r);
    }
    // g constant nonzero: res(f, c) = c^deg(f)
    res *= pow_rat(g.back(), qp_deg(f));
    return res;
}

Rat qp_discriminant(const QPoly& a) {
    int n = qp_deg(a);
    if (n < 1) fail(errkind::domain, "discriminant of constant polynomial");
    Rat r = qp_resultant(a, qp_derivative(a));
    Rat sign((n * (n - 1) / 2) % 2 ? -1 : 1);
    return sign * r / a.back();
}

QPoly qp_primitive_z(const QPoly& a) {
    if (a.empty()) return a;
    Int den(1);
    for (const auto& c : a) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.get_den().get_mpz_t());
    Int g(0);
    for (const auto& c : a) {
        Int num = c.get_num() * den / c.get_den();
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), num.get_mpz_t());
    }
    Rat scale = Rat(den) / Rat(g);
    if (a.back() < 0) scale = -scale;
    return qp_scale(a, scale);
}

Rat qp_root_bound(const QPoly& a) {
    if (qp_deg(a) < 1) return Rat(1);
    Rat m(0);
    for (size_t i = 0; i + 1 < a.size(); ++i) {
        Rat v = abs(a[i] / a.back());
        if (v > m) m = v;
    }
    return m + 1;
}

namespace {
int sign_count(const std::vector<int>& signs) {
    int changes = 0, prev = 0;
    for (int s : signs) {
        if (s == 0) continue;
        if (prev != 0 && s != prev) ++changes;
        prev = s;
    }
    return changes;
}
}  // namespace

SturmChain::SturmChain(const QPoly& f) {
    QPoly a = f, b = qp_derivative(f);
    if (!a.empty()) chain.push_back(a);
    while (!b.empty()) {
        chain.push_back(b);
        QPoly r = qp_neg(qp_mod(a, b));
        a = std::move(b);
        b = std::move(r);
    }
}

int SturmChain::sign_changes_at(const Rat& x) const {
    std::vector<int> signs;
    signs.reserve(chain.size());
    for (const auto& p : chain) signs.push_back(sgn(qp_eval(p, x)));
    return sign_count(signs);
}

int SturmChain::sign_changes_at_minus_inf() const {
    std::vector<int> signs;
    for (const auto& p : chain) {
        int s = sgn(p.back());
        signs.push_back(qp_deg(p) % 2 ? -s : s);
    }
    return sign_count(signs);
}

int SturmChain::sign_changes_at_plus_inf() const {
    std::vector<int> signs;
    for (const auto& p : chain) signs.push_back(sgn(p.back()));
    return sign_count(signs);
}

int SturmChain::count_in(const Rat& a, const Rat& b) const {
    return sign_changes_at(a) - sign_changes_at(b);
}

int SturmChain::count_all() const {
    return sign_changes_at_minus_inf() - sign_changes_at_plus_inf();
}

std::vector<std::pair<Rat, Rat>> qp_isolate_real_roots(const QPoly& f) {
    QPoly g = f;
    // work on the squarefree part
    QPoly sf = qp_gcd(g, qp_derivative(g));
    if (qp_deg(sf) > 0) g = qp_divmod(g, sf).first;
    SturmChain st(g);
    Rat bound = qp_root_bound(g);
    std::vector<std::pair<Rat, Rat>> out, work;
    int total = st.count_in(-bound, bound);
    if (total == 0) return out;
    work.emplace_back(-bound, bound);
    while (!work.empty()) {
        auto [a, b] = work.back();
        work.pop_back();
        int n = st.count_in(a, b);
        if (n == 0) continue;
        if (n == 1) {
            out.emplace_back(a, b);
            continue;
        }
        Rat m = (a + b) / 2;
        work.emplace_back(m, b);
        work.emplace_back(a, m);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::pair<Rat, Rat> qp_refine_root(const QPoly& f, const SturmChain& st, std::pair<Rat, Rat> iv) {
    (void)f;
    Rat m = (iv.first + iv.second) / 2;
    if (st.count_in(iv.first, m) == 1) return {iv.first, m};
    return {m, iv.second};
}

QPoly qp_interpolate(const std::vector<Rat>& xs, const std::vector<Rat>& ys) {
    QPoly acc;  // running interpolant (Newton form expanded on the fly)
    QPoly basis{Rat(1)};
    std::vector<Rat> coef = ys;
    // divided differences
    for (size_t j = 1; j < xs.size(); ++j)
        for (size_t i = xs.size(); i-- > j;)
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j]);
    for (size_t i = 0; i < xs.size(); ++i) {
        acc = qp_add(acc, qp_scale(basis, coef[i]));
        basis = qp_mul(basis, QPoly{-xs[i], Rat(1)});
    }
    return acc;
}

}  // namespace tmk
