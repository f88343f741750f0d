#include "tmk/modpoly.hpp"

#include <algorithm>

#include "tmk/errors.hpp"

namespace tmk {

ZPoly zp_reduce(ZPoly a, const Int& m) {
    for (auto& c : a) {
        mpz_mod(c.get_mpz_t(), c.get_mpz_t(), m.get_mpz_t());
    }
    while (!a.empty() && a.back() == 0) a.pop_back();
    return a;
}

int zp_deg(const ZPoly& a) { return static_cast<int>(a.size()) - 1; }

ZPoly zp_from_qpoly(const QPoly& a) {
    ZPoly r;
    r.reserve(a.size());
    for (const auto& c : a) {
        if (c.get_den() != 1) fail(errkind::internal, "zp_from_qpoly: non-integer coefficient");
        r.push_back(c.get_num());
    }
    return r;
}

QPoly zp_to_qpoly(const ZPoly& a) {
    QPoly r;
    r.reserve(a.size());
    for (const auto& c : a) r.emplace_back(c);
    return qp_normalize(std::move(r));
}

ZPoly zp_add(const ZPoly& a, const ZPoly& b, const Int& m) {
    ZPoly r(std::max(a.size(), b.size()), Int(0));
    for (size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (size_t i = 0; i < b.size(); ++i) r[i] += b[i];
    return zp_reduce(std::move(r), m);
}

ZPoly zp_sub(const ZPoly& a, const ZPoly& b, const Int& m) {
    ZPoly r(std::max(a.size(), b.size()), Int(0));
    for (size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
    return zp_reduce(std::move(r), m);
}

ZPoly zp_mul(const ZPoly& a, const ZPoly& b, const Int& m) {
    if (a.empty() || b.empty()) return {};
    ZPoly r(a.size() + b.size() - 1, Int(0));
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    }
    return zp_reduce(std::move(r), m);
}

std::pair<ZPoly, ZPoly> zp_divmod(const ZPoly& a, const ZPoly& b, const Int& m) {
    if (b.empty()) fail(errkind::div_zero, "zp_divmod by zero");
    Int inv;
    if (mpz_invert(inv.get_mpz_t(), b.back().get_mpz_t(), m.get_mpz_t()) == 0)
        fail(errkind::internal, "zp_divmod: leading coefficient not invertible");
    ZPoly rem = a, quot;
    int db = zp_deg(b);
    if (zp_deg(a) >= db) quot.assign(a.size() - b.size() + 1, Int(0));
    while (zp_deg(rem) >= db) {
        int k = zp_deg(rem) - db;
        Int c = rem.back() * inv % m;
        quot[k] = c;
        for (int i = 0; i <= db; ++i) rem[k + i] -= c * b[i];
        rem = zp_reduce(std::move(rem), m);
    }
    return {zp_reduce(std::move(quot), m), std::move(rem)};
}

ZPoly zp_monic(const ZPoly& a, const Int& m) {
    if (a.empty()) return a;
    Int inv;
    if (mpz_invert(inv.get_mpz_t(), a.back().get_mpz_t(), m.get_mpz_t()) == 0)
        fail(errkind::internal, "zp_monic: leading coefficient not invertible");
    ZPoly r = a;
    for (auto& c : r) c = c * inv % m;
    return zp_reduce(std::move(r), m);
}

ZPoly zp_gcd(const ZPoly& a, const ZPoly& b, const Int& p) {
    ZPoly x = zp_reduce(a, p), y = zp_reduce(b, p);
    while (!y.empty()) {
        ZPoly r = zp_divmod(x, y, p).second;
        x = std::move(y);
        y = std::move(r);
    }
    return x.empty() ? x : zp_monic(x, p);
}

ZPoly zp_powmod(const ZPoly& base, const Int& e, const ZPoly& f, const Int& p) {
    ZPoly r{Int(1)}, b = zp_divmod(base, f, p).second;
    Int k = e;
    while (k > 0) {
        if (mpz_odd_p(k.get_mpz_t())) r = zp_divmod(zp_mul(r, b, p), f, p).second;
        b = zp_divmod(zp_mul(b, b, p), f, p).second;
        k >>= 1;
    }
    return r;
}

Int zp_eval(const ZPoly& a, const Int& x, const Int& m) {
    Int r(0);
    for (size_t i = a.size(); i-- > 0;) r = (r * x + a[i]) % m;
    if (r < 0) r += m;
    return r;
}

namespace {

ZPoly zp_derivative(const ZPoly& a, const Int& p) {
    if (a.size() <= 1) return {};
    ZPoly r(a.size() - 1);
    for (size_t i = 1; i < a.size(); ++i) r[i - 1] = a[i] * Int(static_cast<long>(i));
    return zp_reduce(std::move(r), p);
}

// squarefree decomposition over F_p, returns (g_i, multiplicity)
void squarefree_decomp(const ZPoly& f, const Int& p, int mult,
                       std::vector<std::pair<ZPoly, int>>& out) {
    ZPoly fp = zp_derivative(f, p);
    if (fp.empty()) {
        // f = v(x^p); over the prime field the p-th root keeps coefficients
        unsigned long pi = p.get_ui();
        ZPoly v;
        for (size_t i = 0; i < f.size(); i += pi) v.push_back(f[i]);
        squarefree_decomp(v, p, mult * static_cast<int>(pi), out);
        return;
    }
    ZPoly c = zp_gcd(f, fp, p);
    ZPoly w = zp_divmod(f, c, p).first;
    int i = 1;
    while (zp_deg(w) > 0) {
        ZPoly y = zp_gcd(w, c, p);
        ZPoly z = zp_divmod(w, y, p).first;
        if (zp_deg(z) > 0) out.emplace_back(zp_monic(z, p), mult * i);
        w = std::move(y);
        c = zp_divmod(c, w, p).first;
        ++i;
    }
    if (zp_deg(c) > 0) squarefree_decomp(c, p, mult, out);
}

// equal-degree splitting of a squarefree product of degree-k irreducibles
void edf(const ZPoly& f, int k, const Int& p, std::vector<ZPoly>& out) {
    int n = zp_deg(f);
    if (n == k) {
        out.push_back(zp_monic(f, p));
        return;
    }
    // deterministic sequence of trial elements: x+c, then higher-degree polys
    Int q = pow_int(p, static_cast<unsigned long>(k));
    for (Int counter(0);; ++counter) {
        // build trial poly from counter digits base p, degree < 2k-1, nonconstant
        ZPoly r;
        Int c = counter;
        for (int i = 0; i < 2 * k - 1 || r.size() < 2; ++i) {
            Int digit = c % p;
            r.push_back(digit);
            c /= p;
            if (c == 0 && i >= 1) break;
        }
        r = zp_reduce(std::move(r), p);
        if (zp_deg(r) < 1) continue;
        ZPoly g = zp_gcd(f, r, p);
        if (zp_deg(g) == 0) {
            if (p == 2) {
                // trace map: T(r) = r + r^2 + ... + r^(2^(k-1))
                ZPoly t = zp_divmod(r, f, p).second, acc = t;
                for (int i = 1; i < k; ++i) {
                    t = zp_divmod(zp_mul(t, t, p), f, p).second;
                    acc = zp_add(acc, t, p);
                }
                g = zp_gcd(f, acc, p);
            } else {
                ZPoly h = zp_powmod(r, (q - 1) / 2, f, p);
                h = zp_sub(h, ZPoly{Int(1)}, p);
                g = zp_gcd(f, h, p);
            }
        }
        if (zp_deg(g) > 0 && zp_deg(g) < n) {
            edf(g, k, p, out);
            edf(zp_divmod(f, g, p).first, k, p, out);
            return;
        }
    }
}

}  // namespace

std::vector<std::pair<ZPoly, int>> factor_mod_p(const ZPoly& f_in, const Int& p) {
    ZPoly f = zp_monic(zp_reduce(f_in, p), p);
    std::vector<std::pair<ZPoly, int>> sf;
    if (zp_deg(f) > 0) squarefree_decomp(f, p, 1, sf);
    std::vector<std::pair<ZPoly, int>> out;
    for (auto& [g, mult] : sf) {
        // distinct-degree on g
        ZPoly h{Int(0), Int(1)};  // x
        ZPoly rest = g;
        for (int k = 1; zp_deg(rest) >= 2 * k; ++k) {
            h = zp_powmod(h, p, rest, p);
            ZPoly hx = zp_sub(h, ZPoly{Int(0), Int(1)}, p);
            ZPoly d = zp_gcd(rest, hx, p);
            if (zp_deg(d) > 0) {
                std::vector<ZPoly> irr;
                edf(d, k, p, irr);
                for (auto& q : irr) out.emplace_back(std::move(q), mult);
                rest = zp_divmod(rest, d, p).first;
                h = zp_divmod(h, rest, p).second;
            }
        }
        if (zp_deg(rest) > 0) out.emplace_back(zp_monic(rest, p), mult);
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (a.first.size() != b.first.size()) return a.first.size() < b.first.size();
        for (size_t i = a.first.size(); i-- > 0;)
            if (a.first[i] != b.first[i]) return a.first[i] < b.first[i];
        return a.second < b.second;
    });
    return out;
}

std::vector<ZPoly> hensel_lift(const ZPoly& f, const std::vector<ZPoly>& blocks,
                               const Int& p, unsigned N) {
    if (blocks.size() == 1) {
        ZPoly r = zp_reduce(f, pow_int(p, N));
        return {r};
    }
    // lift pairwise: A = blocks[0], B = prod of the rest, recurse on B
    ZPoly A = zp_reduce(blocks[0], p);
    ZPoly B{Int(1)};
    for (size_t i = 1; i < blocks.size(); ++i) B = zp_mul(B, blocks[i], p);

    // Bezout: u*A + v*B = 1 mod p
    ZPoly u, v;
    {
        // extended euclid over F_p
        ZPoly r0 = A, r1 = B, s0{Int(1)}, s1{}, t0{}, t1{Int(1)};
        while (!r1.empty()) {
            auto [q, r2] = zp_divmod(r0, r1, p);
            ZPoly s2 = zp_sub(s0, zp_mul(q, s1, p), p);
            ZPoly t2 = zp_sub(t0, zp_mul(q, t1, p), p);
            r0 = std::move(r1); r1 = std::move(r2);
            s0 = std::move(s1); s1 = std::move(s2);
            t0 = std::move(t1); t1 = std::move(t2);
        }
        if (zp_deg(r0) != 0) fail(errkind::internal, "hensel_lift: blocks not coprime mod p");
        Int inv;
        mpz_invert(inv.get_mpz_t(), r0[0].get_mpz_t(), p.get_mpz_t());
        for (auto& c : s0) c = c * inv % p;
        for (auto& c : t0) c = c * inv % p;
        u = zp_reduce(std::move(s0), p);
        v = zp_reduce(std::move(t0), p);
    }

    // linear lifting mod p^2, p^3, ..., p^N
    Int mod = p;
    for (unsigned n = 1; n < N; ++n) {
        Int newmod = mod * p;
        // E = (f - A*B)/p^n  (computed over Z, exact divisibility)
        ZPoly AB = zp_mul(A, B, newmod);
        ZPoly E(std::max(f.size(), AB.size()), Int(0));
        for (size_t i = 0; i < f.size(); ++i) E[i] += f[i];
        for (size_t i = 0; i < AB.size(); ++i) E[i] -= AB[i];
        E = zp_reduce(std::move(E), newmod);
        ZPoly C;
        C.reserve(E.size());
        for (auto& c : E) {
            if (c % mod != 0) fail(errkind::internal, "hensel_lift: inexact step");
            C.push_back(c / mod);
        }
        C = zp_reduce(std::move(C), p);
        // a = v*C mod A ; b = u*C mod B  (mod p)
        ZPoly a = zp_divmod(zp_mul(v, C, p), A, p).second;
        ZPoly b = zp_divmod(zp_mul(u, C, p), B, p).second;
        // A += p^n * a ; B += p^n * b
        ZPoly Ad = A, Bd = B;
        Ad.resize(std::max(A.size(), a.size()), Int(0));
        for (size_t i = 0; i < a.size(); ++i) Ad[i] += mod * a[i];
        Bd.resize(std::max(B.size(), b.size()), Int(0));
        for (size_t i = 0; i < b.size(); ++i) Bd[i] += mod * b[i];
        A = zp_reduce(std::move(Ad), newmod);
        B = zp_reduce(std::move(Bd), newmod);
        mod = newmod;
    }

    std::vector<ZPoly> rest(blocks.begin() + 1, blocks.end());
    std::vector<ZPoly> lifted_rest = hensel_lift(B, rest, p, N);
    std::vector<ZPoly> out{A};
    out.insert(out.end(), lifted_rest.begin(), lifted_rest.end());
    return out;
}

bool dedekind_p_maximal(const ZPoly& T, const Int& p) {
    auto factors = factor_mod_p(T, p);
    // g1 = prod of radicals, h = prod g_i^(e_i - 1), both lifted monically
    ZPoly g1{Int(1)}, h{Int(1)};
    Int big = p * p;  // any modulus large enough to act as plain Z for small lifts
    (void)big;
    for (auto& [g, e] : factors) {
        g1 = zp_mul(g1, g, p);
        for (int i = 1; i < e; ++i) h = zp_mul(h, g, p);
    }
    // F = (g1*h - T)/p over Z with canonical lifts in [0, p)
    ZPoly prod(g1.size() + h.size() - 1, Int(0));
    for (size_t i = 0; i < g1.size(); ++i)
        for (size_t j = 0; j < h.size(); ++j) prod[i + j] += g1[i] * h[j];
    ZPoly F(std::max(prod.size(), T.size()), Int(0));
    for (size_t i = 0; i < prod.size(); ++i) F[i] += prod[i];
    for (size_t i = 0; i < T.size(); ++i) F[i] -= T[i];
    for (auto& c : F) {
        if (c % p != 0) fail(errkind::internal, "dedekind: lift mismatch");
        c /= p;
    }
    F = zp_reduce(std::move(F), p);
    ZPoly d = zp_gcd(zp_gcd(F, g1, p), h, p);
    return zp_deg(d) <= 0;
}

Int zp_resultant_z(const ZPoly& a, const ZPoly& b) {
    Rat r = qp_resultant(zp_to_qpoly(a), zp_to_qpoly(b));
    if (r.get_den() != 1) fail(errkind::internal, "integer resultant not integral");
    return r.get_num();
}

}  // namespace tmk
