#include "tmk/places.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <sstream>

#include "tmk/errors.hpp"

namespace tmk {

std::string Place::str() const {
    std::ostringstream os;
    switch (kind) {
        case Kind::Real: os << "real#" << embedding_index; break;
        case Kind::Complex: os << "complex#" << embedding_index; break;
        case Kind::Finite: os << "(" << p.get_str() << ",#" << index_above_p << ",e=" << e
                              << ",f=" << f << ")"; break;
    }
    return os.str();
}

std::vector<Place> archimedean_places(const FieldPtr& K) {
    std::vector<Place> out;
    for (int i = 0; i < K->r1(); ++i) {
        Place v;
        v.kind = Place::Kind::Real;
        v.embedding_index = i;
        v.dv = 1;
        out.push_back(std::move(v));
    }
    for (int j = 0; j < K->r2(); ++j) {
        Place v;
        v.kind = Place::Kind::Complex;
        v.embedding_index = K->r1() + j;
        v.dv = 2;
        out.push_back(std::move(v));
    }
    return out;
}

std::vector<Place> places_above(const FieldPtr& K, const Int& p) {
    if (!is_prime(p)) fail(errkind::domain, "places_above: " + p.get_str() + " is not prime");
    if (K->degree() == 1) {
        Place v;
        v.kind = Place::Kind::Finite;
        v.p = p;
        v.e = v.f = 1;
        v.norm = p;
        v.index_above_p = 0;
        return {v};
    }
    ZPoly T = zp_from_qpoly(K->theta_poly());
    // index check: v_p(disc(Z[theta])) <= 1 is enough, else run Dedekind
    Rat dsc = qp_discriminant(K->theta_poly());
    if (valuation_int(dsc.get_num(), p) > 1 && !dedekind_p_maximal(T, p))
        fail(errkind::unsupported_prime,
             "prime " + p.get_str() + " divides the index of Z[theta]; unsupported");
    auto fac = factor_mod_p(T, p);
    std::vector<Place> out;
    int total = 0, idx = 0;
    for (auto& [g, e] : fac) {
        Place v;
        v.kind = Place::Kind::Finite;
        v.p = p;
        v.e = e;
        v.f = zp_deg(g);
        v.norm = pow_int(p, static_cast<unsigned long>(v.f));
        v.gbar = g;
        v.index_above_p = idx++;
        total += v.e * v.f;
        out.push_back(std::move(v));
    }
    if (total != K->degree()) fail(errkind::internal, "places_above: sum e*f != d");
    return out;
}

namespace {

// element as integer polynomial in theta plus denominator: a = B(theta)/den
std::pair<ZPoly, Int> theta_representation(const FieldElement& a) {
    const auto& K = a.field();
    Int a0 = K->leading_coeff();
    // a = sum c_j alpha^j = sum c_j theta^j / a0^j
    std::vector<Rat> coeffs;
    Int pw(1);
    for (int j = 0; j < K->degree(); ++j) {
        coeffs.push_back(a.coords()[static_cast<size_t>(j)] / Rat(pw));
        pw *= a0;
    }
    Int den(1);
    for (auto& c : coeffs) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.get_den().get_mpz_t());
    ZPoly B;
    for (auto& c : coeffs) B.push_back(c.get_num() * (den / c.get_den()));
    while (!B.empty() && B.back() == 0) B.pop_back();
    return {std::move(B), std::move(den)};
}

// Cache of Hensel lifts per (field, p): blocks of theta_poly mod p^N.
struct LiftCache {
    FieldPtr keepalive;
    unsigned N = 0;
    std::vector<ZPoly> lifted;   // same order as factor_mod_p output
    std::vector<ZPoly> blocks;   // g_i^{e_i} mod p
};
std::mutex lift_mu;
std::map<std::pair<const NumberField*, Int>, LiftCache> lift_cache;

std::vector<ZPoly> lifted_blocks(const FieldPtr& K, const Int& p, unsigned N) {
    std::lock_guard<std::mutex> lk(lift_mu);
    auto& entry = lift_cache[{K.get(), p}];
    if (!entry.keepalive) {
        entry.keepalive = K;
        auto fac = factor_mod_p(zp_from_qpoly(K->theta_poly()), p);
        for (auto& [g, e] : fac) {
            ZPoly b{Int(1)};
            for (int i = 0; i < e; ++i) b = zp_mul(b, g, p);
            entry.blocks.push_back(b);
        }
    }
    if (entry.N < N) {
        entry.lifted = hensel_lift(zp_from_qpoly(K->theta_poly()), entry.blocks, p, N);
        entry.N = N;
    }
    return entry.lifted;
}

}  // namespace

long valuation(const FieldElement& a, const Place& P) {
    if (P.kind != Place::Kind::Finite) fail(errkind::domain, "valuation at archimedean place");
    if (a.is_zero()) fail(errkind::zero_input, "valuation of 0");
    const auto& K = a.field();
    if (K->degree() == 1) return valuation_rat(a.rational_value(), P.p);
    auto [B, den] = theta_representation(a);
    long v_den = valuation_int(den, P.p);
    Int content(0);
    for (auto& c : B) mpz_gcd(content.get_mpz_t(), content.get_mpz_t(), c.get_mpz_t());
    long v_content = valuation_int(content, P.p);
    for (auto& c : B) c /= content;
    long ord_B = 0;
    for (unsigned N = 16;; N *= 2) {
        if (N > (1u << 14)) fail(errkind::internal, "valuation: p-adic precision cap");
        const auto blocks = lifted_blocks(K, P.p, N);
        const ZPoly& Fi = blocks[static_cast<size_t>(P.index_above_p)];
        Int R = zp_resultant_z(Fi, B);
        if (R == 0) continue;
        long v = valuation_int(R, P.p);
        if (v < static_cast<long>(N)) {
            if (v % P.f != 0) fail(errkind::internal, "valuation: f does not divide v_p(Res)");
            ord_B = v / P.f;
            break;
        }
    }
    return v_content * P.e + ord_B - v_den * P.e;
}

Rat abs_value_finite(const FieldElement& a, const Place& P) {
    if (a.is_zero()) return Rat(0);
    long ord = valuation(a, P);
    return pow_rat(Rat(P.norm), -ord);
}

RR abs_value_arch(const FieldElement& a, const Place& P, mpfr_prec_t prec) {
    if (P.kind == Place::Kind::Finite) fail(errkind::domain, "abs_value_arch at finite place");
    auto em = a.field()->embed(a, prec);
    const CC& v = em[static_cast<size_t>(P.embedding_index)];
    return P.kind == Place::Kind::Real ? v.abs() : v.abs_sq();
}

std::vector<Int> support_primes(const FieldElement& a) {
    if (a.is_zero()) return {};
    Rat n = a.norm();
    auto [B, den] = theta_representation(a);
    Int prod = n.get_num() * n.get_den() * den;
    std::vector<Int> ps;
    for (auto& [p, e] : factorize(prod)) ps.push_back(p);
    return ps;
}

ProductFormulaReport product_formula_check(const FieldElement& a, const Rat& tolerance,
                                           mpfr_prec_t prec) {
    if (a.is_zero()) fail(errkind::zero_input, "product formula of 0");
    const auto& K = a.field();
    ProductFormulaReport rep;
    rep.finite_part = Rat(1);
    for (const Int& p : support_primes(a))
        for (const Place& P : places_above(K, p)) rep.finite_part *= abs_value_finite(a, P);
    RR sum = RR::from_rat(rep.finite_part, prec).log();
    for (const Place& v : archimedean_places(K)) sum = sum + abs_value_arch(a, v, prec).log();
    rep.pass = sum.abs().definitely_lt(RR::from_rat(tolerance, prec));
    rep.sum_mid = sum.mid_double();
    rep.sum_radius = sum.width() / 2;
    return rep;
}

RR height(const FieldElement& a, mpfr_prec_t prec) {
    const auto& K = a.field();
    if (a.is_zero()) return RR::exact_zero(prec);
    Rat finite(1);
    for (const Int& p : support_primes(a))
        for (const Place& P : places_above(K, p)) {
            long ord = valuation(a, P);
            if (ord < 0) finite *= pow_rat(Rat(P.norm), -ord);
        }
    RR sum = RR::from_rat(finite, prec).log();
    for (const Place& v : archimedean_places(K))
        sum = sum + abs_value_arch(a, v, prec).max1().log();
    return sum / RR::from_int(K->degree(), prec);
}

}  // namespace tmk
