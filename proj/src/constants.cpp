#include "tmk/constants.hpp"

#include <cmath>
#include <map>

#include "tmk/errors.hpp"

namespace tmk {

CertifiedUpper CertifiedUpper::from_int(const Int& n) {
    CertifiedUpper cu;
    cu.exact = n;
    cu.upper = Mpf::from_int(n, 192, MPFR_RNDU);
    Mpf l(64);
    mpfr_log10(l.raw(), cu.upper.raw(), MPFR_RNDU);
    cu.log10 = l.to_double();
    return cu;
}

CertifiedUpper CertifiedUpper::from_rr(const RR& enclosure) {
    CertifiedUpper cu;
    cu.upper = enclosure.hi();
    Mpf l(64);
    mpfr_log10(l.raw(), cu.upper.raw(), MPFR_RNDU);
    cu.log10 = l.to_double();
    return cu;
}

std::string CertifiedUpper::str() const {
    if (exact) return exact->get_str();
    return upper.str(30);
}

Int divisor_count(const Int& N) {
    if (N < 1) fail(errkind::domain, "divisor_count: N must be >= 1");
    Int out(1);
    for (auto& [p, e] : factorize(N)) out *= Int(e + 1);
    return out;
}

Int evertse_bound(int l, int s, bool alternate) {
    if (l < 2) fail(errkind::domain, "evertse_bound: l must be >= 2");
    if (s < 0) fail(errkind::domain, "evertse_bound: s must be >= 0");
    if (alternate) {
        // (8l)^{4 l^4 (l+s+1)}
        unsigned long e = 4ul * static_cast<unsigned long>(l) * l * l * l *
                          static_cast<unsigned long>(l + s + 1);
        return pow_int(Int(8 * l), e);
    }
    if (l == 2) return pow_int(Int(2), 8ul * static_cast<unsigned long>(s) + 24ul);
    Int base = pow_int(Int(2), 33) * Int((l + 1) * (l + 1));
    unsigned long e = static_cast<unsigned long>(l) * l * l * static_cast<unsigned long>(s);
    return pow_int(base, e);
}

std::pair<Int, Int> small_kappas(int s) {
    if (s < 0) fail(errkind::domain, "small_kappas: s must be >= 0");
    Int k3 = 1 + pow_int(Int(2), 8ul * static_cast<unsigned long>(s) + 24ul);
    Int base = pow_int(Int(2), 4375) * pow_int(Int(3), 250);
    Int k4 = 1 + pow_int(base, static_cast<unsigned long>(s));
    return {k3, k4};
}

RR c3_constant(int r, const RR& delta, C3Variant variant, int d, mpfr_prec_t prec) {
    if (r < 0) fail(errkind::domain, "c3: negative rank");
    if (variant == C3Variant::Paper) {
        if (r == 0) return RR::exact_zero(prec);
        if (r == 1) return RR::from_rat(Rat(1, 2), prec);
        Rat lead(pow_int(Int(r), static_cast<unsigned long>(r) + 1), 2);
        return RR::from_rat(lead, prec) / delta.pow_ui(static_cast<unsigned long>(r - 1));
    }
    // variant: 0 / (1/d) / 29 e (r!) r sqrt(r-1) log d
    if (r == 0) return RR::exact_zero(prec);
    if (r == 1) return RR::from_rat(Rat(1, d), prec);
    Int rfact(1);
    for (int i = 2; i <= r; ++i) rfact *= i;
    RR e = RR::from_int(1, prec).exp();
    RR v = RR::from_int(29, prec) * e * RR::from_rat(Rat(rfact * r), prec);
    v = v * RR::from_int(r - 1, prec).sqrt();
    v = v * RR::from_int(d, prec).log();
    return v;
}

ProblemData problem_data(SCtxPtr ctx, const FieldElement& mu,
                         const std::array<FieldElement, 3>& alphas) {
    if (mu.is_zero()) fail(errkind::domain, "problem_data: mu must be nonzero");
    for (auto& a : alphas)
        if (a.is_zero()) fail(errkind::domain, "problem_data: alphas must be nonzero");
    const auto& K = ctx->field();

    // least positive q with q*alpha_i in O_S: outside-S denominators only
    std::map<Int, long> need;  // p -> required ord_p(q)
    for (auto& a : alphas) {
        for (const Int& p : support_primes(a)) {
            for (const Place& P : places_above(K, p)) {
                bool in_S = false;
                for (auto& Q : ctx->finite_places())
                    if (Q.p == P.p && Q.index_above_p == P.index_above_p) in_S = true;
                if (in_S) continue;
                long ord = valuation(a, P);
                if (ord < 0) {
                    long req = (-ord + P.e - 1) / P.e;  // ceil(-ord/e)
                    auto it = need.find(p);
                    if (it == need.end() || it->second < req) need[p] = req;
                }
            }
        }
    }
    ProblemData pd;
    pd.ctx = std::move(ctx);
    pd.mu = mu;
    pd.alphas = alphas;
    pd.q = 1;
    for (auto& [p, e] : need) pd.q *= pow_int(p, static_cast<unsigned long>(e));
    // verify the defining property
    for (auto& a : alphas) {
        FieldElement qa = a * K->from_rat(Rat(pd.q));
        if (s_membership(qa, *pd.ctx) == SMembership::Outside)
            fail(errkind::internal, "problem_data: q*alpha not an S-integer");
    }
    FieldElement q3mu = mu * K->from_rat(Rat(pd.q * pd.q * pd.q));
    if (s_membership(q3mu, *pd.ctx) == SMembership::Outside)
        fail(errkind::domain, "problem_data: q^3 mu is not an S-integer (no solutions exist)");
    pd.k = s_norm(mu, *pd.ctx);
    Rat nsq = s_norm(K->from_rat(Rat(pd.q)), *pd.ctx);
    // N_S(q) <= q^d
    if (nsq > pow_rat(Rat(pd.q), K->degree()))
        fail(errkind::internal, "problem_data: N_S(q) > q^d");
    Rat mrat = nsq * nsq * nsq * pd.k;
    if (mrat != s_norm(q3mu, *pd.ctx))
        fail(errkind::internal, "problem_data: m = N_S(q)^3 k != N_S(q^3 mu)");
    if (mrat.get_den() != 1 || mrat <= 0)
        fail(errkind::internal, "problem_data: m is not a positive integer");
    pd.m = mrat.get_num();
    return pd;
}

namespace {

struct MaybeExact {
    std::optional<Rat> ex;
    RR iv;
};

MaybeExact me_exact(const Rat& q, mpfr_prec_t prec) { return {q, RR::from_rat(q, prec)}; }
MaybeExact me_iv(RR v) { return {std::nullopt, std::move(v)}; }

MaybeExact operator*(const MaybeExact& a, const MaybeExact& b) {
    if (a.ex && b.ex) {
        Rat p = *a.ex * *b.ex;
        return {p, RR::from_rat(p, std::max(a.iv.prec(), b.iv.prec()))};
    }
    return {std::nullopt, a.iv * b.iv};
}

}  // namespace

ConstantsReport kappa_report(const ProblemData& pd, const DeltaK& delta, bool literal_r_squared,
                             mpfr_prec_t prec) {
    const auto& ctx = *pd.ctx;
    const auto& K = ctx.field();
    ConstantsReport rep;
    rep.d = K->degree();
    rep.r1 = K->r1();
    rep.r2 = K->r2();
    rep.r = K->unit_rank();
    rep.t = ctx.t();
    rep.s = ctx.rank();
    rep.nu = ctx.nu();
    rep.h_K = ctx.units().h_K;
    rep.D_K = K->discriminant();
    rep.theta = K->theta(prec);
    rep.R_K = ctx.units().regulator;
    rep.delta = delta.value;
    rep.q = pd.q;
    rep.m = pd.m;
    rep.k = pd.k;
    rep.pi_r2_convention = !literal_r_squared;
    auto [k3, k4] = small_kappas(rep.s);
    rep.kappa3 = k3;
    rep.kappa4 = k4;
    rep.c3 = c3_constant(rep.r, delta.value, C3Variant::Paper, rep.d, prec);

    // kappa5 with exactness tracking
    MaybeExact k5 = me_exact(pow_rat(Rat(2), rep.r + 1), prec);
    int pi_exp = literal_r_squared ? rep.r * rep.r : rep.r2;
    if (pi_exp > 0)
        k5 = k5 * me_iv(RR::pi(prec).pow_ui(static_cast<unsigned long>(pi_exp)));
    // |D_K|^{-1/2}
    Int Dabs = abs(rep.D_K);
    Int sq = sqrt(Dabs);
    if (sq * sq == Dabs) {
        k5 = k5 * me_exact(Rat(1, sq), prec);
    } else {
        k5 = k5 * me_iv(RR::from_int(1, prec) / RR::from_rat(Rat(Dabs), prec).sqrt());
    }
    // e^{c3 d R_K}
    if (rep.r == 0) {
        // c3 = 0 exactly
    } else {
        k5 = k5 * me_iv((rep.c3 * RR::from_int(rep.d, prec) * rep.R_K).exp());
    }
    // nu^{t d h_K}
    unsigned long ee = static_cast<unsigned long>(rep.t) * static_cast<unsigned long>(rep.d) *
                       rep.h_K.get_ui();
    k5 = k5 * me_exact(Rat(pow_int(rep.nu, ee)), prec);
    // (1 + theta)^d
    if (rep.d == 1) {
        k5 = k5 * me_exact(Rat(2), prec);  // theta = 1 exactly for the basis {1}
    } else {
        k5 = k5 * me_iv((RR::from_int(1, prec) + rep.theta).pow_ui(
                            static_cast<unsigned long>(rep.d)));
    }
    if (k5.ex && k5.ex->get_den() == 1) {
        rep.kappa5 = CertifiedUpper::from_int(k5.ex->get_num());
    } else {
        rep.kappa5 = CertifiedUpper::from_rr(k5.iv);
        rep.kappa5.exact.reset();
    }

    // kappa6 = d(m)^2 kappa5^3 m ; kappa1 = kappa6 kappa3^2 kappa4^2 ; kappa2 = 4 kappa1
    Int dm = divisor_count(rep.m);
    MaybeExact k6 = me_exact(Rat(dm * dm), prec) * k5 * k5 * k5 * me_exact(Rat(rep.m), prec);
    MaybeExact k1 = k6 * me_exact(Rat(k3 * k3), prec) * me_exact(Rat(k4 * k4), prec);
    MaybeExact k2 = k1 * me_exact(Rat(4), prec);
    auto finish = [&](const MaybeExact& v) {
        if (v.ex && v.ex->get_den() == 1) return CertifiedUpper::from_int(v.ex->get_num());
        return CertifiedUpper::from_rr(v.iv);
    };
    rep.kappa6 = finish(k6);
    rep.kappa1 = finish(k1);
    rep.kappa2 = finish(k2);
    return rep;
}

}  // namespace tmk
