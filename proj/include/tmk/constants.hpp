#pragma once

#include <array>
#include <optional>
#include <string>

#include "tmk/s_arithmetic.hpp"

namespace tmk {

// An exact big integer or a certified dyadic upper bound, with a decimal
// log10 display for astronomically large values.
struct CertifiedUpper {
    std::optional<Int> exact;
    Mpf upper;      // dyadic, rounded upward
    double log10 = 0;

    static CertifiedUpper from_int(const Int& n);
    static CertifiedUpper from_rr(const RR& enclosure);  // takes the upper end
    std::string str() const;  // exact decimal, or dyadic upper as decimal string
};

Int divisor_count(const Int& N);

// Eq. (5.1): 2^{8s+24} for l = 2, (2^33 (l+1)^2)^{l^3 s} for l >= 3;
// the alternate bound is (8l)^{4 l^4 (l+s+1)}.
Int evertse_bound(int l, int s, bool alternate = false);

// kappa3 = 1 + 2^{8s+24}, kappa4 = 1 + (2^4375 3^250)^s
std::pair<Int, Int> small_kappas(int s);

enum class C3Variant { Paper, Alt };
// paper: c3 = (1/2) r^{r+1} delta^{-(r-1)}; alt: 0 / (1/d) / 29 e r! r sqrt(r-1) log d
RR c3_constant(int r, const RR& delta, C3Variant variant, int d, mpfr_prec_t prec = 128);

struct ProblemData {
    SCtxPtr ctx;
    FieldElement mu;
    std::array<FieldElement, 3> alphas;
    Int q;   // least positive integer with q*alpha_i in O_S
    Rat k;   // N_S(mu)
    Int m;   // N_S(q)^3 k = N_S(q^3 mu)
};

ProblemData problem_data(SCtxPtr ctx, const FieldElement& mu,
                         const std::array<FieldElement, 3>& alphas);

struct ConstantsReport {
    int d = 0, r1 = 0, r2 = 0, r = 0, t = 0, s = 0;
    Int nu, h_K, D_K;
    RR theta, R_K, c3, delta;
    Int kappa3, kappa4;
    CertifiedUpper kappa5, kappa6, kappa1, kappa2;
    Int q, m;
    Rat k;
    bool pi_r2_convention = true;  // false reproduces the literal pi^{r^2} display
};

// kappa5 = 2^{r+1} pi^{r2} |D_K|^{-1/2} e^{c3 d R_K} nu^{t d h_K} (1+theta)^d,
// kappa6 = d(m)^2 kappa5^3 m, kappa1 = kappa6 kappa3^2 kappa4^2, kappa2 = 4 kappa1.
ConstantsReport kappa_report(const ProblemData& pd, const DeltaK& delta,
                             bool literal_r_squared = false, mpfr_prec_t prec = 192);

}  // namespace tmk
