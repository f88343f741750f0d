#pragma once

#include "tmk/boxcore.hpp"
#include "tmk/constants.hpp"

namespace tmk {

struct BoxEnumeration {
    Rat Q;                              // the (rational) box parameter
    std::vector<FieldElement> elements; // lexicographic coordinate order
    RR bound;                           // 2^{r+1} pi^{r2} (Q+theta)^d |D_K|^{-1/2}
};

// Gamma = {gamma in O_K : |gamma|_v <= Q^{d_v} for archimedean v};
// asserts |Gamma| <= ceil(bound).
BoxEnumeration enumerate_box(const FieldPtr& K, const Rat& Q, const Int& cap = Int(100000000),
                             mpfr_prec_t prec = 128);

struct A1Set {
    Int m;
    std::vector<FieldElement> gammas;   // nonzero elements
    CertifiedUpper kappa5m;
    Rat Qhat;                           // the dyadic box parameter actually used
};

// A_1(m): nonzero box elements at Q = (nu^{t d h_K} m)^{1/d} e^{c3 R_K}
// (rounded outward to a dyadic Qhat); |A_1| <= kappa5 * m is asserted.
A1Set build_A1(const Int& m, const ProblemData& pd, const DeltaK& delta,
               const Int& cap = Int(100000000));

// Lemma 5.3: eta1 in O_S^x with alpha = eta1*beta in O_K and
// |N(alpha)| <= nu^{t d h_K} N_S(beta). beta = 0 yields (1, 0).
std::pair<FieldElement, FieldElement> clear_s_denominators(const FieldElement& beta,
                                                           const SContext& ctx);

// Lemma 5.4: eta2 unit of O_K with M^{dv/d} e^{-c3 R_K} <= |alpha eta2|_v
// <= M^{dv/d} e^{c3 R_K} at every archimedean place, M = |N(alpha)|.
std::pair<FieldElement, FieldElement> balance_by_units(const FieldElement& alpha, const RR& c3,
                                                       const SContext& ctx, int exponent_cap = 64);

// Lemma 5.2 pipeline: beta = eps * gamma with gamma in a1.
std::pair<FieldElement, FieldElement> decompose(const FieldElement& beta, const A1Set& a1,
                                                const ProblemData& pd, const DeltaK& delta);

// ordered triples (k1,k2,k3) with k1 k2 k3 = m; |A_2| <= d(m)^2
std::vector<std::array<Int, 3>> build_A2(const Int& m);

}  // namespace tmk
