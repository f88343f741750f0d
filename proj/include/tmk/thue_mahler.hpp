#pragma once

#include <functional>
#include <map>

#include "tmk/decomposition.hpp"
#include "tmk/sunit_solver.hpp"

namespace tmk {

// A solution (x, y, z, eps1, eps2, eps3, eps) of
// (X - a1 E1 Y)(X - a2 E2 Y)(X - a3 E3 Y) Z = mu E over (O_S, O_S^x).
struct FamilySolution {
    FieldElement x, y, z, eps1, eps2, eps3, eps;
    bool trivial = false;  // xy == 0
};

// derived data of Section 6.2
struct FamilyDerived {
    std::array<FieldElement, 3> alpha_tilde;  // a_i eps_i, pairwise distinct
    std::array<FieldElement, 3> beta;         // x - alpha~_i y (nonzero)
    std::array<FieldElement, 3> beta_prime;   // q beta_i
    std::array<Int, 3> kprime;                // N_S(beta'_i), product = m
    std::array<FieldElement, 3> u;            // (1, eps2/eps1, eps3/eps1)
    std::array<FieldElement, 3> v;            // beta_i / beta_1
};

FamilySolution verify_family_solution(const ProblemData& pd,
                                      const std::array<FieldElement, 7>& s7);
FamilyDerived derive(const ProblemData& pd, const FamilySolution& sol);

// S^3-dependence: returns (eta1, eta2, eta3) or nullopt; inputs nontrivial.
std::optional<std::array<FieldElement, 3>> s3_dependence_test(const ProblemData& pd,
                                                              const FamilySolution& a,
                                                              const FamilySolution& b);

// complete S^3-class invariant (u2, u3, v2, v3, prime-to-S part of (beta1))
struct ClassKey {
    std::vector<Rat> flat;                       // coordinates of u2,u3,v2,v3
    std::vector<std::pair<std::pair<std::string, int>, long>> ideal_sig;
    bool operator<(const ClassKey&) const;
    bool operator==(const ClassKey&) const;
};
ClassKey family_class_key(const ProblemData& pd, const FamilySolution& sol);

// S-dependence for Eq. (2.1) solutions: same projective point and the
// scaling ratio is an S-unit.
bool s_dependence_classic(const SContext& ctx, const FieldElement& x, const FieldElement& y,
                          const FieldElement& x2, const FieldElement& y2);

// S-dependence for Eq. (3.2) quintuples (x, y, eps1, eps2, eps)
struct ReducedSolution {
    FieldElement x, y, eps1, eps2, eps;
};
bool s_dependence_32(const SContext& ctx, const ReducedSolution& a, const ReducedSolution& b);

struct SolveFamilyOptions {
    long xy_box = 4;       // integral-basis coordinate box for x and y
    long eps_box = 2;      // exponent box for eps_1..eps_3
    bool include_trivial = false;
    Int cap = Int(100000000);
    // strategy (b) ingredient boxes
    long b_unit_box = -1;  // u_2, u_3 exponent box; -1 = eps_box
    long a4_box = 8;       // unit-equation box for A_4
};

// strategy (a): exhaustive over the boxes, (z, eps) solved canonically from
// the product identity. Solutions stream in deterministic order.
void solve_family_stream(const ProblemData& pd, const SolveFamilyOptions& opt,
                         const std::function<void(const FamilySolution&)>& visit);
std::vector<FamilySolution> solve_family(const ProblemData& pd, const SolveFamilyOptions& opt);

// strategy (b): Section 6.3 reconstruction from (A_2, A_1, u, A_4) data;
// returns verified nontrivial candidates, deduplicated, canonical order.
std::vector<FamilySolution> solve_family_reconstruct(const ProblemData& pd,
                                                     const SolveFamilyOptions& opt,
                                                     const DeltaK& delta);

// cross-check both strategies; throws internal error on disagreement.
// Returns (a)-solution count and the class count.
struct FamilyRunSummary {
    long nontrivial = 0;
    long classes = 0;
};
FamilyRunSummary solve_family_cross_checked(const ProblemData& pd, const SolveFamilyOptions& opt,
                                            const DeltaK& delta,
                                            const std::function<void(const FamilySolution&)>& visit);

// Section 6.2 case analysis for the six-term relation T
struct CaseCertificate {
    enum class Label {
        NoVanishingSubsum,
        ThreeThreeRepeatedBeta,
        ThreeThreeRepeatedAlpha,
        ThreeThreeAllDistinct,
        TwoFourSplit,
    };
    Label label = Label::NoVanishingSubsum;
    int i = 2, j = 3;
    std::array<FieldElement, 6> terms;                  // signed terms, sum 0
    std::array<std::pair<int, int>, 6> term_index;      // (beta idx, alpha~ idx)
    std::vector<unsigned> vanishing_masks;              // strict subsets summing to 0
    unsigned t1_mask = 0;                               // the labeled subsum
    std::array<int, 3> sigma{1, 2, 3};                  // (j1, j2, j3)
    int sign = 1;                                       // sgn(sigma) matching the display
    static const char* label_name(Label l);
};

CaseCertificate classify_subsums(const ProblemData& pd, const FamilySolution& sol, int i);

// Section 6.3 canonical representative
struct CanonicalRep {
    FieldElement x0, y0, eps0, u2, u3;
    FieldElement eta, eta_tilde, w;  // eps1, w1, eps1*y
    std::array<Int, 3> kprime;
    std::array<FieldElement, 3> gamma;
    std::array<FieldElement, 3> wunits;
    FamilySolution rep;  // assembled 7-tuple with canonical (z, eps)
};

// shared cache of A_1(n) sets
class A1Cache {
public:
    A1Cache(const ProblemData& pd, const DeltaK& delta) : pd_(&pd), delta_(&delta) {}
    const A1Set& get(const Int& n) const;
    const DeltaK& delta() const { return *delta_; }

private:
    const ProblemData* pd_;
    const DeltaK* delta_;
    mutable std::map<Int, A1Set> cache_;
    mutable std::mutex mu_;
};

CanonicalRep canonicalize(const ProblemData& pd, const FamilySolution& sol, const A1Cache& a1);

// union-find partition under s3_dependence_test, cross-validated against the
// class key; returns class index per solution
struct ClassPartition {
    std::vector<long> class_of;
    long count = 0;
};
ClassPartition partition_classes(const ProblemData& pd, const std::vector<FamilySolution>& sols);

// Eq. (2.1): exhaustive classic Thue-Mahler search over a coordinate box
struct ClassicSolution {
    FieldElement x, y, eps;
    long class_id = -1;
};
struct ClassicRun {
    std::vector<ClassicSolution> solutions;
    long classes = 0;
    bool card_warning = false;  // Card{alpha_i} < 3: finiteness unclaimed
};
ClassicRun solve_classic(const std::vector<FieldElement>& alphas, const FieldElement& mu,
                         const SCtxPtr& ctx, long xy_box, bool coprime_filter = false,
                         const std::vector<Int>& coprime_primes = {},
                         const Int& cap = Int(100000000));

}  // namespace tmk
