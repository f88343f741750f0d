#pragma once

#include <array>

#include "tmk/constants.hpp"

namespace tmk {

// delta_1 X_1 + ... + delta_l X_l = 1 over the S-units, searched over the
// exponent box |e| <= B per free generator for X_1..X_{l-1}; X_l is solved
// exactly and kept iff it lies in the generated S-unit group.
struct UnitEquation {
    std::vector<FieldElement> deltas;  // l >= 2, all nonzero
    SCtxPtr ctx;
    long box = 0;
};

struct UnitEquationSolution {
    std::vector<ExponentVector> exps;  // x_1..x_l as exponent vectors
    std::vector<FieldElement> values;
};

struct SolutionSetReport {
    std::vector<UnitEquationSolution> solutions;  // canonical (lex) order
    long degenerate_excluded = 0;
    Int bound;  // Eq. (5.1) value for (l, s)
};

SolutionSetReport solve_unit_equation(const UnitEquation& eq, const Int& cap = Int(100000000));

// all S-units with free exponents in [-B, B] and full torsion range, paired
// with their exponent vectors, in a fixed deterministic order
std::vector<std::pair<ExponentVector, FieldElement>> sunit_box_values(const SContext& ctx, long B,
                                                                      const Int& cap);

// A_3^{(l)}(delta): {1} plus the x_1 components of nondegenerate solutions.
std::vector<FieldElement> build_A3(const std::vector<FieldElement>& deltas, const SCtxPtr& ctx,
                                   long box, const Int& cap = Int(100000000));

// closure of the union over the transpositions (1 i) under x -> 1/x
std::vector<FieldElement> build_A3_tilde(const std::vector<FieldElement>& deltas,
                                         const SCtxPtr& ctx, long box,
                                         const Int& cap = Int(100000000));

// A_4(u): {1, t2/t1, t3/t1} for unit triples with
// t1 (a2'-a3') + t2 (a3'-a1') + t3 (a1'-a2') = 0; requires distinct alphas.
std::vector<FieldElement> build_A4(const std::array<FieldElement, 3>& alphas_primed,
                                   const SCtxPtr& ctx, long box,
                                   const Int& cap = Int(100000000));

}  // namespace tmk
