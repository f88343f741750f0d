#pragma once

#include <string>
#include <vector>

#include "tmk/modpoly.hpp"
#include "tmk/number_field.hpp"

namespace tmk {

// A place of K with the normalized absolute value |.|_v:
//   |sigma(a)|      at a real embedding,
//   |sigma(a)|^2    at a complex embedding,
//   N(P)^(-ord_P a) at a finite place.
struct Place {
    enum class Kind { Real, Complex, Finite };
    Kind kind = Kind::Real;

    // archimedean data
    int embedding_index = -1;  // index into NumberField::embeddings()
    int dv = 1;

    // finite data: two-element representation (p, g(theta))
    Int p = 0;
    int e = 0, f = 0;
    Int norm = 0;       // N(P) = p^f
    ZPoly gbar;         // monic irreducible factor of theta_poly mod p
    int index_above_p = 0;

    bool is_arch() const { return kind != Kind::Finite; }
    std::string str() const;
};

// All archimedean places (r1 real then r2 complex, canonical order).
std::vector<Place> archimedean_places(const FieldPtr& K);

// Finite places above p, from the factorization of theta_poly mod p.
// Requires Z[theta] to be p-maximal (Dedekind), else unsupported-prime.
std::vector<Place> places_above(const FieldPtr& K, const Int& p);

// Exact valuation ord_P(a), a != 0.
long valuation(const FieldElement& a, const Place& P);

// |a|_v: finite -> exact rational; archimedean -> certified interval.
Rat abs_value_finite(const FieldElement& a, const Place& P);
RR abs_value_arch(const FieldElement& a, const Place& P, mpfr_prec_t prec);

// primes that can carry nonzero finite valuations of a (superset)
std::vector<Int> support_primes(const FieldElement& a);

struct ProductFormulaReport {
    bool pass = false;
    double sum_mid = 0.0;      // midpoint of the certified log-sum enclosure
    double sum_radius = 0.0;   // half-width
    Rat finite_part;           // exact product of finite absolute values
};

// Checks |sum_v log|a|_v| < tolerance with the finite part exact.
ProductFormulaReport product_formula_check(const FieldElement& a, const Rat& tolerance,
                                           mpfr_prec_t prec = 160);

// Absolute logarithmic height, certified enclosure. h(0) = 0.
RR height(const FieldElement& a, mpfr_prec_t prec = 128);

}  // namespace tmk
