#pragma once

#include <utility>
#include <vector>

#include "tmk/interval.hpp"
#include "tmk/rational.hpp"

namespace tmk {

// Dense univariate polynomial over Q, coefficient i belongs to x^i.
// Normalized form has no trailing zero coefficients; the zero polynomial
// is the empty vector (degree -1).
using QPoly = std::vector<Rat>;

QPoly qp_normalize(QPoly p);
int qp_deg(const QPoly& p);
bool qp_is_zero(const QPoly& p);
QPoly qp_from_ints(const std::vector<long>& c);
QPoly qp_x();  // the monomial x
QPoly qp_const(const Rat& c);

QPoly qp_add(const QPoly& a, const QPoly& b);
QPoly qp_sub(const QPoly& a, const QPoly& b);
QPoly qp_neg(const QPoly& a);
QPoly qp_mul(const QPoly& a, const QPoly& b);
QPoly qp_scale(const QPoly& a, const Rat& c);
// quotient and remainder, b != 0
std::pair<QPoly, QPoly> qp_divmod(const QPoly& a, const QPoly& b);
QPoly qp_mod(const QPoly& a, const QPoly& b);
QPoly qp_monic(const QPoly& a);
QPoly qp_gcd(const QPoly& a, const QPoly& b);  // monic gcd
QPoly qp_derivative(const QPoly& a);
bool qp_is_squarefree(const QPoly& a);

Rat qp_eval(const QPoly& a, const Rat& x);
RR qp_eval_rr(const QPoly& a, const RR& x, mpfr_prec_t prec);
CC qp_eval_cc(const QPoly& a, const CC& x, mpfr_prec_t prec);

// Resultant of a and b over Q (0 if either is 0 and the other nonconstant).
Rat qp_resultant(const QPoly& a, const QPoly& b);
Rat qp_discriminant(const QPoly& a);

// Integer-content scaling: returns primitive integer polynomial c*a with
// positive leading coefficient together with the factor c.
QPoly qp_primitive_z(const QPoly& a);

// Cauchy bound: all complex roots have |z| < bound.
Rat qp_root_bound(const QPoly& a);

// Sturm machinery. count(a,b] of distinct real roots; a < b rationals.
struct SturmChain {
    std::vector<QPoly> chain;
    explicit SturmChain(const QPoly& f);
    int sign_changes_at(const Rat& x) const;
    int sign_changes_at_minus_inf() const;
    int sign_changes_at_plus_inf() const;
    int count_in(const Rat& a, const Rat& b) const;  // roots in (a, b]
    int count_all() const;
};

// Isolating intervals (a, b] for all distinct real roots, sorted ascending.
std::vector<std::pair<Rat, Rat>> qp_isolate_real_roots(const QPoly& f);

// Halve the width of an isolating interval (one root inside) once.
std::pair<Rat, Rat> qp_refine_root(const QPoly& f, const SturmChain& st, std::pair<Rat, Rat> iv);

// Lagrange interpolation through (x_i, y_i) with distinct x_i.
QPoly qp_interpolate(const std::vector<Rat>& xs, const std::vector<Rat>& ys);

}  // namespace tmk
