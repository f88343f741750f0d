#pragma once

#include <vector>

#include "tmk/poly.hpp"
#include "tmk/rational.hpp"

namespace tmk {

// Dense polynomial with integer coefficients, used both as exact Z[x] and
// reduced mod m with coefficients in [0, m).
using ZPoly = std::vector<Int>;

ZPoly zp_reduce(ZPoly a, const Int& m);
int zp_deg(const ZPoly& a);
ZPoly zp_from_qpoly(const QPoly& a);  // requires integer coefficients
QPoly zp_to_qpoly(const ZPoly& a);
ZPoly zp_add(const ZPoly& a, const ZPoly& b, const Int& m);
ZPoly zp_sub(const ZPoly& a, const ZPoly& b, const Int& m);
ZPoly zp_mul(const ZPoly& a, const ZPoly& b, const Int& m);
// division with remainder; lc(b) must be invertible mod m
std::pair<ZPoly, ZPoly> zp_divmod(const ZPoly& a, const ZPoly& b, const Int& m);
ZPoly zp_monic(const ZPoly& a, const Int& m);
ZPoly zp_gcd(const ZPoly& a, const ZPoly& b, const Int& p);  // p prime
ZPoly zp_powmod(const ZPoly& base, const Int& e, const ZPoly& f, const Int& p);
Int zp_eval(const ZPoly& a, const Int& x, const Int& m);

// Monic irreducible factors with multiplicities, canonically sorted by
// (degree, coefficient list). p prime.
std::vector<std::pair<ZPoly, int>> factor_mod_p(const ZPoly& f, const Int& p);

// Lift the pairwise-coprime monic factorization f = prod blocks (mod p)
// to mod p^N. f monic over Z.
std::vector<ZPoly> hensel_lift(const ZPoly& f, const std::vector<ZPoly>& blocks,
                               const Int& p, unsigned N);

// Dedekind's criterion: is Z[x]/(T) maximal at p (T monic irreducible over Z)?
bool dedekind_p_maximal(const ZPoly& T, const Int& p);

// Exact integer resultant of two integer polynomials.
Int zp_resultant_z(const ZPoly& a, const ZPoly& b);

}  // namespace tmk
