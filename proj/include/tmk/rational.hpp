#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <vector>

#include "tmk/errors.hpp"

namespace tmk {

using Int = mpz_class;
using Rat = mpq_class;

inline Int pow_int(const Int& b, unsigned long e) {
    Int r;
    mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
    return r;
}

inline Rat pow_rat(const Rat& b, long e) {
    if (e == 0) return Rat(1);
    if (b == 0) {
        if (e < 0) fail(errkind::div_zero, "0 raised to a negative power");
        return Rat(0);
    }
    Rat r;
    mpz_pow_ui(r.get_num().get_mpz_t(), b.get_num().get_mpz_t(), static_cast<unsigned long>(e < 0 ? -e : e));
    mpz_pow_ui(r.get_den().get_mpz_t(), b.get_den().get_mpz_t(), static_cast<unsigned long>(e < 0 ? -e : e));
    r.canonicalize();
    if (e < 0) r = 1 / r;
    return r;
}

// Exponent of p in n (n != 0); strips the factor in place when strip is used.
inline long remove_factor(Int& n, const Int& p) {
    return static_cast<long>(mpz_remove(n.get_mpz_t(), n.get_mpz_t(), p.get_mpz_t()));
}

inline long valuation_int(const Int& n, const Int& p) {
    if (n == 0) fail(errkind::zero_input, "valuation of 0");
    Int t = n;
    return remove_factor(t, p);
}

inline long valuation_rat(const Rat& q, const Int& p) {
    if (q == 0) fail(errkind::zero_input, "valuation of 0");
    return valuation_int(Int(q.get_num()), p) - valuation_int(Int(q.get_den()), p);
}

inline bool is_prime(const Int& p) {
    return mpz_probab_prime_p(p.get_mpz_t(), 40) != 0;
}

// Trial-division factorization, desk scale.
inline std::vector<std::pair<Int, long>> factorize(Int n) {
    if (n == 0) fail(errkind::zero_input, "factorize(0)");
    std::vector<std::pair<Int, long>> out;
    n = abs(n);
    for (Int p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
        long e = remove_factor(n, p);
        if (e > 0) out.emplace_back(p, e);
    }
    if (n > 1) out.emplace_back(n, 1);
    return out;
}

inline Rat parse_rat(const std::string& s) {
    Rat q;
    if (q.set_str(s, 10) != 0) fail(errkind::usage, "cannot parse rational: " + s);
    q.canonicalize();
    return q;
}

inline std::string to_string(const Int& n) { return n.get_str(); }
inline std::string to_string(const Rat& q) { return q.get_str(); }

inline Int floor_div(const Int& a, const Int& b) {
    Int q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

// floor(a) for rational a
inline Int floor_rat(const Rat& a) {
    Int q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_num().get_mpz_t(), a.get_den().get_mpz_t());
    return q;
}

inline Int ceil_rat(const Rat& a) {
    Int q;
    mpz_cdiv_q(q.get_mpz_t(), a.get_num().get_mpz_t(), a.get_den().get_mpz_t());
    return q;
}

}  // namespace tmk
