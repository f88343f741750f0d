#pragma once

#include <mpfr.h>

#include <optional>
#include <string>

#include "tmk/rational.hpp"

namespace tmk {

// Arbitrary-precision float with value semantics. Every operation that can
// round takes an explicit MPFR rounding mode, so enclosures stay certified.
class Mpf {
public:
    explicit Mpf(mpfr_prec_t prec = 64) { mpfr_init2(v_, prec); mpfr_set_zero(v_, 1); }
    Mpf(const Mpf& o) { mpfr_init2(v_, mpfr_get_prec(o.v_)); mpfr_set(v_, o.v_, MPFR_RNDN); }
    Mpf(Mpf&& o) noexcept { mpfr_init2(v_, 2); mpfr_swap(v_, o.v_); }
    Mpf& operator=(const Mpf& o) {
        if (this != &o) { mpfr_set_prec(v_, mpfr_get_prec(o.v_)); mpfr_set(v_, o.v_, MPFR_RNDN); }
        return *this;
    }
    Mpf& operator=(Mpf&& o) noexcept { mpfr_swap(v_, o.v_); return *this; }
    ~Mpf() { mpfr_clear(v_); }

    static Mpf from_rat(const Rat& q, mpfr_prec_t prec, mpfr_rnd_t rnd) {
        Mpf r(prec);
        mpfr_set_q(r.v_, q.get_mpq_t(), rnd);
        return r;
    }
    static Mpf from_int(const Int& n, mpfr_prec_t prec, mpfr_rnd_t rnd) {
        Mpf r(prec);
        mpfr_set_z(r.v_, n.get_mpz_t(), rnd);
        return r;
    }

    mpfr_ptr raw() { return v_; }
    mpfr_srcptr raw() const { return v_; }
    mpfr_prec_t prec() const { return mpfr_get_prec(v_); }
    int sgn() const { return mpfr_sgn(v_); }
    bool is_nan() const { return mpfr_nan_p(v_) != 0; }
    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
    std::string str(size_t digits = 20) const;

    // exact dyadic -> rational (finite values only)
    Rat to_rat() const;

private:
    mpfr_t v_;
};

// Closed real interval [lo, hi] with outward rounding.
class RR {
public:
    RR() : lo_(64), hi_(64) {}
    RR(Mpf lo, Mpf hi) : lo_(std::move(lo)), hi_(std::move(hi)) {}

    static RR from_rat(const Rat& q, mpfr_prec_t prec);
    static RR from_int(long n, mpfr_prec_t prec);
    static RR from_double(double x, mpfr_prec_t prec);  // doubles are exact dyadics
    static RR exact_zero(mpfr_prec_t prec);
    static RR pi(mpfr_prec_t prec);
    static RR hull(const RR& a, const RR& b);

    const Mpf& lo() const { return lo_; }
    const Mpf& hi() const { return hi_; }
    mpfr_prec_t prec() const { return lo_.prec(); }

    RR operator+(const RR& o) const;
    RR operator-(const RR& o) const;
    RR operator-() const;
    RR operator*(const RR& o) const;
    RR operator/(const RR& o) const;  // requires o not containing 0
    RR sq() const;
    RR sqrt() const;  // requires lo >= 0
    RR log() const;   // requires lo > 0
    RR exp() const;
    RR pow_ui(unsigned long k) const;
    RR abs() const;
    RR max1() const;  // max{1, x} as an interval

    bool contains_zero() const { return lo_.sgn() <= 0 && hi_.sgn() >= 0; }
    bool contains_rat(const Rat& q) const;
    bool definitely_lt(const RR& o) const { return mpfr_less_p(hi_.raw(), o.lo_.raw()) != 0; }
    bool definitely_le(const RR& o) const { return mpfr_lessequal_p(hi_.raw(), o.lo_.raw()) != 0; }
    bool definitely_gt(const RR& o) const { return o.definitely_lt(*this); }
    bool definitely_positive() const { return lo_.sgn() > 0; }
    bool definitely_negative() const { return hi_.sgn() < 0; }
    // sign if certain, nullopt otherwise
    std::optional<int> sign() const;
    // strictly less / greater than rational, nullopt if interval straddles it
    std::optional<int> cmp_rat(const Rat& q) const;

    double width() const;
    double mid_double() const { return (lo_.to_double() + hi_.to_double()) / 2; }

private:
    Mpf lo_, hi_;
};

// Rectangular complex interval.
class CC {
public:
    CC() = default;
    CC(RR re, RR im) : re_(std::move(re)), im_(std::move(im)) {}

    static CC from_rats(const Rat& re, const Rat& im, mpfr_prec_t prec) {
        return CC(RR::from_rat(re, prec), RR::from_rat(im, prec));
    }

    const RR& re() const { return re_; }
    const RR& im() const { return im_; }

    CC operator+(const CC& o) const { return CC(re_ + o.re_, im_ + o.im_); }
    CC operator-(const CC& o) const { return CC(re_ - o.re_, im_ - o.im_); }
    CC operator*(const CC& o) const {
        return CC(re_ * o.re_ - im_ * o.im_, re_ * o.im_ + im_ * o.re_);
    }
    CC conj() const { return CC(re_, -im_); }
    RR abs_sq() const { return re_.sq() + im_.sq(); }
    RR abs() const { return abs_sq().sqrt(); }

private:
    RR re_, im_;
};

// Sum of |.| upper bounds etc. live with their callers; here only shared helpers.

}  // namespace tmk
