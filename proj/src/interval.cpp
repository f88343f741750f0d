#include "tmk/interval.hpp"

#include <algorithm>

#include "tmk/errors.hpp"

namespace tmk {

std::string Mpf::str(size_t digits) const {
    if (mpfr_nan_p(v_)) return "nan";
    if (mpfr_inf_p(v_)) return mpfr_sgn(v_) > 0 ? "inf" : "-inf";
    if (mpfr_zero_p(v_)) return "0";
    mpfr_exp_t e;
    char* s = mpfr_get_str(nullptr, &e, 10, digits, v_, MPFR_RNDN);
    std::string m(s);
    mpfr_free_str(s);
    bool neg = !m.empty() && m[0] == '-';
    std::string digs = neg ? m.substr(1) : m;
    // trim trailing zeros of the mantissa
    size_t last = digs.find_last_not_of('0');
    digs = digs.substr(0, std::max<size_t>(last + 1, 1));
    std::string out = (neg ? "-" : "");
    out += "0." + digs + "e" + std::to_string(static_cast<long>(e));
    return out;
}

Rat Mpf::to_rat() const {
    if (!mpfr_number_p(v_)) fail(errkind::internal, "Mpf::to_rat on non-finite value");
    mpq_t q;
    mpq_init(q);
    mpfr_get_q(q, v_);
    Rat r(q);
    mpq_clear(q);
    return r;
}

RR RR::from_rat(const Rat& q, mpfr_prec_t prec) {
    return RR(Mpf::from_rat(q, prec, MPFR_RNDD), Mpf::from_rat(q, prec, MPFR_RNDU));
}

RR RR::from_int(long n, mpfr_prec_t prec) {
    Mpf lo(prec), hi(prec);
    mpfr_set_si(lo.raw(), n, MPFR_RNDD);
    mpfr_set_si(hi.raw(), n, MPFR_RNDU);
    return RR(std::move(lo), std::move(hi));
}

RR RR::from_double(double x, mpfr_prec_t prec) {
    Mpf lo(prec), hi(prec);
    mpfr_set_d(lo.raw(), x, MPFR_RNDD);
    mpfr_set_d(hi.raw(), x, MPFR_RNDU);
    return RR(std::move(lo), std::move(hi));
}

RR RR::exact_zero(mpfr_prec_t prec) { return from_int(0, prec); }

RR RR::pi(mpfr_prec_t prec) {
    Mpf lo(prec), hi(prec);
    mpfr_const_pi(lo.raw(), MPFR_RNDD);
    mpfr_const_pi(hi.raw(), MPFR_RNDU);
    return RR(std::move(lo), std::move(hi));
}

RR RR::hull(const RR& a, const RR& b) {
    mpfr_prec_t p = std::max(a.prec(), b.prec());
    Mpf lo(p), hi(p);
    mpfr_min(lo.raw(), a.lo_.raw(), b.lo_.raw(), MPFR_RNDD);
    mpfr_max(hi.raw(), a.hi_.raw(), b.hi_.raw(), MPFR_RNDU);
    return RR(std::move(lo), std::move(hi));
}

RR RR::operator+(const RR& o) const {
    mpfr_prec_t p = std::max(prec(), o.prec());
    Mpf lo(p), hi(p);
    mpfr_add(lo.raw(), lo_.raw(), o.lo_.raw(), MPFR_RNDD);
    mpfr_add(hi.raw(), hi_.raw(), o.hi_.raw(), MPFR_RNDU);
    return RR(std::move(lo), std::move(hi));
}

RR RR::operator-(const RR& o) const {
    mpfr_prec_t p = std::max(prec(), o.prec());
    Mpf lo(p), hi(p);
    mpfr_sub(lo.raw(), lo_.raw(), o.hi_.raw(), MPFR_RNDD);
    mpfr_sub(hi.raw(), hi_.raw(), o.lo_.raw(), MPFR_RNDU);
    return RR(std::move(lo), std::move(hi));
}

RR RR::operator-() const {
    Mpf lo(prec()), hi(prec());
    mpfr_neg(lo.raw(), hi_.raw(), MPFR_RNDD);
    mpfr_neg(hi.raw(), lo_.raw(), MPFR_RNDU);
    return RR(std::move(lo), std::move(hi));
}

RR RR::operator*(const RR& o) const {
    mpfr_prec_t p = std::max(prec(), o.prec());
    Mpf lo(p), hi(p), t(p);
    // lo: min over the four products rounded down; hi: max rounded up
    mpfr_mul(lo.raw(), lo_.raw(), o.lo_.raw(), MPFR_RNDD);
    mpfr_mul(t.raw(), lo_.raw(), o.hi_.raw(), MPFR_RNDD);
    mpfr_min(lo.raw(), lo.raw(), t.raw(), MPFR_RNDD);
    mpfr_mul(t.raw(), hi_.raw(), o.lo_.raw(), MPFR_RNDD);
    mpfr_min(lo.raw(), lo.raw(), t.raw(), MPFR_RNDD);
    mpfr_mul(t.raw(), hi_.raw(), o.hi_.raw(), MPFR_RNDD);
    mpfr_min(lo.raw(), lo.raw(), t.raw(), MPFR_RNDD);

    mpfr_mul(hi.raw(), lo_.raw(), o.lo_.raw(), MPFR_RNDU);
    mpfr_mul(t.raw(), lo_.raw(), o.hi_.raw(), MPFR_RNDU);
    mpfr_max(hi.raw(), hi.raw(), t.raw(), MPFR_RNDU);
    mpfr_mul(t.raw(), hi_.raw(), o.lo_.raw(), MPFR_RNDU);
    mpfr_max(hi.raw(), hi.raw(), t.raw(), MPFR_RNDU);
    mpfr_mul(t.raw(), hi_.raw(), o.hi_.raw(), MPFR_RNDU);
    mpfr_max(hi.raw(), hi.raw(), t.raw(), MPFR_RNDU);
    return RR(std::move(lo), std::move(hi));
}

RR RR::operator/(const RR& o) const {
    if (o.contains_zero()) fail(errkind::div_zero, "interval division by interval containing 0");
    mpfr_prec_t p = std::max(prec(), o.prec());
    Mpf lo(p), hi(p), t(p);
    mpfr_div(lo.raw(), lo_.raw(), o.lo_.raw(), MPFR_RNDD);
    mpfr_div(t.raw(), lo_.raw(), o.hi_.raw(), MPFR_RNDD);
    mpfr_min(lo.raw(), lo.raw(), t.raw(), MPFR_RNDD);
    mpfr_div(t.raw(), hi_.raw(), o.lo_.raw(), MPFR_RNDD);
    mpfr_min(lo.raw(), lo.raw(), t.raw(), MPFR_RNDD);
    mpfr_div(t.raw(), hi_.raw(), o.hi_.raw(), MPFR_RNDD);
    mpfr_min(lo.raw(), lo.raw(), t.raw(), MPFR_RNDD);

    mpfr_div(hi.raw(), lo_.raw(), o.lo_.raw(), MPFR_RNDU);
    mpfr_div(t.raw(), lo_.raw(), o.hi_.raw(), MPFR_RNDU);
    mpfr_max(hi.raw(), hi.raw(), t.raw(), MPFR_RNDU);
    mpfr_div(t.raw(), hi_.raw(), o.lo_.raw(), MPFR_RNDU);
    mpfr_max(hi.raw(), hi.raw(), t.raw(), MPFR_RNDU);
    mpfr_div(t.raw(), hi_.raw(), o.hi_.raw(), MPFR_RNDU);
    mpfr_max(hi.raw(), hi.raw(), t.raw(), MPFR_RNDU);
    return RR(std::move(lo), std::move(hi));
}

RR RR::sq() const {
    mpfr_prec_t p = prec();
    Mpf lo(p), hi(p);
    if (lo_.sgn() >= 0) {
        mpfr_sqr(lo.raw(), lo_.raw(), MPFR_RNDD);
        mpfr_sqr(hi.raw(), hi_.raw(), MPFR_RNDU);
    } else if (hi_.sgn() <= 0) {
        mpfr_sqr(lo.raw(), hi_.raw(), MPFR_RNDD);
        mpfr_sqr(hi.raw(), lo_.raw(), MPFR_RNDU);
    } else {
        mpfr_set_zero(lo.raw(), 1);
        Mpf a(p);
        mpfr_sqr(hi.raw(), lo_.raw(), MPFR_RNDU);
        mpfr_sqr(a.raw(), hi_.raw(), MPFR_RNDU);
        mpfr_max(hi.raw(), hi.raw(), a.raw(), MPFR_RNDU);
    }
    return RR(std::move(lo), std::move(hi));
}

RR RR::sqrt() const {
    if (lo_.sgn() < 0) fail(errkind::domain, "interval sqrt of possibly negative value");
    Mpf lo(prec()), hi(prec());
    mpfr_sqrt(lo.raw(), lo_.raw(), MPFR_RNDD);
    mpfr_sqrt(hi.raw(), hi_.raw(), MPFR_RNDU);
    return RR(std::move(lo), std::move(hi));
}

RR RR::log() const {
    if (lo_.sgn() <= 0) fail(errkind::domain, "interval log of possibly non-positive value");
    Mpf lo(prec()), hi(prec());
    mpfr_log(lo.raw(), lo_.raw(), MPFR_RNDD);
    mpfr_log(hi.raw(), hi_.raw(), MPFR_RNDU);
    return RR(std::move(lo), std::move(hi));
}

RR RR::exp() const {
    Mpf lo(prec()), hi(prec());
    mpfr_exp(lo.raw(), lo_.raw(), MPFR_RNDD);
    mpfr_exp(hi.raw(), hi_.raw(), MPFR_RNDU);
    return RR(std::move(lo), std::move(hi));
}

RR RR::pow_ui(unsigned long k) const {
    RR r = RR::from_int(1, prec());
    RR b = *this;
    while (k > 0) {
        if (k & 1) r = r * b;
        b = b.sq();
        k >>= 1;
    }
    return r;
}

RR RR::abs() const {
    if (lo_.sgn() >= 0) return *this;
    if (hi_.sgn() <= 0) return -*this;
    Mpf lo(prec()), hi(prec()), t(prec());
    mpfr_set_zero(lo.raw(), 1);
    mpfr_neg(t.raw(), lo_.raw(), MPFR_RNDU);
    mpfr_max(hi.raw(), hi_.raw(), t.raw(), MPFR_RNDU);
    return RR(std::move(lo), std::move(hi));
}

RR RR::max1() const {
    Mpf one(prec());
    mpfr_set_ui(one.raw(), 1, MPFR_RNDN);
    Mpf lo(prec()), hi(prec());
    mpfr_max(lo.raw(), lo_.raw(), one.raw(), MPFR_RNDD);
    mpfr_max(hi.raw(), hi_.raw(), one.raw(), MPFR_RNDU);
    return RR(std::move(lo), std::move(hi));
}

bool RR::contains_rat(const Rat& q) const {
    return mpfr_cmp_q(lo_.raw(), q.get_mpq_t()) <= 0 && mpfr_cmp_q(hi_.raw(), q.get_mpq_t()) >= 0;
}

std::optional<int> RR::sign() const {
    if (lo_.sgn() > 0) return 1;
    if (hi_.sgn() < 0) return -1;
    if (lo_.sgn() == 0 && hi_.sgn() == 0) return 0;
    return std::nullopt;
}

std::optional<int> RR::cmp_rat(const Rat& q) const {
    if (mpfr_cmp_q(hi_.raw(), q.get_mpq_t()) < 0) return -1;
    if (mpfr_cmp_q(lo_.raw(), q.get_mpq_t()) > 0) return 1;
    return std::nullopt;
}

double RR::width() const {
    Mpf w(64);
    mpfr_sub(w.raw(), hi_.raw(), lo_.raw(), MPFR_RNDU);
    return w.to_double();
}

}  // namespace tmk
