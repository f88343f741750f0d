#include <doctest.h>

#include "test_util.hpp"
#include "tmk/constants.hpp"
#include "tmk/errors.hpp"

using namespace tmk;
using namespace tmk::test;

TEST_CASE("divisor count") {
    CHECK(divisor_count(1) == Int(1));
    CHECK(divisor_count(12) == Int(6));
    CHECK(divisor_count(97) == Int(2));
    CHECK_THROWS_AS(divisor_count(0), Error);
}

TEST_CASE("evertse bound golden values") {
    CHECK(evertse_bound(2, 1) == pow_int(2, 32));
    CHECK(evertse_bound(3, 1) == pow_int(2, 999));
    CHECK(evertse_bound(2, 0) == pow_int(2, 24));
    CHECK_THROWS_AS(evertse_bound(1, 1), Error);
    // alternate Amoroso-Viada: (8*2)^{4*16*(2+1+1)} = 16^256 = 2^1024
    CHECK(evertse_bound(2, 1, true) == pow_int(2, 1024));
}

TEST_CASE("small kappas") {
    auto [k3_1, k4_1] = small_kappas(1);
    CHECK(k3_1 == Int("4294967297"));
    auto [k3_0, k4_0] = small_kappas(0);
    CHECK(k4_0 == Int(2));
    CHECK(k3_0 == 1 + pow_int(2, 24));
    // log10(kappa4(1) - 1) ~ 1436.2865
    Int k4m1 = k4_1 - 1;
    double l = mpz_sizeinbase(k4m1.get_mpz_t(), 10) - 1.0;
    CHECK(l == doctest::Approx(1436).epsilon(0.001));
    // identity: kappa4(s) - 1 = evertse(5, s) = (2^33 * 36)^{125 s}
    for (int s : {0, 1, 2}) {
        auto [k3, k4] = small_kappas(s);
        CHECK(k4 - 1 == evertse_bound(5, s));
        CHECK(k4 - 1 == pow_int(pow_int(2, 33) * 36, 125ul * static_cast<unsigned long>(s)));
        CHECK(k3 - 1 == evertse_bound(2, s));
    }
}

TEST_CASE("c3 constant") {
    RR delta = RR::from_rat(Rat(1, 10), 128);
    CHECK(c3_constant(0, delta, C3Variant::Paper, 1).contains_rat(Rat(0)));
    CHECK(c3_constant(1, delta, C3Variant::Paper, 2).contains_rat(Rat(1, 2)));
    RR c = c3_constant(2, delta, C3Variant::Paper, 4);
    CHECK(c.contains_rat(Rat(40)));  // (1/2) * 8 * 10
    CHECK(c3_constant(1, delta, C3Variant::Alt, 3).contains_rat(Rat(1, 3)));
    CHECK(c3_constant(2, delta, C3Variant::Alt, 3).mid_double() ==
          doctest::Approx(29 * std::exp(1.0) * 2 * 2 * 1 * std::log(3.0)).epsilon(1e-10));
}

TEST_CASE("problem data: minimal q") {
    auto Q = field_Q();
    auto ctx0 = SContext::make(Q, {});
    {
        ProblemData pd = problem_data(ctx0, Q->one(), {Q->one(), Q->one(), Q->one()});
        CHECK(pd.q == Int(1));
        CHECK(pd.m == Int(1));
        CHECK(pd.k == Rat(1));
    }
    {
        ProblemData pd = problem_data(
            ctx0, Q->one(), {Q->from_rat(Rat(1, 2)), Q->from_rat(Rat(1, 3)), Q->one()});
        CHECK(pd.q == Int(6));
        CHECK(pd.m == Int(216));
    }
    {
        auto ctx2 = SContext::make(Q, {"2"});
        ProblemData pd =
            problem_data(ctx2, Q->one(), {Q->from_rat(Rat(1, 2)), Q->one(), Q->one()});
        CHECK(pd.q == Int(1));  // 1/2 is already an S-integer
    }
    CHECK_THROWS_AS(problem_data(ctx0, Q->zero(), {Q->one(), Q->one(), Q->one()}), Error);
}

TEST_CASE("kappa report golden values (Q, S_inf, mu=1, alpha integral)") {
    auto Q = field_Q();
    auto ctx = SContext::make(Q, {});
    ProblemData pd = problem_data(ctx, Q->one(), {Q->one(), Q->one(), Q->one()});
    DeltaK dk = delta_k(Q, 0.7);
    auto rep = kappa_report(pd, dk);
    CHECK(rep.s == 0);
    REQUIRE(rep.kappa5.exact.has_value());
    CHECK(*rep.kappa5.exact == Int(4));
    REQUIRE(rep.kappa6.exact.has_value());
    CHECK(*rep.kappa6.exact == Int(64));
    REQUIRE(rep.kappa1.exact.has_value());
    CHECK(*rep.kappa1.exact == Int(64) * Int("16777217") * Int("16777217") * 4);
    CHECK(*rep.kappa1.exact == Int("72057602627862784"));
    REQUIRE(rep.kappa2.exact.has_value());
    CHECK(*rep.kappa2.exact == *rep.kappa1.exact * 4);
    CHECK(rep.kappa3 == 1 + pow_int(2, 24));
    CHECK(rep.kappa4 == Int(2));
}

TEST_CASE("kappa5 monotone in nu (perturbation check)") {
    auto Q = field_Q();
    DeltaK dk = delta_k(Q, 0.7);
    auto k5_of = [&](std::vector<std::string> primes) {
        auto ctx = SContext::make(Q, primes);
        ProblemData pd = problem_data(ctx, Q->one(), {Q->one(), Q->one(), Q->one()});
        return *kappa_report(pd, dk).kappa5.exact;
    };
    Int a = k5_of({});     // nu = 1 -> 4
    Int b = k5_of({"2"});  // nu = 2 -> 8
    Int c = k5_of({"3"});  // nu = 3 -> 12
    CHECK(a == Int(4));
    CHECK(b == Int(8));
    CHECK(c == Int(12));
    CHECK(a < b);
    CHECK(b < c);
}

TEST_CASE("kappa5 literal pi^(r^2) variant flag") {
    auto Qi = field_Qi();
    auto ctx = SContext::make(Qi, {});
    ProblemData pd = problem_data(ctx, Qi->one(), {Qi->one(), Qi->from_rat(2), Qi->from_rat(3)});
    DeltaK dk = delta_k(Qi, 0.2);
    auto rep_r2 = kappa_report(pd, dk, false);
    auto rep_rr = kappa_report(pd, dk, true);
    // r = 0 here: pi^{r2} = pi vs pi^{r^2} = 1, so the literal variant is smaller
    CHECK(rep_rr.kappa5.log10 < rep_r2.kappa5.log10);
    CHECK(!rep_r2.kappa5.exact.has_value());
}

TEST_CASE("Lemma 5.5 specialization: kappa5*m dominates the box bound") {
    // kappa5*m >= 2^{r+1} pi^{r2} (Q+theta)^d |D|^{-1/2}, Q = (nu^{tdh} m)^{1/d} e^{c3 R}
    auto K = field_phi();
    auto ctx = SContext::make(K, {"2"});
    ProblemData pd = problem_data(ctx, K->one(), {K->one(), K->from_rat(2), K->from_rat(3)});
    DeltaK dk = delta_k(K, 0.3);
    for (Int m : {Int(1), Int(3), Int(5)}) {
        ProblemData pdm = pd;
        pdm.m = m;
        auto rep = kappa_report(pdm, dk);
        mpfr_prec_t p = 192;
        unsigned long ee = static_cast<unsigned long>(rep.t) *
                           static_cast<unsigned long>(rep.d) * rep.h_K.get_ui();
        RR Q = (RR::from_rat(Rat(pow_int(rep.nu, ee) * m), p).log() / RR::from_int(rep.d, p)).exp();
        Q = Q * (rep.c3 * rep.R_K).exp();
        RR bound = RR::from_int(2, p).pow_ui(static_cast<unsigned long>(rep.r + 1));
        bound = bound * RR::pi(p).pow_ui(static_cast<unsigned long>(rep.r2));
        bound = bound * (Q + rep.theta).pow_ui(static_cast<unsigned long>(rep.d));
        bound = bound / RR::from_rat(Rat(abs(rep.D_K)), p).sqrt();
        RR k5m = RR(rep.kappa5.upper, rep.kappa5.upper) * RR::from_rat(Rat(m), p);
        CHECK(!k5m.definitely_lt(bound));
    }
}
