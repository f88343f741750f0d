#include <doctest.h>

#include <random>

#include "test_util.hpp"
#include "tmk/errors.hpp"
#include "tmk/s_arithmetic.hpp"

using namespace tmk;
using namespace tmk::test;

TEST_CASE("unit and class data for the test fields") {
    auto Q = field_Q();
    auto uQ = unit_class_data(Q);
    CHECK(uQ.w == 2);
    CHECK(uQ.zeta == Q->from_rat(-1));
    CHECK(uQ.fundamental_units.empty());
    CHECK(uQ.h_K == Int(1));
    CHECK(uQ.regulator.contains_rat(Rat(1)));

    auto Qi = field_Qi();
    auto uQi = unit_class_data(Qi);
    CHECK(uQi.w == 4);
    CHECK(uQi.zeta == Qi->gen());  // i beats -i lexicographically
    CHECK(uQi.h_K == Int(1));

    auto Kphi = field_phi();
    auto uphi = unit_class_data(Kphi);
    CHECK(uphi.w == 2);
    REQUIRE(uphi.fundamental_units.size() == 1);
    CHECK(uphi.fundamental_units[0] == Kphi->gen());  // phi itself
    CHECK(uphi.regulator.mid_double() == doctest::Approx(0.48121182505960347).epsilon(1e-12));
    CHECK(uphi.regulator.width() < 1e-20);
    CHECK(uphi.h_K == Int(1));

    auto K2 = field_sqrt2();
    auto u2 = unit_class_data(K2);
    CHECK(u2.fundamental_units[0] == K2->one() + K2->gen());  // 1 + sqrt2
    CHECK(u2.regulator.mid_double() == doctest::Approx(std::log(1 + std::sqrt(2.0))).epsilon(1e-12));

    auto K3 = field_cubic();
    auto u3 = unit_class_data(K3);
    CHECK(u3.fundamental_units[0] == K3->gen());  // the plastic number
    CHECK(u3.regulator.mid_double() == doctest::Approx(0.28119957432359).epsilon(1e-8));
    CHECK(u3.h_K == Int(1));
}

TEST_CASE("class number by Minkowski enumeration") {
    // Q(sqrt(-5)): h = 2
    auto K5 = NumberField::make(qp_from_ints({5, 0, 1}));
    CHECK(unit_class_data(K5).h_K == Int(2));
    // Q(sqrt(-23)) via the maximal order x^2-x+6: h = 3
    auto K23 = NumberField::make(qp_from_ints({6, -1, 1}));
    CHECK(unit_class_data(K23).h_K == Int(3));
}

TEST_CASE("s_context golden examples") {
    auto Q = field_Q();
    auto ctx = SContext::make(Q, {"2", "3"});
    CHECK(ctx->t() == 2);
    CHECK(ctx->rank() == 2);
    CHECK(ctx->nu() == Int(3));
    REQUIRE(ctx->prime_generators().size() == 2);
    CHECK(ctx->prime_generators()[0] == Q->from_rat(2));
    CHECK(ctx->prime_generators()[1] == Q->from_rat(3));
    CHECK(ctx->units().zeta == Q->from_rat(-1));

    auto ctx0 = SContext::make(Q, {});
    CHECK(ctx0->rank() == 0);
    CHECK(ctx0->nu() == Int(1));

    auto Kphi = field_phi();
    auto ctxphi = SContext::make(Kphi, {});
    CHECK(ctxphi->rank() == 1);
    CHECK(ctxphi->nu() == Int(1));
}

TEST_CASE("s_membership golden examples") {
    auto Q = field_Q();
    auto ctx2 = SContext::make(Q, {"2"});
    CHECK(s_membership(Q->from_rat(Rat(5, 2)), *ctx2) == SMembership::SInteger);
    CHECK(s_membership(Q->from_rat(Rat(1, 5)), *ctx2) == SMembership::Outside);
    auto ctx23 = SContext::make(Q, {"2", "3"});
    CHECK(s_membership(Q->from_rat(Rat(-8, 9)), *ctx23) == SMembership::SUnit);
    CHECK(s_membership(Q->zero(), *ctx23) == SMembership::SInteger);
}

TEST_CASE("s_norm golden examples and properties") {
    auto Q = field_Q();
    auto ctx2 = SContext::make(Q, {"2"});
    CHECK(s_norm(Q->from_rat(40), *ctx2) == Rat(5));
    CHECK(s_norm(Q->from_rat(Rat(-8, 9)), *SContext::make(Q, {"2", "3"})) == Rat(1));

    auto Qi = field_Qi();
    auto ctxi = SContext::make(Qi, {});
    CHECK(s_norm(Qi->one() + Qi->gen(), *ctxi) == Rat(2));

    CHECK_THROWS_AS(s_norm(Q->zero(), *ctx2), Error);

    // multiplicativity on random pairs, and membership <-> N_S = 1
    std::mt19937_64 rng(31);
    auto K = field_Qi();
    auto ctx = SContext::make(K, {"2", "5"});
    for (int t = 0; t < 60; ++t) {
        auto a = random_nonzero(K, rng), b = random_nonzero(K, rng);
        CHECK(s_norm(a * b, *ctx) == s_norm(a, *ctx) * s_norm(b, *ctx));
        if (s_membership(a, *ctx) == SMembership::SUnit) CHECK(s_norm(a, *ctx) == Rat(1));
    }
}

TEST_CASE("sunit_exponents golden examples") {
    auto Q = field_Q();
    auto ctx = SContext::make(Q, {"2", "3"});
    auto v = sunit_exponents(Q->from_rat(-12), *ctx);
    REQUIRE(v.has_value());
    CHECK(v->zeta_pow == 1);
    CHECK(v->unit_exp.empty());
    CHECK(v->g_exp == std::vector<long>{2, 1});

    auto Kphi = field_phi();
    auto ctxphi = SContext::make(Kphi, {});
    auto v2 = sunit_exponents(Kphi->gen().pow(-3), *ctxphi);
    REQUIRE(v2.has_value());
    CHECK(v2->zeta_pow == 0);
    CHECK(v2->unit_exp == std::vector<long>{-3});

    CHECK(!sunit_exponents(Q->from_rat(5), *SContext::make(Q, {"2"})).has_value());
}

TEST_CASE("sunit exponent round trip (property)") {
    std::mt19937_64 rng(88);
    auto Q = field_Q();
    auto ctxQ = SContext::make(Q, {"2", "3"});
    auto Kphi = field_phi();
    auto ctxP = SContext::make(Kphi, {"2"});
    std::uniform_int_distribution<long> e(-6, 6), z(0, 3);
    for (int t = 0; t < 200; ++t) {
        {
            ExponentVector v;
            v.zeta_pow = z(rng) % 2;
            v.g_exp = {e(rng), e(rng)};
            auto eps = from_exponents(*ctxQ, v);
            auto back = sunit_exponents(eps, *ctxQ);
            REQUIRE(back.has_value());
            CHECK(*back == v);
        }
        {
            ExponentVector v;
            v.zeta_pow = z(rng) % 2;
            v.unit_exp = {e(rng)};
            v.g_exp = {e(rng)};
            auto eps = from_exponents(*ctxP, v);
            auto back = sunit_exponents(eps, *ctxP);
            REQUIRE(back.has_value());
            CHECK(*back == v);
        }
    }
}

TEST_CASE("delta_k golden examples") {
    auto Q = field_Q();
    auto d1 = delta_k(Q, 0.7);
    CHECK(d1.value.mid_double() == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    REQUIRE(d1.witness.has_value());
    CHECK(*d1.witness == Q->from_rat(2));

    auto Kphi = field_phi();
    auto d2 = delta_k(Kphi, 0.3);
    CHECK(d2.value.mid_double() == doctest::Approx(0.48121182505960347).epsilon(1e-10));
    REQUIRE(d2.witness.has_value());
    CHECK(*d2.witness == Kphi->gen());

    auto d3 = delta_k(Q, 0.01);
    CHECK(!d3.witness.has_value());
    CHECK(d3.value.contains_rat(Rat(0)) == false);
    CHECK(d3.value.mid_double() == doctest::Approx(0.01).epsilon(1e-9));
}

TEST_CASE("delta_k consistency with heights of test-suite elements") {
    // no nonzero non-torsion integer of height < delta/d may exist
    auto Kphi = field_phi();
    auto dk = delta_k(Kphi, 0.3);
    std::mt19937_64 rng(3);
    for (int t = 0; t < 25; ++t) {
        auto a = random_nonzero(Kphi, rng, /*integer_only=*/true);
        if (a.pow(2) == Kphi->one()) continue;  // torsion
        RR h = height(a, 128) * RR::from_int(2, 128);
        CHECK(!h.definitely_lt(dk.value));
    }
}
