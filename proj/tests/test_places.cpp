#include <doctest.h>

#include <random>

#include "test_util.hpp"
#include "tmk/errors.hpp"
#include "tmk/places.hpp"

using namespace tmk;
using namespace tmk::test;

static bool intervals_overlap(const RR& a, const RR& b) {
    return !(a.definitely_lt(b) || b.definitely_lt(a));
}

TEST_CASE("places above small primes in Q(i)") {
    auto Qi = field_Qi();
    auto p5 = places_above(Qi, 5);
    REQUIRE(p5.size() == 2);
    for (auto& P : p5) {
        CHECK(P.norm == Int(5));
        CHECK(P.e == 1);
        CHECK(P.f == 1);
    }
    auto p2 = places_above(Qi, 2);
    REQUIRE(p2.size() == 1);
    CHECK(p2[0].e == 2);
    CHECK(p2[0].norm == Int(2));
    auto p3 = places_above(Qi, 3);
    REQUIRE(p3.size() == 1);
    CHECK(p3[0].f == 2);
    CHECK(p3[0].norm == Int(9));
}

TEST_CASE("index-divisor prime is rejected") {
    // Z[sqrt5] via x^2-5 is not 2-maximal
    auto K = NumberField::make(qp_from_ints({-5, 0, 1}));
    CHECK_THROWS_AS(places_above(K, 2), Error);
    // but 3 stays inert and is fine
    auto p3 = places_above(K, 3);
    REQUIRE(p3.size() == 1);
    CHECK(p3[0].f == 2);
}

TEST_CASE("valuations") {
    auto Q = field_Q();
    auto v2 = places_above(Q, 2)[0];
    CHECK(valuation(Q->from_rat(12), v2) == 2);
    CHECK(abs_value_finite(Q->from_rat(12), v2) == Rat(1, 4));

    auto Qi = field_Qi();
    auto P2 = places_above(Qi, 2)[0];
    CHECK(valuation(Qi->from_rat(2), P2) == 2);  // 2 = -i (1+i)^2
    CHECK(valuation(Qi->one() + Qi->gen(), P2) == 1);

    // units have valuation 0 everywhere
    auto Kphi = field_phi();
    auto phi = Kphi->gen();
    for (long p : {2, 3, 5, 7}) {
        for (auto& P : places_above(Kphi, p)) CHECK(valuation(phi, P) == 0);
    }
    CHECK_THROWS_AS(valuation(Q->zero(), v2), Error);
}

TEST_CASE("valuations additive under multiplication") {
    std::mt19937_64 rng(7);
    auto K = field_cubic();
    auto pls = places_above(K, 2);
    for (int t = 0; t < 30; ++t) {
        auto a = random_nonzero(K, rng), b = random_nonzero(K, rng);
        for (auto& P : pls) CHECK(valuation(a * b, P) == valuation(a, P) + valuation(b, P));
    }
}

TEST_CASE("normalized absolute values") {
    auto Qi = field_Qi();
    auto arch = archimedean_places(Qi);
    REQUIRE(arch.size() == 1);
    CHECK(arch[0].dv == 2);
    // |1+i|^2 = 2 at the complex place
    RR v = abs_value_arch(Qi->one() + Qi->gen(), arch[0], 96);
    CHECK(v.contains_rat(Rat(2)));
    CHECK(v.width() < 1e-20);

    // d = sum of dv over archimedean places
    for (auto K : {field_Q(), field_Qi(), field_sqrt2(), field_phi(), field_cubic()}) {
        int s = 0;
        for (auto& P : archimedean_places(K)) s += P.dv;
        CHECK(s == K->degree());
    }
}

TEST_CASE("product formula golden cases") {
    auto Q = field_Q();
    auto rep = product_formula_check(Q->from_rat(12), Rat(1, Int("100000000000000000000")));
    CHECK(rep.pass);
    CHECK(rep.finite_part == Rat(1, 12));

    auto Kphi = field_phi();
    auto repu = product_formula_check(Kphi->gen(), Rat(1, Int("100000000000000000000")));
    CHECK(repu.pass);
    CHECK(repu.finite_part == Rat(1));  // unit: no finite contribution

    CHECK_THROWS_AS(product_formula_check(Q->zero(), Rat(1)), Error);
}

TEST_CASE("product formula on random elements in five fields") {
    std::mt19937_64 rng(2024);
    Rat tol(1, Int("100000000000000000000"));  // 1e-20
    for (auto K : {field_Q(), field_Qi(), field_sqrt2(), field_phi(), field_cubic()}) {
        for (int t = 0; t < 40; ++t) {
            auto a = random_nonzero(K, rng);
            CHECK(product_formula_check(a, tol).pass);
        }
    }
}

TEST_CASE("height golden values") {
    auto Q = field_Q();
    CHECK(height(Q->one()).contains_rat(Rat(0)));
    RR h2 = height(Q->from_rat(2), 128);
    CHECK(h2.mid_double() == doctest::Approx(0.6931471805599453).epsilon(1e-15));

    auto Kphi = field_phi();
    RR hphi = height(Kphi->gen(), 128);
    CHECK(hphi.mid_double() == doctest::Approx(0.24060591252980174).epsilon(1e-12));

    // h(0) = 0 convention
    CHECK(height(Q->zero()).contains_rat(Rat(0)));
}

TEST_CASE("height properties") {
    std::mt19937_64 rng(55);
    for (auto K : {field_Qi(), field_phi(), field_cubic()}) {
        for (int t = 0; t < 10; ++t) {
            auto a = random_nonzero(K, rng);
            RR ha = height(a, 128);
            // h(1/a) = h(a)
            CHECK(intervals_overlap(ha, height(a.inverse(), 128)));
            for (long k : {-3L, -2L, 2L, 3L}) {
                RR lhs = height(a.pow(k), 128);
                RR rhs = ha * RR::from_int(k < 0 ? -k : k, 128);
                CHECK(intervals_overlap(lhs, rhs));
            }
            auto b = random_nonzero(K, rng);
            RR sum = ha + height(b, 128) + RR::from_rat(Rat(1, 1000000), 128);
            CHECK(!sum.definitely_lt(height(a * b, 128)));
        }
    }
}
