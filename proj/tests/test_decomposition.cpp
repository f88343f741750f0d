#include <doctest.h>

#include <random>

#include "test_util.hpp"
#include "tmk/decomposition.hpp"
#include "tmk/errors.hpp"

using namespace tmk;
using namespace tmk::test;

TEST_CASE("enumerate_box golden counts") {
    auto Q = field_Q();
    auto be = enumerate_box(Q, Rat(53, 10));
    CHECK(be.elements.size() == 11);  // -5..5
    CHECK(be.bound.contains_rat(Rat(126, 10)));

    auto Qi = field_Qi();
    auto bi = enumerate_box(Qi, Rat(2));
    CHECK(bi.elements.size() == 13);  // a^2+b^2 <= 4
    CHECK(bi.bound.mid_double() == doctest::Approx(50.26548245743669).epsilon(1e-9));

    auto K3 = field_cubic();
    auto b3 = enumerate_box(K3, Rat(1, 2));
    REQUIRE(b3.elements.size() == 1);
    CHECK(b3.elements[0].is_zero());
}

TEST_CASE("boundary membership is exact") {
    // Q = 2 over Q(i): 2 and 2i lie exactly on the boundary and are included
    auto Qi = field_Qi();
    auto bi = enumerate_box(Qi, Rat(2));
    bool has2 = false, has2i = false;
    for (auto& g : bi.elements) {
        if (g == Qi->from_rat(2)) has2 = true;
        if (g == Qi->gen() + Qi->gen()) has2i = true;
    }
    CHECK(has2);
    CHECK(has2i);
    // over Q: the integer Q itself is included
    auto Q = field_Q();
    auto bq = enumerate_box(Q, Rat(3));
    CHECK(bq.elements.size() == 7);
}

TEST_CASE("box count bound across fields and Q in 1..6") {
    for (auto K : {field_Q(), field_Qi(), field_sqrt2(), field_phi()}) {
        for (long q = 1; q <= 6; ++q) {
            auto be = enumerate_box(K, Rat(q));
            CHECK(!RR::from_int(static_cast<long>(be.elements.size()), 128)
                       .definitely_gt(be.bound));
        }
    }
}

TEST_CASE("box elements in lexicographic coordinate order, deterministic") {
    auto Qi = field_Qi();
    auto a = enumerate_box(Qi, Rat(3)).elements;
    auto b = enumerate_box(Qi, Rat(3)).elements;
    REQUIRE(a.size() == b.size());
    for (size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
    for (size_t i = 1; i < a.size(); ++i)
        CHECK(Qi->to_basis_coords(a[i - 1].coords()) < Qi->to_basis_coords(a[i].coords()));
}

TEST_CASE("clear_s_denominators") {
    auto Q = field_Q();
    auto ctx = SContext::make(Q, {"2"});
    auto [eta1, alpha] = clear_s_denominators(Q->from_rat(Rat(5, 8)), *ctx);
    CHECK(eta1 == Q->from_rat(8));
    CHECK(alpha == Q->from_rat(5));

    auto [e0, a0] = clear_s_denominators(Q->zero(), *ctx);
    CHECK(e0 == Q->one());
    CHECK(a0.is_zero());

    auto [e1, a1] = clear_s_denominators(Q->from_rat(5), *ctx);
    CHECK(e1 == Q->one());  // already integral with ord in [0, step)

    CHECK_THROWS_AS(clear_s_denominators(Q->from_rat(Rat(1, 5)), *ctx), Error);
}

TEST_CASE("balance_by_units golden cases") {
    auto Q = field_Q();
    auto ctxQ = SContext::make(Q, {});
    RR c3 = c3_constant(0, RR::from_rat(Rat(1), 128), C3Variant::Paper, 1);
    auto [eta, g] = balance_by_units(Q->from_rat(-7), c3, *ctxQ);
    CHECK(g == Q->from_rat(7));  // canonical: positive representative
    CHECK(eta == Q->from_rat(-1));

    auto Kphi = field_phi();
    auto ctxP = SContext::make(Kphi, {});
    RR c3p = c3_constant(1, RR::from_rat(Rat(1), 128), C3Variant::Paper, 2);
    auto [eta2, g2] = balance_by_units(Kphi->gen().pow(5), c3p, *ctxP);
    CHECK((g2 == Kphi->one() || g2 == -Kphi->one()));

    auto K2 = field_sqrt2();
    auto ctx2 = SContext::make(K2, {});
    auto three_plus = K2->from_rat(3) + K2->gen() + K2->gen();  // 3 + 2 sqrt2 = (1+sqrt2)^2
    auto [eta3, g3] = balance_by_units(three_plus, c3p, *ctx2);
    CHECK((g3 == K2->one() || g3 == -K2->one()));
}

TEST_CASE("balance_by_units exact boundary hit in Q(sqrt3)") {
    // |1+sqrt3| sits exactly on the Lemma 5.4 window boundary: the window is
    // [sqrt2 e^{-R/2}, sqrt2 e^{R/2}] and (1+sqrt3)^2 = 2(2+sqrt3) = 2 e^R
    auto K = NumberField::make(qp_from_ints({-3, 0, 1}));
    auto ctx = SContext::make(K, {});
    RR c3 = c3_constant(1, RR::from_rat(Rat(1), 128), C3Variant::Paper, 2);
    FieldElement a = K->one() + K->gen();
    auto [eta, g] = balance_by_units(a, c3, *ctx);
    CHECK(abs((a * eta).norm()) == abs(a.norm()));
    CHECK(g == a * eta);
}

TEST_CASE("Lemma 5.4 certificate on random integers (r <= 1 fields)") {
    std::mt19937_64 rng(17);
    for (auto K : {field_Q(), field_Qi(), field_sqrt2(), field_phi(), field_cubic()}) {
        auto ctx = SContext::make(K, {});
        RR c3 = c3_constant(K->unit_rank(), RR::from_rat(Rat(1), 128), C3Variant::Paper,
                            K->degree());
        for (int t = 0; t < 12; ++t) {
            auto a = random_nonzero(K, rng, /*integer_only=*/true);
            auto [eta, g] = balance_by_units(a, c3, *ctx);
            CHECK(g == a * eta);
            CHECK(abs(g.norm()) == abs(a.norm()));
            // re-verify the window with plain intervals at high precision
            Rat M = abs(a.norm());
            mpfr_prec_t p = 256;
            RR c3R = c3 * ctx->units().regulator;
            for (auto& v : ctx->arch_places()) {
                RR lhs = abs_value_arch(g, v, p);
                RR mid = (RR::from_rat(M, p).log() * RR::from_int(v.dv, p) /
                          RR::from_int(K->degree(), p))
                             .exp();
                CHECK(!lhs.definitely_lt(mid / c3R.exp()));
                CHECK(!(mid * c3R.exp()).definitely_lt(lhs));
            }
        }
    }
}

TEST_CASE("build_A1 golden cases") {
    auto Q = field_Q();
    auto ctx2 = SContext::make(Q, {"2"});
    ProblemData pd = problem_data(ctx2, Q->one(), {Q->one(), Q->one(), Q->one()});
    DeltaK dk = delta_k(Q, 0.7);
    auto a1 = build_A1(5, pd, dk);
    CHECK(a1.gammas.size() == 20);  // +-1..+-10
    REQUIRE(a1.kappa5m.exact.has_value());
    CHECK(*a1.kappa5m.exact == Int(40));

    auto ctx0 = SContext::make(Q, {});
    ProblemData pd0 = problem_data(ctx0, Q->one(), {Q->one(), Q->one(), Q->one()});
    auto a10 = build_A1(1, pd0, dk);
    CHECK(a10.gammas.size() == 2);  // {+-1}
    CHECK(*a10.kappa5m.exact == Int(4));
}

TEST_CASE("decompose golden cases and round trip") {
    auto Q = field_Q();
    auto ctx = SContext::make(Q, {"2"});
    ProblemData pd = problem_data(ctx, Q->one(), {Q->one(), Q->one(), Q->one()});
    DeltaK dk = delta_k(Q, 0.7);
    auto a1 = build_A1(5, pd, dk);
    auto [eps, gamma] = decompose(Q->from_rat(Rat(5, 8)), a1, pd, dk);
    CHECK(eps == Q->from_rat(Rat(1, 8)));
    CHECK(gamma == Q->from_rat(5));

    auto [e2, g2] = decompose(Q->from_rat(-5), a1, pd, dk);
    CHECK(e2 * g2 == Q->from_rat(-5));
    CHECK(g2 == Q->from_rat(5));

    CHECK_THROWS_AS(decompose(Q->from_rat(3), a1, pd, dk), Error);  // N_S mismatch

    // round trip on sampled beta with N_S(beta) = m
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<long> e(-6, 6);
    for (Int m : {Int(1), Int(5), Int(12)}) {
        auto a1m = build_A1(m, pd, dk);
        for (int t = 0; t < 25; ++t) {
            // beta = gamma * eps from random ingredients
            const FieldElement& g = a1m.gammas[static_cast<size_t>(
                std::uniform_int_distribution<size_t>(0, a1m.gammas.size() - 1)(rng))];
            if (s_norm(g, *ctx) != Rat(m)) continue;
            ExponentVector v;
            v.zeta_pow = e(rng) & 1;
            v.g_exp = {e(rng)};
            FieldElement beta = g * from_exponents(*ctx, v);
            auto [ee2, gg] = decompose(beta, a1m, pd, dk);
            CHECK(ee2 * gg == beta);
            CHECK(s_norm(gg, *ctx) == Rat(m));
        }
    }
}

TEST_CASE("build_A2 golden and completeness") {
    CHECK(build_A2(1).size() == 1);
    CHECK(build_A2(12).size() == 18);
    CHECK(build_A2(6).size() == 9);
    CHECK_THROWS_AS(build_A2(0), Error);
    // brute force cross-check for m = 12
    auto a2 = build_A2(12);
    int count = 0;
    for (long k1 = 1; k1 <= 12; ++k1)
        for (long k2 = 1; k2 <= 12; ++k2)
            for (long k3 = 1; k3 <= 12; ++k3)
                if (k1 * k2 * k3 == 12) {
                    ++count;
                    bool found = false;
                    for (auto& t : a2)
                        if (t[0] == k1 && t[1] == k2 && t[2] == k3) found = true;
                    CHECK(found);
                }
    CHECK(static_cast<size_t>(count) == a2.size());
    CHECK(Int(static_cast<long>(a2.size())) <= divisor_count(12) * divisor_count(12));
}
