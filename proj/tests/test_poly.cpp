#include <doctest.h>

#include "tmk/modpoly.hpp"
#include "tmk/poly.hpp"

using namespace tmk;

TEST_CASE("polynomial arithmetic basics") {
    QPoly f = qp_from_ints({-1, -1, 0, 1});  // x^3 - x - 1
    QPoly g = qp_from_ints({1, 1});          // x + 1
    CHECK(qp_deg(f) == 3);
    CHECK(qp_eval(f, Rat(2)) == Rat(5));
    auto [q, r] = qp_divmod(f, g);
    CHECK(qp_add(qp_mul(q, g), r) == f);
    CHECK(qp_deg(r) < qp_deg(g));
}

TEST_CASE("gcd and squarefree") {
    QPoly a = qp_mul(qp_from_ints({-1, 1}), qp_from_ints({-1, 1}));  // (x-1)^2
    QPoly b = qp_from_ints({-1, 0, 1});                              // x^2-1
    QPoly g = qp_gcd(a, b);
    CHECK(g == qp_from_ints({-1, 1}));
    CHECK(!qp_is_squarefree(a));
    CHECK(qp_is_squarefree(b));
}

TEST_CASE("resultant and discriminant") {
    // disc(x^2+1) = -4, disc(x^3-x-1) = -23
    CHECK(qp_discriminant(qp_from_ints({1, 0, 1})) == Rat(-4));
    CHECK(qp_discriminant(qp_from_ints({-1, -1, 0, 1})) == Rat(-23));
    // resultant(x^2-2, x^2-3) = (2-3)^2 = 1
    CHECK(qp_resultant(qp_from_ints({-2, 0, 1}), qp_from_ints({-3, 0, 1})) == Rat(1));
}

TEST_CASE("sturm real root counting and isolation") {
    QPoly f = qp_from_ints({-1, -1, 0, 1});  // one real root ~1.3247
    SturmChain st(f);
    CHECK(st.count_all() == 1);
    auto ivs = qp_isolate_real_roots(f);
    REQUIRE(ivs.size() == 1);
    CHECK(qp_eval(f, ivs[0].first) * qp_eval(f, ivs[0].second) <= 0);

    QPoly g = qp_from_ints({-2, 0, 1});  // x^2-2: two real roots
    CHECK(SturmChain(g).count_all() == 2);
    auto iv2 = qp_isolate_real_roots(g);
    CHECK(iv2.size() == 2);
    CHECK(iv2[0].second <= iv2[1].first);
}

TEST_CASE("interpolation round trip") {
    QPoly f = qp_from_ints({3, -2, 0, 5});
    std::vector<Rat> xs, ys;
    for (int t = 0; t <= 3; ++t) {
        xs.emplace_back(t);
        ys.push_back(qp_eval(f, Rat(t)));
    }
    CHECK(qp_interpolate(xs, ys) == f);
}

TEST_CASE("factorization mod p") {
    // x^2+1 mod 5 = (x+2)(x+3); mod 2 = (x+1)^2; mod 3 irreducible
    ZPoly f{Int(1), Int(0), Int(1)};
    auto f5 = factor_mod_p(f, 5);
    REQUIRE(f5.size() == 2);
    CHECK(zp_deg(f5[0].first) == 1);
    CHECK(f5[0].second == 1);
    auto f2 = factor_mod_p(f, 2);
    REQUIRE(f2.size() == 1);
    CHECK(f2[0].second == 2);
    CHECK(zp_deg(f2[0].first) == 1);
    auto f3 = factor_mod_p(f, 3);
    REQUIRE(f3.size() == 1);
    CHECK(f3[0].second == 1);
    CHECK(zp_deg(f3[0].first) == 2);
}

TEST_CASE("factorization mod 2 with frobenius block") {
    // x^4 + x^2 = x^2 (x+1)^2 mod 2
    ZPoly f{Int(0), Int(0), Int(1), Int(0), Int(1)};
    auto fac = factor_mod_p(f, 2);
    Int total(1);
    int degsum = 0;
    for (auto& [g, e] : fac) degsum += zp_deg(g) * e;
    CHECK(degsum == 4);
    (void)total;
}

TEST_CASE("hensel lifting") {
    // x^2+1 = (x+2)(x+3) mod 5, lift to 5^6 and verify the product
    ZPoly f{Int(1), Int(0), Int(1)};
    auto fac = factor_mod_p(f, 5);
    std::vector<ZPoly> blocks;
    for (auto& [g, e] : fac) {
        ZPoly b{Int(1)};
        for (int i = 0; i < e; ++i) b = zp_mul(b, g, 5);
        blocks.push_back(b);
    }
    auto lifted = hensel_lift(f, blocks, 5, 6);
    Int mod = pow_int(5, 6);
    ZPoly prod{Int(1)};
    for (auto& b : lifted) prod = zp_mul(prod, b, mod);
    CHECK(prod == zp_reduce(f, mod));
    // each lifted factor evaluates to 0 at a lifted root of -1
    for (auto& b : lifted) CHECK(zp_deg(b) == 1);
}

TEST_CASE("dedekind maximality") {
    // Z[sqrt(5)] is not 2-maximal; Z[i] is maximal at 2; Z[sqrt(2)] maximal at 2
    CHECK(!dedekind_p_maximal(ZPoly{Int(-5), Int(0), Int(1)}, 2));
    CHECK(dedekind_p_maximal(ZPoly{Int(1), Int(0), Int(1)}, 2));
    CHECK(dedekind_p_maximal(ZPoly{Int(-2), Int(0), Int(1)}, 2));
    // x^2-x-1 (golden ratio) is maximal everywhere, disc 5
    CHECK(dedekind_p_maximal(ZPoly{Int(-1), Int(-1), Int(1)}, 5));
}
