#include <doctest.h>

#include "test_util.hpp"
#include "tmk/errors.hpp"
#include "tmk/sunit_solver.hpp"

using namespace tmk;
using namespace tmk::test;

namespace {
bool contains_pair(const SolutionSetReport& rep, const Rat& x, const Rat& y) {
    for (auto& s : rep.solutions)
        if (s.values[0].rational_value() == x && s.values[1].rational_value() == y) return true;
    return false;
}
}  // namespace

TEST_CASE("x + y = 1 over (Q, {inf,2,3}), box 10: the 21 solutions") {
    auto Q = field_Q();
    auto ctx = SContext::make(Q, {"2", "3"});
    UnitEquation eq{{Q->one(), Q->one()}, ctx, 10};
    auto rep = solve_unit_equation(eq);
    CHECK(rep.solutions.size() == 21);
    CHECK(rep.bound == pow_int(2, 40));  // s = 2
    CHECK(contains_pair(rep, Rat(2), Rat(-1)));
    CHECK(contains_pair(rep, Rat(1, 2), Rat(1, 2)));
    CHECK(contains_pair(rep, Rat(9), Rat(-8)));
    CHECK(contains_pair(rep, Rat(-8), Rat(9)));
    // every solution re-verifies exactly and is closed under swap
    for (auto& s : rep.solutions) {
        CHECK(s.values[0] + s.values[1] == Q->one());
        CHECK(contains_pair(rep, s.values[1].rational_value(), s.values[0].rational_value()));
    }
}

TEST_CASE("x + y = 1 over (Q, S_inf): no solutions") {
    auto Q = field_Q();
    auto ctx = SContext::make(Q, {});
    UnitEquation eq{{Q->one(), Q->one()}, ctx, 5};
    auto rep = solve_unit_equation(eq);
    CHECK(rep.solutions.empty());
}

TEST_CASE("degenerate subsums are excluded (l = 3)") {
    auto Q = field_Q();
    auto ctx = SContext::make(Q, {"2"});
    UnitEquation eq{{Q->one(), Q->one(), Q->one()}, ctx, 3};
    auto rep = solve_unit_equation(eq);
    CHECK(rep.degenerate_excluded > 0);  // e.g. (1, t, -t)
    for (auto& s : rep.solutions) {
        FieldElement sum = Q->zero();
        for (auto& v : s.values) sum = sum + v;
        CHECK(sum == Q->one());
        // no vanishing strict subsum
        for (unsigned mask = 1; mask + 1 < 8u; ++mask) {
            FieldElement sub = Q->zero();
            for (size_t i = 0; i < 3; ++i)
                if (mask & (1u << i)) sub = sub + s.values[i];
            CHECK(!sub.is_zero());
        }
    }
}

TEST_CASE("box monotonicity and permutation symmetry") {
    auto Q = field_Q();
    auto ctx = SContext::make(Q, {"2", "3"});
    auto repS = solve_unit_equation({{Q->one(), Q->from_rat(2)}, ctx, 4});
    auto repL = solve_unit_equation({{Q->one(), Q->from_rat(2)}, ctx, 5});
    // solutions(B) subset of solutions(B+1)
    for (auto& s : repS.solutions) {
        bool found = false;
        for (auto& t : repL.solutions)
            if (t.values[0] == s.values[0] && t.values[1] == s.values[1]) found = true;
        CHECK(found);
    }
    // permuted deltas give permuted solutions
    auto repP = solve_unit_equation({{Q->from_rat(2), Q->one()}, ctx, 4});
    for (auto& s : repS.solutions) {
        bool found = false;
        for (auto& t : repP.solutions)
            if (t.values[0] == s.values[1] && t.values[1] == s.values[0]) found = true;
        CHECK(found);
    }
}

TEST_CASE("unit equation over Q(phi)") {
    // x + y = 1 in Z[phi] units: phi + (1-phi) = 1 with 1-phi = -phi^{-1}
    auto K = field_phi();
    auto ctx = SContext::make(K, {});
    auto rep = solve_unit_equation({{K->one(), K->one()}, ctx, 4});
    bool has_phi = false;
    for (auto& s : rep.solutions)
        if (s.values[0] == K->gen()) has_phi = true;
    CHECK(has_phi);
    for (auto& s : rep.solutions) CHECK(s.values[0] + s.values[1] == K->one());
}

TEST_CASE("build_A3 golden values") {
    auto Q = field_Q();
    auto ctx = SContext::make(Q, {"2", "3"});
    auto a3 = build_A3({Q->one(), Q->one()}, ctx, 10);
    auto has = [&](const Rat& v) {
        for (auto& x : a3)
            if (x.rational_value() == v) return true;
        return false;
    };
    CHECK(has(Rat(1)));
    CHECK(has(Rat(2)));
    CHECK(has(Rat(9)));
    CHECK(has(Rat(1, 2)));
    CHECK(has(Rat(-8)));
    CHECK(a3.size() == 22);  // 21 first components (incl. 1) plus 1 itself deduped

    // empty solution set still contains 1
    auto ctx0 = SContext::make(Q, {});
    auto a30 = build_A3({Q->one(), Q->one()}, ctx0, 3);
    REQUIRE(a30.size() == 1);
    CHECK(a30[0] == Q->one());

    CHECK_THROWS_AS(build_A3({Q->one()}, ctx, 3), Error);
}

TEST_CASE("build_A3_tilde closure") {
    auto Q = field_Q();
    auto ctx = SContext::make(Q, {"2", "3"});
    auto a3t = build_A3_tilde({Q->one(), Q->one()}, ctx, 10);
    auto has = [&](const Rat& v) {
        for (auto& x : a3t)
            if (x.rational_value() == v) return true;
        return false;
    };
    CHECK(has(Rat(1)));
    CHECK(has(Rat(1, 9)));  // inverse of 9
    // closed under inversion
    for (auto& x : a3t) CHECK(has(1 / x.rational_value()));
    // symmetric deltas: A3_tilde = A3 union A3^{-1}
    auto a3 = build_A3({Q->one(), Q->one()}, ctx, 10);
    size_t expect = 0;
    {
        std::vector<Rat> vals;
        for (auto& x : a3) {
            vals.push_back(x.rational_value());
            vals.push_back(1 / x.rational_value());
        }
        std::sort(vals.begin(), vals.end());
        vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
        expect = vals.size();
    }
    CHECK(a3t.size() == expect);
}

TEST_CASE("build_A4 golden values") {
    auto Q = field_Q();
    auto ctx = SContext::make(Q, {"2", "3"});
    std::array<FieldElement, 3> ap{Q->one(), Q->from_rat(2), Q->from_rat(4)};
    auto a4 = build_A4(ap, ctx, 10);
    auto has = [&](const Rat& v) {
        for (auto& x : a4)
            if (x.rational_value() == v) return true;
        return false;
    };
    CHECK(has(Rat(1)));  // t = (1,1,1): -2 + 3 - 1 = 0
    CHECK(has(Rat(2)));  // t = (1,2,4): -2 + 6 - 4 = 0
    CHECK(has(Rat(4)));
    std::array<FieldElement, 3> bad{Q->one(), Q->one(), Q->from_rat(2)};
    CHECK_THROWS_AS(build_A4(bad, ctx, 3), Error);
}
