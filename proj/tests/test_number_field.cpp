#include <doctest.h>

#include <random>

#include "test_util.hpp"
#include "tmk/errors.hpp"
#include "tmk/number_field.hpp"

using namespace tmk;
using namespace tmk::test;

TEST_CASE("field construction invariants") {
    auto Qi = field_Qi();
    CHECK(Qi->degree() == 2);
    CHECK(Qi->r1() == 0);
    CHECK(Qi->r2() == 1);
    CHECK(Qi->discriminant() == Int(-4));

    auto K3 = field_cubic();
    CHECK(K3->degree() == 3);
    CHECK(K3->r1() == 1);
    CHECK(K3->r2() == 1);
    CHECK(K3->discriminant() == Int(-23));

    auto Kphi = field_phi();
    CHECK(Kphi->discriminant() == Int(5));
    CHECK(Kphi->r1() == 2);

    CHECK_THROWS_AS(NumberField::make(qp_from_ints({-1, 0, 1})), Error);  // x^2-1 reducible
    CHECK_THROWS_AS(NumberField::make(qp_from_ints({1, 2, 1})), Error);   // (x+1)^2
}

TEST_CASE("irreducibility of x^4+1 (reducible mod every prime)") {
    auto K = NumberField::make(qp_from_ints({1, 0, 0, 0, 1}));
    CHECK(K->degree() == 4);
    CHECK(K->r2() == 2);
    // and a genuinely reducible quartic is rejected
    CHECK_THROWS_AS(NumberField::make(qp_from_ints({1, 0, 1, 0, 1})), Error);  // =(x^2+x+1)(x^2-x+1)
}

TEST_CASE("element arithmetic in Q(i)") {
    auto Qi = field_Qi();
    auto i = Qi->gen();
    auto one = Qi->one();
    CHECK((one + i) * (one + i) == i * Qi->from_rat(2));  // (1+i)^2 = 2i
    auto inv = (one + i).inverse();
    CHECK(inv * (one + i) == one);
    CHECK(inv == Qi->element({Rat(1, 2), Rat(-1, 2)}));  // 1/(1+i) = (1-i)/2
    CHECK_THROWS_AS(one / Qi->zero(), Error);
}

TEST_CASE("norm and trace") {
    auto Qi = field_Qi();
    auto onepi = Qi->one() + Qi->gen();
    CHECK(onepi.norm() == Rat(2));
    CHECK(onepi.trace() == Rat(2));

    auto Kphi = field_phi();
    auto phi = Kphi->gen();
    CHECK(phi.norm() == Rat(-1));
    CHECK(phi.trace() == Rat(1));

    CHECK(field_Q()->zero().norm() == Rat(0));
    CHECK(field_Q()->zero().trace() == Rat(0));
}

TEST_CASE("norm multiplicativity and trace additivity (500 random pairs)") {
    std::mt19937_64 rng(12345);
    for (auto K : {field_Qi(), field_sqrt2(), field_phi(), field_cubic()}) {
        for (int t = 0; t < 125; ++t) {
            auto a = random_element(K, rng), b = random_element(K, rng);
            CHECK((a * b).norm() == a.norm() * b.norm());
            CHECK((a + b).trace() == a.trace() + b.trace());
        }
    }
}

TEST_CASE("norm agrees with resultant route") {
    std::mt19937_64 rng(99);
    auto K = field_cubic();
    for (int t = 0; t < 50; ++t) {
        auto a = random_nonzero(K, rng);
        // N(a) = Res(f, apoly)/lc(f)^deg(apoly)
        Rat via_res = qp_resultant(K->min_poly(), a.as_poly()) /
                      pow_rat(K->min_poly().back(), qp_deg(a.as_poly()));
        CHECK(a.norm() == via_res);
    }
}

TEST_CASE("embeddings: exact enclosures") {
    auto Qi = field_Qi();
    auto em = Qi->embed(Qi->gen(), 64);
    REQUIRE(em.size() == 2);
    // upper root is +i
    CHECK(em[0].re().contains_rat(Rat(0)));
    CHECK(em[0].im().contains_rat(Rat(1)));
    CHECK(em[0].im().width() < 1e-9);
    CHECK(em[1].im().contains_rat(Rat(-1)));

    auto K2 = field_sqrt2();
    auto em2 = K2->embed(K2->gen(), 64);
    // real roots ascending: -sqrt2, +sqrt2
    CHECK(em2[0].re().definitely_negative());
    CHECK(em2[1].re().definitely_positive());
    double v = em2[1].re().mid_double();
    CHECK(v == doctest::Approx(1.41421356).epsilon(1e-6));
}

TEST_CASE("embedding width shrinks with precision") {
    auto K = field_cubic();
    auto a = K->gen() + K->from_rat(Rat(1, 3));
    auto lo = K->embed(a, 40);
    auto hi = K->embed(a, 160);
    for (size_t i = 0; i < lo.size(); ++i) {
        CHECK(hi[i].re().width() <= lo[i].re().width());
        CHECK(hi[i].re().width() < 1e-40);
    }
}

TEST_CASE("embedding order with equal real parts (x^4+4x^2+2)") {
    auto K = NumberField::make(qp_from_ints({2, 0, 4, 0, 1}));
    CHECK(K->r1() == 0);
    CHECK(K->r2() == 2);
    auto em = K->embeddings(64);
    REQUIRE(em.size() == 4);
    // all roots pure imaginary: +-i*sqrt(2 -+ sqrt2); upper two sorted by im
    CHECK(em[0].re().contains_rat(Rat(0)));
    CHECK(em[1].re().contains_rat(Rat(0)));
    CHECK(em[0].im().definitely_positive());
    CHECK(em[1].im().definitely_positive());
    CHECK(em[0].im().definitely_lt(em[1].im()));
    CHECK(em[0].im().mid_double() == doctest::Approx(0.76537).epsilon(1e-3));
    CHECK(em[1].im().mid_double() == doctest::Approx(1.84776).epsilon(1e-3));
}

TEST_CASE("exact sign at real embeddings") {
    auto K = field_sqrt2();
    // g(x) = x - 7/5: sign at -sqrt2 is -, at +sqrt2 is + (sqrt2 > 1.4)
    QPoly g{Rat(-7, 5), Rat(1)};
    CHECK(K->sign_at_real_embedding(g, 0) == -1);
    CHECK(K->sign_at_real_embedding(g, 1) == 1);
    // exact zero: g = f has sign 0 at both roots
    CHECK(K->sign_at_real_embedding(K->min_poly(), 0) == 0);
    // boundary-style: compare sqrt2 with 3/2 and with 1.41421..., exact
    CHECK(K->sign_at_real_embedding(QPoly{Rat(-3, 2), Rat(1)}, 1) == -1);
}

TEST_CASE("exact |.|^2 comparison at complex embeddings") {
    auto Qi = field_Qi();
    // |1+i|^2 = 2 exactly at the complex embedding (index 0 = upper)
    QPoly g{Rat(1), Rat(1)};  // 1 + alpha
    CHECK(Qi->cmp_abs2_at_complex_embedding(g, 0, Rat(2)) == 0);
    CHECK(Qi->cmp_abs2_at_complex_embedding(g, 0, Rat(3)) == -1);
    CHECK(Qi->cmp_abs2_at_complex_embedding(g, 0, Rat(1)) == 1);

    auto K3 = field_cubic();
    // |alpha|^2 at the complex embedding = 1/rho where rho is the real root;
    // it is irrational, so any rational comparison resolves
    int c1 = K3->cmp_abs2_at_complex_embedding(qp_x(), 1, Rat(3, 4));
    int c2 = K3->cmp_abs2_at_complex_embedding(qp_x(), 1, Rat(1));
    CHECK(c1 == 1);   // 1/1.3247 ~ 0.7549 > 0.75
    CHECK(c2 == -1);
}

TEST_CASE("supplied integral basis is validated") {
    // Q(sqrt5) via x^2-5 with the maximal basis {1, (1+x)/2}
    std::vector<std::vector<Rat>> basis{{Rat(1), Rat(0)}, {Rat(1, 2), Rat(1, 2)}};
    auto K = NumberField::make(qp_from_ints({-5, 0, 1}), basis);
    CHECK(K->discriminant() == Int(5));
    // a non-integral basis element is rejected
    std::vector<std::vector<Rat>> bad{{Rat(1), Rat(0)}, {Rat(0), Rat(1, 2)}};
    CHECK_THROWS_AS(NumberField::make(qp_from_ints({-5, 0, 1}), bad), Error);
}

TEST_CASE("theta and discriminant sign checks") {
    auto Q = field_Q();
    CHECK(Q->discriminant() == Int(1));
    auto th = Q->theta(64);
    CHECK(th.contains_rat(Rat(1)));
    CHECK(!Q->theta_warning());

    auto Qi = field_Qi();  // theta = 2 = sqrt(4): boundary, no warning
    CHECK(Qi->theta(64).contains_rat(Rat(2)));
    CHECK(!Qi->theta_warning());

    // d = r1 + 2 r2 for all test fields
    for (auto K : {field_Q(), field_Qi(), field_sqrt2(), field_phi(), field_cubic()})
        CHECK(K->degree() == K->r1() + 2 * K->r2());
}

TEST_CASE("min_poly and algebraic integrality") {
    auto Kphi = field_phi();
    auto phi = Kphi->gen();
    CHECK(phi.min_poly() == QPoly{Rat(-1), Rat(-1), Rat(1)});
    CHECK(phi.is_algebraic_integer());
    CHECK(!(phi / Kphi->from_rat(2)).is_algebraic_integer());
    // rational element has degree-1 min poly
    CHECK(Kphi->from_rat(Rat(3, 2)).min_poly() == QPoly{Rat(-3, 2), Rat(1)});
}

TEST_CASE("non-monic defining polynomial") {
    // 2x^2+1: alpha = i/sqrt2, theta = 2 alpha, theta^2 = -2
    auto K = NumberField::make(qp_from_ints({1, 0, 2}));
    CHECK(K->degree() == 2);
    CHECK(K->r2() == 1);
    auto th = K->theta_elem();
    CHECK(th.char_poly() == QPoly{Rat(2), Rat(0), Rat(1)});
    CHECK(th.is_algebraic_integer());
    CHECK(K->discriminant() == Int(-8));
}
