#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fixtures.hpp"
#include "quartdiv/forms.hpp"

using namespace quartdiv;

TEST_CASE("construction fills resultants and discriminant") {
    auto t = fixtures::gaussian();
    CHECK(t.delta12 == 1);
    CHECK(t.delta13 == 1);  // Q(0,1) = 1
    CHECK(t.delta23 == 1);  // Q(-1,0) = 1
    CHECK(t.delta == -4);

    for (const auto& f : fixtures::all()) {
        CHECK(f.t.delta12 != 0);
        CHECK(f.t.delta13 != 0);
        CHECK(f.t.delta23 != 0);
        CHECK(f.t.delta != 0);
        CHECK(!is_perfect_square_i128(f.t.delta));
    }
}

TEST_CASE("construction rejects degenerate input") {
    // proportional linear forms
    CHECK_THROWS_AS(make_form_triple({1, 2}, {2, 4}, {1, 1, 0}), std::invalid_argument);
    // reducible quadratic: x1*x2 has square discriminant 1
    CHECK_THROWS_AS(make_form_triple({1, 0}, {0, 1}, {0, 0, 1}), std::invalid_argument);
    // Q sharing a root with L1: Q(-b1, a1) = 0 for L1 = x1, Q = x2^2
    CHECK_THROWS_AS(make_form_triple({1, 0}, {1, 1}, {0, 1, 0}), std::invalid_argument);
    // zero form
    CHECK_THROWS_AS(make_form_triple({0, 0}, {0, 1}, {1, 1, 0}), std::invalid_argument);
}

TEST_CASE("primitive decomposition") {
    auto t = make_form_triple({2, 4}, {0, 1}, {3, 3, 3});
    CHECK(t.ell1 == 2);
    CHECK(t.L1star.a == 1);
    CHECK(t.L1star.b == 2);
    CHECK(t.ell2 == 1);
    CHECK(t.q == 3);
    CHECK(t.Qstar.a3 == 1);
    CHECK(t.Qstar.b3 == 1);
    CHECK(t.Qstar.c3 == 1);
    CHECK(!t.is_primitive());
    auto p = t.primitive_triple();
    CHECK(p.is_primitive());
    CHECK(p.L1.a == 1);
    CHECK(p.Q.a3 == 1);

    CHECK(fixtures::gaussian().is_primitive());

    // positive content with negative leading coefficient
    auto neg = make_form_triple({-2, 4}, {0, 1}, {1, 1, 1});
    CHECK(neg.ell1 == 2);
    CHECK(neg.L1star.a == -1);
}

TEST_CASE("content homomorphism and homogeneity") {
    auto t = fixtures::nonprimitive();
    for (i64 x1 = -5; x1 <= 5; ++x1)
        for (i64 x2 = -5; x2 <= 5; ++x2) {
            CHECK(evaluate(t.L1, x1, x2) == (i128)t.ell1 * evaluate(t.L1star, x1, x2));
            CHECK(evaluate(t.L2, x1, x2) == (i128)t.ell2 * evaluate(t.L2star, x1, x2));
            CHECK(evaluate(t.Q, x1, x2) == (i128)t.q * evaluate(t.Qstar, x1, x2));
            for (i64 k = -3; k <= 3; ++k) {
                CHECK(evaluate(t.Q, k * x1, k * x2) == (i128)k * k * evaluate(t.Q, x1, x2));
                CHECK(evaluate(t.L1, k * x1, k * x2) == (i128)k * evaluate(t.L1, x1, x2));
            }
        }
}

TEST_CASE("l_infinity") {
    CHECK(l_infinity(fixtures::gaussian()) == 1);
    CHECK(l_infinity(make_form_triple({3, -5}, {0, 1}, {1, 1, 1})) == 5);
    CHECK(l_infinity(make_form_triple({1, 0}, {0, 1}, {1, -7, 1})) == 7);
}

TEST_CASE("printing") {
    CHECK(!form_to_string(fixtures::gaussian().L1).empty());
    CHECK(!form_to_string(fixtures::gaussian().Q).empty());
}
