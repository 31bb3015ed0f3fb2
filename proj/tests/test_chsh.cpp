#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hvcheck/chsh.hpp"

using namespace hvcheck;

TEST_CASE("constant strategies give |S| = 2") {
    // A = B = +1 regardless of settings
    PredictionsTable t = strategy_table(0, 0, 0, 0);
    CHECK(chsh_value(t) == QuadVal(2)); // 1 + 1 + 1 - 1
}

TEST_CASE("the local bound is exactly 2 by 16-strategy brute force") {
    CHECK(chsh_local_bound() == QuadVal(2));
    // every deterministic strategy sits at -2 or +2
    for (int f0 = 0; f0 < 2; ++f0)
        for (int f1 = 0; f1 < 2; ++f1)
            for (int g0 = 0; g0 < 2; ++g0)
                for (int g1 = 0; g1 < 2; ++g1) {
                    QuadVal s = chsh_value(strategy_table(f0, f1, g0, g1));
                    CHECK((s == QuadVal(2) || s == QuadVal(-2)));
                }
}

TEST_CASE("the nonsignalling box reaches 4") {
    PredictionsTable t = pr_box_table();
    CHECK(chsh_value(t) == QuadVal(4));
    // uniform marginals
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int A = 0; A < 2; ++A) {
                QuadVal marg = t.p(a, b, A, 0) + t.p(a, b, A, 1);
                CHECK(marg == QuadVal(Rational(1, 2)));
            }
}

TEST_CASE("singlet table at the standard angles gives |S| = 2 sqrt 2 exactly") {
    PredictionsTable t = singlet_exact_table(0, 2, 1, -1);
    QuadVal s = chsh_value(t);
    CHECK(s.abs() == QuadVal(Rational(0), Rational(2)));
    CHECK(s.abs().str() == "(0+2*sqrt2)/1");
}

TEST_CASE("equal angles give perfect anticorrelation") {
    PredictionsTable t = singlet_exact_table(3, 2, 3, -1);
    // P(A = B) = 0 in the (a, b) column since cos 0 = 1
    CHECK(t.p(0, 0, 0, 0).is_zero());
    CHECK(t.p(0, 0, 1, 1).is_zero());
    CHECK(t.p(0, 0, 0, 1) == QuadVal(Rational(1, 2)));
}

TEST_CASE("orthogonal angles give independent outcomes") {
    PredictionsTable t = singlet_exact_table(2, 1, 0, -1);
    CHECK(correlator(t, 0, 0).is_zero()); // cos(pi/2) = 0
    for (int A = 0; A < 2; ++A)
        for (int B = 0; B < 2; ++B) CHECK(t.p(0, 0, A, B) == QuadVal(Rational(1, 4)));
}

TEST_CASE("float mode approximates the symbolic value") {
    PredictionsTable t = singlet_float_table(0.0, M_PI / 2, M_PI / 4, -M_PI / 4);
    CHECK(std::abs(std::abs(chsh_value_float(t)) - 2.0 * std::sqrt(2.0)) < 1e-12);
    CHECK(t.is_approx);
    // agreement between the two evaluation routes on the exact table
    PredictionsTable e = singlet_exact_table(0, 2, 1, -1);
    CHECK(std::abs(chsh_value_float(e) - chsh_value(e).to_double()) < 1e-12);
}

TEST_CASE("unnormalized tables are rejected") {
    PredictionsTable t = pr_box_table();
    t.p(0, 0, 0, 0) = QuadVal(Rational(1, 3));
    CHECK_THROWS_AS(chsh_value(t), Error);
    try {
        chsh_value(t);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::BadTable);
    }
    PredictionsTable neg = pr_box_table();
    neg.p(0, 0, 0, 0) = QuadVal(Rational(-1, 2));
    neg.p(0, 0, 1, 1) = QuadVal(Rational(3, 2));
    CHECK_THROWS_AS(validate_table(neg), Error);
}

TEST_CASE("mixtures of local strategies stay within the bound") {
    // convexity: an even mixture of all 16 vertices
    PredictionsTable mix;
    Rational w(1, 16);
    for (int f0 = 0; f0 < 2; ++f0)
        for (int f1 = 0; f1 < 2; ++f1)
            for (int g0 = 0; g0 < 2; ++g0)
                for (int g1 = 0; g1 < 2; ++g1) {
                    PredictionsTable t = strategy_table(f0, f1, g0, g1);
                    for (std::size_t i = 0; i < 16; ++i)
                        mix.exact[i] += t.exact[i] * QuadVal(w);
                }
    QuadVal s = chsh_value(mix).abs();
    CHECK(s <= QuadVal(2));
}
