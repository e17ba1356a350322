#include "defmut/laurent.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace defmut;

namespace {

// Published terms of Somos-4 from four ones.
const std::vector<long> kSomos4{1, 1, 1, 1, 2, 3, 7, 23, 59, 314, 1529, 8209, 83313};

BilinearSystem somos4(const Alphabet& params, const std::string& text = "s[n+4]*s[n] = s[n+3]*s[n+1] + s[n+2]*s[n+2]") {
    return BilinearSystem({BilinearSystem::parse_equation(params, text)}, {{"s", {0, 3}}});
}

}  // namespace

TEST(Bilinear, ParsesFactorsAndCoefficients) {
    Alphabet params{{}, {"c", "d"}};
    BilinearEquation eq = BilinearSystem::parse_equation(params, "s[n+2]*t[n-2] = d*s[n+1]*t[n-1] + c*s[n]*t[n]");
    EXPECT_EQ(eq.lhs[0].seq, "s");
    EXPECT_EQ(eq.lhs[0].shift, 2);
    EXPECT_EQ(eq.lhs[1].seq, "t");
    EXPECT_EQ(eq.lhs[1].shift, -2);
    ASSERT_EQ(eq.rhs.size(), 2u);
    EXPECT_EQ(eq.rhs[0].coeff, params.parse("d"));
    EXPECT_EQ(eq.rhs[1].factors.size(), 2u);
    EXPECT_THROW(BilinearSystem::parse_equation(params, "s[n+1] = s[n]"), ParseError);
    EXPECT_THROW(BilinearSystem::parse_equation(params, "s[n+1]*s[m] = 1"), ParseError);
    EXPECT_THROW(BilinearSystem({eq}, {{"s", {0, 1}}}), Error);
}

TEST(Bilinear, Somos4MatchesPublishedTerms) {
    Alphabet params;
    BilinearSystem sys = somos4(params);
    auto o = iterate_bilinear(sys, constant_window(sys, 1), 9, {});
    for (std::size_t n = 0; n < kSomos4.size(); ++n) EXPECT_EQ(o.at("s", static_cast<int>(n)), Rational(kSomos4[n]));
    EXPECT_THROW(o.at("s", 14), Error);
}

TEST(Bilinear, ZeroDivisorIsReported) {
    Alphabet params;
    BilinearSystem sys = somos4(params);
    TauOrbit<Rational> init = constant_window(sys, 1);
    init.values["s"][0] = 0;
    EXPECT_THROW(iterate_bilinear(sys, init, 2, {}), BilinearSingular);
}

TEST(Laurent, Somos4IsLaurentWithPositiveCoefficients) {
    Alphabet params;
    LaurentReport r = laurent_property_check(somos4(params), params, 5);
    EXPECT_TRUE(r.all_laurent());
    EXPECT_TRUE(r.all_positive());
    EXPECT_EQ(r.depth_reached, 5);
    EXPECT_EQ(r.first_failure_step(), -1);
}

TEST(Laurent, UndeformedRankTwoRecurrenceIsLaurent) {
    Alphabet params;
    BilinearSystem sys({BilinearSystem::parse_equation(params, "x[n+2]*x[n] = x[n+1] + 1")}, {{"x", {0, 1}}});
    EXPECT_TRUE(laurent_property_check(sys, params, 6).all_laurent());
}

TEST(Laurent, DeformedLynessRecurrenceIsNotLaurent) {
    // x4 = (a x3 + b) / x2 keeps the factor a x1 + b of x2 in its denominator.
    Alphabet params{{}, {"a", "b"}};
    BilinearSystem sys({BilinearSystem::parse_equation(params, "x[n+2]*x[n] = a*x[n+1] + b")}, {{"x", {0, 1}}});
    LaurentReport r = laurent_property_check(sys, params, 4);
    EXPECT_FALSE(r.all_laurent());
    EXPECT_EQ(r.first_failure_step(), 3);
}

TEST(Laurent, SymbolicOrbitSpecializesToTheNumericOne) {
    std::mt19937 rng(5);
    std::uniform_int_distribution<long> v(1, 9);
    Alphabet params{{}, {"a"}};
    BilinearSystem sys = somos4(params, "s[n+4]*s[n] = a*s[n+3]*s[n+1] + s[n+2]*s[n+2]");
    Alphabet alphabet = params;
    auto sym = iterate_bilinear_symbolic(sys, alphabet, 4);
    for (int trial = 0; trial < 5; ++trial) {
        TauOrbit<Rational> init;
        Point p{{alphabet.index("a"), v(rng)}};
        for (int i = 0; i <= 3; ++i) {
            init.values["s"][i] = v(rng);
            p[alphabet.index("s_" + std::to_string(i))] = init.values["s"][i];
        }
        auto num = iterate_bilinear(sys, init, 4, {{alphabet.index("a"), p[alphabet.index("a")]}});
        for (int n = 4; n <= 7; ++n) EXPECT_EQ(evaluate(sym.at("s", n), p), num.at("s", n));
    }
}

TEST(TauProjection, MonomialsInShiftedValues) {
    Alphabet params;
    BilinearSystem sys = somos4(params);
    auto o = iterate_bilinear(sys, constant_window(sys, 1), 6, {});
    TauProjection p{{{"u", {{{"s", 0}, 1}, {{"s", 2}, 1}, {{"s", 1}, -2}}}}};
    OrbitRecord r = tau_projection(p, o, 0, 4);
    ASSERT_EQ(r.points.size(), 5u);
    for (int n = 0; n <= 4; ++n) {
        Rational expected = Rational(kSomos4[n] * kSomos4[n + 2]) / Rational(kSomos4[n + 1] * kSomos4[n + 1]);
        EXPECT_EQ(r.points[n][0], expected);
    }
}

TEST(ClusterSequence, Somos4QuiverRealizesTheShift) {
    Alphabet params;
    BilinearSystem sys = somos4(params);
    auto o = iterate_bilinear(sys, constant_window(sys, 1), 8, {});
    ExchangeMatrix b = ExchangeMatrix::square({{0, 1, -2, 1}, {-1, 0, 3, -2}, {2, -3, 0, 1}, {-1, 2, -1, 0}});
    MutationWord w{{1}, Permutation({4, 1, 2, 3})};
    std::vector<TauLabel> labels{{"s", 0}, {"s", 1}, {"s", 2}, {"s", 3}};
    auto r = tau_cluster_sequence_check(b, w, {1, 1, 1, 1}, labels, 1, 6, o);
    EXPECT_TRUE(r.ok());
    auto wrong_shift = tau_cluster_sequence_check(b, w, {1, 1, 1, 1}, labels, 2, 2, o);
    EXPECT_FALSE(wrong_shift.ok());
}
