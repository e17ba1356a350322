#include "defmut/padic.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace defmut;

namespace {

bool prime_by_trial_division(long n) {
    if (n < 2) return false;
    for (long d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

Integer product_of(const IntegerFactorization& f) {
    Integer p = 1;
    for (const auto& [q, e] : f.primes) p *= ipow(q, static_cast<unsigned long>(e));
    for (const auto& c : f.composites) p *= c;
    return p;
}

// x = 1, 5, 1/5, 1/3, 25, 1/25, 1: the prime 5 shows the window (1, -1) twice,
// once with scale two; the lone pole of 3 fits no instance.
OrbitRecord synthetic_orbit() {
    OrbitRecord o;
    for (const Rational& v : {Rational(1), Rational(5), make_rational(1, 5), make_rational(1, 3), Rational(25),
                              make_rational(1, 25), Rational(1)})
        o.points.push_back({v});
    return o;
}

}  // namespace

TEST(Primality, AgreesWithTrialDivision) {
    for (long n = 0; n < 20000; ++n) ASSERT_EQ(is_probable_prime(Integer(n)), prime_by_trial_division(n)) << n;
    EXPECT_TRUE(is_probable_prime(Integer("170141183460469231731687303715884105727")));  // 2^127 - 1
    EXPECT_FALSE(is_probable_prime(Integer("3215031751")));  // strong pseudoprime to bases 2, 3, 5, 7
}

TEST(Factorization, ReconstructsTheInput) {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 40; ++trial) {
        Integer n = Integer(static_cast<unsigned long>(rng() >> 4)) * Integer(static_cast<unsigned long>(rng() >> 40));
        IntegerFactorization f = factor_integer(n, 1000);
        EXPECT_EQ(product_of(f), n);
        for (const auto& [p, e] : f.primes) EXPECT_TRUE(is_probable_prime(p));
    }
}

TEST(Factorization, MersenneSixtySeven) {
    IntegerFactorization f = factor_integer(Integer("147573952589676412927"), 1000);
    ASSERT_TRUE(f.composites.empty());
    ASSERT_EQ(f.primes.size(), 2u);
    EXPECT_EQ(f.primes.count(Integer("193707721")), 1u);
    EXPECT_EQ(f.primes.count(Integer("761838257287")), 1u);
}

TEST(Factorization, RationalsCarrySignAndValuations) {
    FactoredRational f = factor_rational(make_rational(-448, 15));
    EXPECT_EQ(f.sign, -1);
    EXPECT_EQ(f.valuation(2), 6);
    EXPECT_EQ(f.valuation(7), 1);
    EXPECT_EQ(f.valuation(3), -1);
    EXPECT_EQ(f.valuation(11), 0);
    EXPECT_TRUE(f.complete());
    EXPECT_EQ(f.value(), make_rational(-448, 15));
    EXPECT_EQ(factor_rational(0).sign, 0);
}

TEST(Valuations, SeriesAndTable) {
    auto facts = factor_orbit(synthetic_orbit(), 1000, 2);
    EXPECT_EQ(valuation_series(facts, 5, 0), (std::vector<int>{0, 1, -1, 0, 2, -2, 0}));
    ValuationTable t = valuation_table(facts, {"x"});
    EXPECT_EQ(t.steps, 7);
    EXPECT_EQ(t.rows.size(), 2u);
    EXPECT_EQ(t.at(3, 0, 3), -1);
    EXPECT_EQ(t.at(13, 0, 0), 0);
    ValuationTable only5 = valuation_table(facts, {"x"}, {5});
    EXPECT_EQ(only5.rows.size(), 1u);
}

TEST(Patterns, TemplateStripsZeroColumns) {
    SingularityPattern p("pole", {"x", "y"}, {{"x", {0, 1, -1, 0}}, {"y", {0, 0, 1, 0}}});
    EXPECT_EQ(p.width(), 2);
    EXPECT_EQ(p.at(0, 0), 1);
    EXPECT_EQ(p.at(1, 1), 1);
}

TEST(Patterns, DetectsScaledInstances) {
    auto facts = factor_orbit(synthetic_orbit());
    ValuationTable t = valuation_table(facts, {"x"});
    std::vector<SingularityPattern> lib{SingularityPattern("pole", {"x"}, {{"x", {1, -1}}})};
    PatternReport r = detect_patterns(t, lib);
    const PrimeClassification* five = r.find(5);
    ASSERT_NE(five, nullptr);
    EXPECT_EQ(five->classification, "pole");
    ASSERT_EQ(five->instances.size(), 2u);
    EXPECT_EQ(five->instances[0].start, 1);
    EXPECT_EQ(five->instances[0].scale, 1);
    EXPECT_EQ(five->instances[1].start, 4);
    EXPECT_EQ(five->instances[1].scale, 2);
    const PrimeClassification* three = r.find(3);
    ASSERT_NE(three, nullptr);
    EXPECT_EQ(three->classification, "unclassified");
}
