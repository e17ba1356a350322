#include "defmut/io.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace defmut;

TEST(Serialization, RationalsAreExactStrings) {
    EXPECT_EQ(rational_string(make_rational(-6, 4)), "-3/2");
    EXPECT_EQ(rational_from_json(Json("22/7")), make_rational(22, 7));
    EXPECT_EQ(rational_from_json(Json(5)), Rational(5));
    EXPECT_THROW(rational_from_json(Json(0.5)), Error);
    EXPECT_EQ(rationals_to_json({make_rational(1, 2), 3}).dump(), R"(["1/2","3"])");
    EXPECT_EQ(parse_rational_list("1,1"), (std::vector<Rational>{1, 1}));
    EXPECT_EQ(parse_rational_list("3/2 1"), (std::vector<Rational>{make_rational(3, 2), 1}));
    EXPECT_THROW(parse_rational_list("1,,x"), Error);
}

TEST(Serialization, OrbitCsvRoundTrips) {
    std::mt19937 rng(23);
    std::uniform_int_distribution<long> n(-50, 50), d(1, 30);
    for (int trial = 0; trial < 20; ++trial) {
        OrbitRecord o;
        for (int s = 0; s < 1 + trial % 6; ++s) o.points.push_back({make_rational(n(rng), d(rng)), make_rational(n(rng), d(rng))});
        std::vector<std::string> names;
        OrbitRecord back = orbit_from_csv(orbit_to_csv(o, {"y", "w"}), &names);
        EXPECT_EQ(back.points, o.points);
        EXPECT_EQ(names, (std::vector<std::string>{"y", "w"}));
    }
    EXPECT_THROW(orbit_from_csv("step,y\n0,1,2\n"), Error);
}

TEST(Serialization, OrbitJsonUsesStrings) {
    OrbitRecord o{{{1, make_rational(1, 2)}, {3, 2}}, std::nullopt};
    Json j = orbit_to_json(o, {"y", "w"});
    EXPECT_EQ(j["points"][0]["w"], "1/2");
}

TEST(Serialization, FactoredForm) {
    FactoredRational f = factor_rational(make_rational(64 * 7 * 137, 19 * 23 * 151));
    EXPECT_EQ(format_factored(f), "2^6*7*137/(19*23*151)");
    EXPECT_EQ(format_factored(factor_rational(-1)), "-1");
    Json j = factored_to_json(f);
    EXPECT_TRUE(j.is_object());
}

TEST(Serialization, ValuationCsvHeader) {
    OrbitRecord o{{{2}, {make_rational(1, 2)}}, std::nullopt};
    ValuationTable t = valuation_table(factor_orbit(o), {"x"});
    std::string csv = valuation_csv(t);
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "prime,variable,0,1");
    EXPECT_NE(csv.find("2,x,1,-1"), std::string::npos);
}
