#include "defmut/scenarios.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

using namespace defmut;

namespace {

const ScenarioRegistry& registry() { return ScenarioRegistry::builtin(); }

// Every construction the engine promises to verify; each must be claimed by
// at least one manifest check.
const std::vector<std::string> kConstructs{
    "lyness-map", "rank-two-map", "mutation-periodicity", "plane-form", "form-preservation",
    "general-exchange-function", "lyness-integral", "five-cycle", "five-cycle-integrals", "lyness-recurrence",
    "somos-7", "matrix-mutation", "A3-map", "cluster-mutation", "A3-recurrences", "A3-periodicity",
    "A3-kernel-image", "A3-reduced-form", "A3-reduced-map", "A3-periodic-integrals", "A3-deformed-integrals",
    "A3-rational-orbit", "A3-padic-patterns", "A3-tau-substitution", "qrt-pair", "A3-bilinear-system",
    "A3-laurent", "A3-tau-exchange-matrix", "A3-extended-exchange-matrix", "A3-mutation-sequence", "A4-map",
    "A4-form", "A4-bracket", "A4-periodicity", "A4-periodic-integrals", "A4-integrals", "A4-integral-conditions",
    "A4-involution", "A4-orbit-table", "A4-padic-patterns", "A4-tau-substitution", "A4-tau-table",
    "A4-bilinear-system", "A4-laurent", "A4-tau-exchange-matrix", "A4-extended-exchange-matrix",
    "A4-mutation-sequence", "sg22-map", "sg22-quiver", "sg22-reduction", "sg22-integral", "sg22-trivial-dof",
    "sg41-map", "sine-gordon-lattice"};

RunOptions only(std::vector<std::string> names, NamedBindings set = {}) {
    RunOptions o;
    o.only = std::move(names);
    o.set = std::move(set);
    return o;
}

const CheckResult& find_check(const ScenarioReport& r, const std::string& name) {
    auto it = std::find_if(r.checks.begin(), r.checks.end(), [&](const CheckResult& c) { return c.name == name; });
    if (it == r.checks.end()) throw Error("no check '" + name + "' in report");
    return *it;
}

}  // namespace

TEST(Registry, ShipsTheExpectedScenarios) {
    std::vector<std::string> expected{"A2", "A3", "A3-reduced", "A4", "A4system", "qrt",
                                      "sg-2-2", "sg-4-1", "somos7", "tausys-A3"};
    auto ids = registry().ids();
    std::sort(expected.begin(), expected.end());
    std::sort(ids.begin(), ids.end());
    EXPECT_EQ(ids, expected);
    EXPECT_THROW(registry().get("nope"), Error);
}

TEST(Registry, EveryConstructIsCoveredAndEveryKindIsKnown) {
    std::set<std::string> covered;
    auto kinds = check_kinds();
    for (const auto& id : registry().ids())
        for (const auto& c : registry().get(id).checks()) {
            const std::string kind = c.at("check").get<std::string>();
            EXPECT_NE(std::find(kinds.begin(), kinds.end(), kind), kinds.end()) << id << ": " << kind;
            ASSERT_TRUE(c.contains("covers")) << id << ": " << c.value("name", kind);
            EXPECT_FALSE(c.value("claim", std::string()).empty()) << id << ": " << c.value("name", kind);
            for (const auto& k : c.at("covers")) covered.insert(k.get<std::string>());
        }
    for (const auto& k : kConstructs) EXPECT_TRUE(covered.count(k)) << "uncovered construct " << k;
    for (const auto& k : covered)
        EXPECT_NE(std::find(kConstructs.begin(), kConstructs.end(), k), kConstructs.end()) << "unlisted " << k;
}

TEST(Registry, CheckNamesAreUniqueWithinAScenario) {
    for (const auto& id : registry().ids()) {
        std::set<std::string> names;
        for (const auto& c : registry().get(id).checks())
            EXPECT_TRUE(names.insert(c.at("name").get<std::string>()).second) << id;
    }
}

TEST(Registry, RejectsMalformedManifests) {
    Json bad = registry().get("A2").manifest();
    bad["maps"]["lyness"]["word"] = Json::array({3});
    EXPECT_THROW(Scenario::from_json(bad), Error);
    Json unknown = registry().get("A2").manifest();
    unknown["defaults"]["zz"] = 1;
    EXPECT_THROW(Scenario::from_json(unknown), Error);
    EXPECT_THROW(registry().get("A2").resolve({{"zz", 1}}), Error);
}

TEST(Invariants, FormAndIntegralChecksPassEverywhere) {
    for (const auto& id : registry().ids()) {
        ScenarioReport r = run_scenario(registry(), id, only({"form", "integral"}));
        for (const auto& c : r.checks) EXPECT_NE(c.status, CheckStatus::fail) << id << "/" << c.name << ": " << c.detail;
    }
}

TEST(Invariants, PeriodsHoldAtAFreshRandomSeed) {
    std::mt19937 rng(20261014);
    std::uniform_int_distribution<long> num(1, 40), den(1, 9);
    int tested = 0;
    for (const auto& id : registry().ids()) {
        const Scenario& sc = registry().get(id);
        for (const auto& c : sc.checks()) {
            if (c.at("check") != "period" || c.contains("projection")) continue;
            const ScenarioMap& m = sc.map(c.value("map", std::string()));
            NamedBindings named = sc.defaults();
            const Json bindings = c.value("bindings", Json::object());
            for (const auto& [k, v] : bindings.items()) named[k] = rational_from_json(v);
            int period = c.at("expected").get<int>();
            std::vector<Rational> seed;
            for (std::size_t i = 0; i < m.seed().size(); ++i) seed.push_back(make_rational(num(rng), den(rng)));
            OrbitRecord o = m.orbit(seed, period, sc.to_point(named));
            ASSERT_FALSE(o.singular) << id;
            EXPECT_EQ(o.points.back(), o.points.front()) << id << "/" << c.at("name");
            for (int t = 1; t < period; ++t) EXPECT_NE(o.points[t], o.points.front()) << id << " returns early at " << t;
            ++tested;
        }
    }
    EXPECT_GE(tested, 4);
}

TEST(Runner, ReportsAreDeterministic) {
    for (const std::string id : {"A2", "A3-reduced", "sg-2-2"}) {
        std::string a = run_scenario(registry(), id).to_json().dump();
        std::string b = run_scenario(registry(), id).to_json().dump();
        EXPECT_EQ(a, b) << id;
    }
}

TEST(Runner, OnlyFiltersByNameOrKind) {
    ScenarioReport r = run_scenario(registry(), "A2", only({"period-5", "integral"}));
    ASSERT_EQ(r.checks.size(), 2u);
    EXPECT_EQ(r.checks[0].name, "integral");
    EXPECT_EQ(r.checks[1].name, "period-5");
    EXPECT_TRUE(r.passed());
    Json j = r.to_json();
    EXPECT_EQ(j["summary"]["pass"], 2);
    EXPECT_EQ(j["parameters"]["a"], "1");
}

TEST(Runner, OverridesReachTheChecks) {
    // With c != e the first ansatz is unsolvable, as the manifest predicts, and
    // the constancy check that needs c = e is skipped.
    ScenarioReport r = run_scenario(registry(), "A3-reduced",
                                    only({"K1-ansatz", "K1-constancy"}, {{"c", 1}, {"d", 1}, {"e", 2}}));
    EXPECT_EQ(find_check(r, "K1-ansatz").status, CheckStatus::pass);
    EXPECT_NE(find_check(r, "K1-ansatz").detail.find("unsolvable"), std::string::npos);
    EXPECT_EQ(find_check(r, "K1-constancy").status, CheckStatus::skip);
    EXPECT_TRUE(r.passed());
    EXPECT_EQ(r.parameters.at("e"), 2);
}

TEST(Runner, A4ReportCarriesTheRequestedOrbit) {
    RunOptions o = only({"I2-constancy"}, {{"a1", 2}, {"a4", 3}});
    o.steps = 11;
    ScenarioReport r = run_scenario(registry(), "A4", o);
    EXPECT_TRUE(r.passed());
    EXPECT_EQ(r.orbit["points"].size(), 12u);
    EXPECT_EQ(r.orbit["factorizations"].size(), 12u);
}

TEST(Runner, BadSeedIsAnError) {
    RunOptions o;
    o.seed = std::vector<Rational>{1, 2, 3};
    EXPECT_THROW(run_scenario(registry(), "A2", o), Error);
}

TEST(TrivialDof, RatiosInvertAtEveryStep) {
    const Scenario& sc = registry().get("sg-2-2");
    const ScenarioMap& m = sc.map("phi");
    OrbitRecord o = m.orbit({2, 1, 1, 1}, 6, sc.to_point(sc.defaults()));
    ASSERT_FALSE(o.singular);
    EXPECT_TRUE(trivial_dof_check(o));
    for (std::size_t n = 0; n < o.points.size(); ++n)
        EXPECT_EQ(o.points[n][0] / o.points[n][2], n % 2 == 0 ? Rational(2) : make_rational(1, 2)) << n;
    EXPECT_TRUE(trivial_dof_check(m.symbolic(), m.coords()));
    OrbitRecord broken{{{2, 1, 1, 1}, {2, 1, 1, 1}}, std::nullopt};
    EXPECT_FALSE(trivial_dof_check(broken));
}

TEST(Patterns, LibraryFollowsThePadicCheck) {
    auto lib = pattern_library(registry().get("A4"));
    ASSERT_TRUE(lib.has_value());
    EXPECT_FALSE(lib->empty());
    EXPECT_FALSE(pattern_library(registry().get("A2")).has_value());
}
