#include "defmut/dynamics.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace defmut;

namespace {

const ExchangeMatrix kRank2 = ExchangeMatrix::square({{0, 1}, {-1, 0}});
const ExchangeMatrix kA3 = ExchangeMatrix::square({{0, 1, 0}, {-1, 0, 1}, {0, -1, 0}});

// Parameters a, b live at alphabet indices 2, 3 after the coordinates 0, 1.
constexpr int kA = 2, kB = 3;

ClusterMap lyness() {
    GSpec g = GSpec::affine(RatFunc::variable(kA), RatFunc::variable(kB));
    return ClusterMap(kRank2, MutationWord{{1}, Permutation({2, 1})}, {{1, g}, {2, g}});
}

Rational random_rational(std::mt19937& rng) {
    std::uniform_int_distribution<long> n(1, 19), d(1, 7);
    return make_rational(n(rng), d(rng));
}

}  // namespace

TEST(GSpec, AffineExchangeIsLinearInTheMonomials) {
    GSpec g = GSpec::affine(RatFunc::variable(kA), RatFunc::variable(kB));
    Bindings b{{kA, 2}, {kB, 5}};
    EXPECT_EQ(g.exchange(Rational(3), Rational(7), b), Rational(2 * 3 + 5 * 7));
    EXPECT_TRUE(g.is_homogeneous());
    EXPECT_EQ(GSpec().exchange(Rational(3), Rational(7), {}), Rational(10));
}

TEST(GSpec, MoebiusMatchesItsDefiningFormula) {
    GSpec g = GSpec::moebius(RatFunc(2), RatFunc(3), RatFunc(5));
    Rational p = 3, m = 7, t = m / p;
    EXPECT_EQ(g.exchange(p, m, {}), p * (2 * t + 5) / (3 * t + 2));
    GSpec gx = GSpec::moebius_x(RatFunc(2), RatFunc(3), RatFunc(5));
    EXPECT_EQ(gx.exchange(p, m, {}), p * t * (2 + 5 * t) / (3 + 2 * t));
}

TEST(GSpec, CustomAndRawRulesParse) {
    Alphabet a{{"x1", "x2"}, {"c"}};
    GSpec undeformed = GSpec::parse_custom(a, "1 + x");
    EXPECT_EQ(undeformed.exchange(Rational(3), Rational(7), {}), Rational(10));
    GSpec g = GSpec::parse_custom(a, "c*x^2 + 1");
    EXPECT_EQ(g.exchange(Rational(2), Rational(4), {{a.index("c"), 3}}), Rational(2 * (3 * 4 + 1)));
    GSpec f = GSpec::parse_raw_f(a, "P + M^2");
    EXPECT_EQ(f.exchange(Rational(2), Rational(3), {}), Rational(11));
    EXPECT_FALSE(f.is_homogeneous());
    EXPECT_THROW(GSpec::parse_custom(a, "x + y"), Error);
}

TEST(Seed, UndeformedMutationIsAnInvolution) {
    std::mt19937 rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        Seed<Rational> s{kA3, {random_rational(rng), random_rational(rng), random_rational(rng)}};
        for (int k = 1; k <= 3; ++k) {
            auto twice = mutate_seed(mutate_seed(s, k, GSpec()), k, GSpec());
            EXPECT_EQ(twice.matrix, s.matrix);
            EXPECT_EQ(twice.cluster, s.cluster);
        }
    }
}

TEST(Seed, AffineDoubleMutationRescalesByTheSwappedRule) {
    // After mu_k the signs of row k flip, so M+ and M- trade places:
    // x_k'' = (a M- + b M+) x_k / (a M+ + b M-).
    Seed<Rational> s{kA3, {2, 3, 5}};
    GSpec g = GSpec::affine(RatFunc(2), RatFunc(7));
    auto once = mutate_seed(s, 2, g);
    auto twice = mutate_seed(once, 2, g);
    Rational plus = 5, minus = 2;  // row 2 of kA3 is (-1, 0, 1)
    EXPECT_EQ(once.cluster[1], (2 * plus + 7 * minus) / 3);
    EXPECT_EQ(twice.cluster[1], (2 * minus + 7 * plus) * 3 / (2 * plus + 7 * minus));
}

TEST(Seed, FrozenRowsEnterTheExchangeMonomials) {
    ExchangeMatrix b(2, 1, {{0, 1}, {-1, 0}, {2, -1}});
    std::vector<Rational> x{2, 3, 5};
    auto [plus1, minus1] = exchange_monomials(b, x, 1);
    EXPECT_EQ(plus1, Rational(3));
    EXPECT_EQ(minus1, Rational(25));
    auto [plus2, minus2] = exchange_monomials(b, x, 2);
    EXPECT_EQ(plus2, Rational(5));
    EXPECT_EQ(minus2, Rational(2));
}

TEST(Seed, ZeroVariableIsSingular) {
    Seed<Rational> s{kRank2, {0, 1}};
    try {
        mutate_seed(s, 1, GSpec());
        FAIL() << "expected SingularError";
    } catch (const SingularError& e) {
        EXPECT_EQ(e.node(), 1);
    }
}

TEST(ClusterMap, RejectsWordsThatMoveTheMatrix) {
    EXPECT_THROW(ClusterMap(kRank2, MutationWord{{1}, std::nullopt}), Error);
    EXPECT_NO_THROW(ClusterMap(kRank2, MutationWord{{1}, std::nullopt}, {}, false));
    EXPECT_NO_THROW(ClusterMap(kA3, MutationWord{{1, 2, 3}, std::nullopt}));
}

TEST(ClusterMap, LynessMapMatchesTheRecurrence) {
    std::mt19937 rng(9);
    ClusterMap m = lyness();
    for (int trial = 0; trial < 10; ++trial) {
        Rational a = random_rational(rng), b = random_rational(rng);
        std::vector<Rational> x{random_rational(rng), random_rational(rng)};
        Bindings bind{{kA, a}, {kB, b}};
        Rational u = x[0], v = x[1];
        for (int n = 0; n < 6; ++n) {
            x = apply_map(m, x, bind);
            Rational w = (a * v + b) / u;
            u = v;
            v = w;
            ASSERT_EQ(x, (std::vector<Rational>{u, v}));
        }
    }
}

TEST(ClusterMap, SymbolicImagesAgreeWithNumericIteration) {
    std::mt19937 rng(10);
    ClusterMap m = lyness();
    auto images = symbolic_images(m, {RatFunc::variable(0), RatFunc::variable(1)});
    for (int trial = 0; trial < 10; ++trial) {
        Point p{{0, random_rational(rng)}, {1, random_rational(rng)}, {kA, random_rational(rng)},
                {kB, random_rational(rng)}};
        auto num = apply_map(m, std::vector<Rational>{p[0], p[1]}, p);
        EXPECT_EQ(evaluate(images[0], p), num[0]);
        EXPECT_EQ(evaluate(images[1], p), num[1]);
    }
}

TEST(ClusterMap, RepeatedWordComposes) {
    ClusterMap m = lyness();
    ClusterMap m5 = m.repeated(5);
    Bindings bind{{kA, 1}, {kB, 1}};
    std::vector<Rational> x{make_rational(3, 2), 7};
    EXPECT_EQ(apply_map(m5, x, bind), x);
}

TEST(Orbit, LynessPeriodAndSingularStop) {
    ClusterMap m = lyness();
    OrbitRecord o = iterate_orbit(m, {2, 3}, 12, {{kA, 1}, {kB, 1}});
    ASSERT_TRUE(o.period.has_value());
    EXPECT_EQ(*o.period, 5);
    EXPECT_EQ(o.steps(), 12);
    OrbitRecord deformed = iterate_orbit(m, {2, 3}, 12, {{kA, 2}, {kB, 3}});
    EXPECT_FALSE(deformed.period.has_value());
    OrbitRecord bad = iterate_orbit(m, {0, 1}, 5, {{kA, 1}, {kB, 1}});
    EXPECT_TRUE(bad.singular);
    EXPECT_EQ(bad.steps(), 0);
    EXPECT_FALSE(bad.singular_message.empty());
}

TEST(Orbit, ShiftSequenceReadsOffTheRecurrence) {
    OrbitRecord o = iterate_orbit(lyness(), {1, 1}, 4, {{kA, 1}, {kB, 1}});
    EXPECT_EQ(shift_sequence(o, 2), (std::vector<Rational>{1, 1, 2, 3, 2, 1}));
    OrbitRecord swapped{{{1, 2}, {3, 4}}, std::nullopt};
    EXPECT_THROW(shift_sequence(swapped, 2), Error);
}

TEST(RationalMap, SequentialUpdatesSeeNewValues) {
    RatFunc x = RatFunc::variable(0), y = RatFunc::variable(1);
    RationalMap seq({0, 1}, {{0, y}, {1, x}});
    RationalMap sim = RationalMap::simultaneous({0, 1}, {y, x});
    EXPECT_EQ(seq.apply({2, 5}), (std::vector<Rational>{5, 5}));
    EXPECT_EQ(sim.apply({2, 5}), (std::vector<Rational>{5, 2}));
    EXPECT_EQ(seq.symbolic(), (std::vector<RatFunc>{y, y}));
    EXPECT_EQ(sim.symbolic(), (std::vector<RatFunc>{y, x}));
    auto twice = RationalMap::compose({0, 1}, sim.symbolic(), sim.symbolic());
    EXPECT_EQ(twice, (std::vector<RatFunc>{x, y}));
    OrbitRecord o = iterate_orbit(sim, {2, 5}, 4);
    ASSERT_TRUE(o.period.has_value());
    EXPECT_EQ(*o.period, 2);
}

TEST(MonomialProjection, AppliesExponentRows) {
    MonomialProjection p({{0, 1, 0}, {-1, 0, 1}});
    EXPECT_EQ(p.apply(std::vector<Rational>{2, 3, 5}), (std::vector<Rational>{3, make_rational(5, 2)}));
    EXPECT_TRUE(p.rows_in_image(kA3));
    EXPECT_FALSE(MonomialProjection({{1, 1, 1}}).rows_in_image(kA3));
    OrbitRecord o{{{2, 3, 5}, {1, 1, 1}}, std::nullopt};
    OrbitRecord q = project_orbit(p, o);
    EXPECT_EQ(q.points[1], (std::vector<Rational>{1, 1}));
}

TEST(QuadRelation, DetectsTheLatticeRelation) {
    // x_n = n satisfies n (n + 4) - (n + 1)(n + 3) = -3.
    std::vector<Rational> seq;
    for (int n = 1; n <= 10; ++n) seq.emplace_back(n);
    EXPECT_TRUE(check_quad_relation(seq, 1, 0, -3));
    EXPECT_FALSE(check_quad_relation(seq, 1, 1, -3));
}
