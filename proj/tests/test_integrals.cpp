#include "defmut/alphabet.hpp"
#include "defmut/integrals.hpp"

#include <gtest/gtest.h>

using namespace defmut;

namespace {

struct Lyness {
    Alphabet a{{"x1", "x2"}, {"a", "b"}};
    std::vector<int> coords{0, 1};
    std::vector<RatFunc> phi{a.parse("x2"), a.parse("(a*x2+b)/x1")};
    // Rescaling x = a X reduces x' x = a y + b to the classical a = 1 case.
    RatFunc k = a.parse("(x1+a)*(x2+a)*(a*x1+a*x2+b)/(x1*x2)");

    std::vector<RatFunc> at(long av, long bv) const {
        Assignment s{{a.index("a"), RatFunc(av)}, {a.index("b"), RatFunc(bv)}};
        return {substitute(phi[0], s), substitute(phi[1], s)};
    }
    Monomial mono(const std::string& text) const { return a.parse(text).num().terms()[0].mono; }
};

}  // namespace

TEST(Integral, LynessInvariantHoldsSymbolically) {
    Lyness l;
    EXPECT_TRUE(verify_integral(l.phi, l.coords, l.k));
    EXPECT_TRUE(integral_defect(l.phi, l.coords, l.k).is_zero());
    EXPECT_FALSE(verify_integral(l.phi, l.coords, l.a.parse("x1+x2")));
    EXPECT_FALSE(integral_defect(l.phi, l.coords, l.a.parse("x1*x2")).is_zero());
}

TEST(Integral, CyclicConstructionsOfAPeriodicMap) {
    Lyness l;
    auto phi = l.at(1, 1);
    RatFunc sum = periodic_integral(phi, l.coords, l.a.parse("x1"), 5, CyclicKind::sum);
    EXPECT_TRUE(verify_integral(phi, l.coords, sum));
    EXPECT_EQ(sum, l.a.parse("x1 + x2 + (x2+1)/x1 + (x1+1)/x2 + (x1+x2+1)/(x1*x2)"));
    EXPECT_THROW(periodic_integral(phi, l.coords, l.a.parse("x1"), 4, CyclicKind::sum), Error);
    EXPECT_THROW(periodic_integral(l.at(2, 3), l.coords, l.a.parse("x1"), 5, CyclicKind::product), Error);
}

TEST(Ansatz, RecoversTheLynessInvariantAtNumericParameters) {
    Lyness l;
    MonomialAnsatz an;
    for (const char* m : {"x1^2*x2", "x1*x2^2", "x1^2", "x2^2", "x1*x2", "x1", "x2", "1"})
        an.support.push_back(l.mono(m));
    an.den_fixed = l.a.parse("x1*x2").num();
    an.free_constant = true;
    AnsatzSolution s = search_deformed_integral(l.at(1, 2), l.coords, an);
    ASSERT_TRUE(s.solvable);
    EXPECT_EQ(s.coefficients[0], 1);
    EXPECT_TRUE(verify_integral(l.at(1, 2), l.coords, s.integral));
}

TEST(Ansatz, TooSmallSupportIsUnsolvable) {
    Lyness l;
    MonomialAnsatz an;
    for (const char* m : {"x1", "x2"}) an.support.push_back(l.mono(m));
    EXPECT_FALSE(search_deformed_integral(l.at(1, 1), l.coords, an).solvable);
}

TEST(Ansatz, DeltaGridPicksTheMatchingDenominator) {
    // K = (x1 + x2) / (x1 x2 + delta) is invariant under the swap exactly for every delta;
    // under (x1, x2) -> (x2, 3 x1) no delta works.
    Alphabet a{{"x1", "x2"}, {}};
    MonomialAnsatz an;
    an.support = {a.parse("x1").num().terms()[0].mono, a.parse("x2").num().terms()[0].mono};
    an.den_fixed = a.parse("x1*x2").num();
    an.den_scaled = Poly(1);
    an.delta_grid = {0, 1, 2};
    std::vector<RatFunc> swap{a.parse("x2"), a.parse("x1")};
    AnsatzSolution s = search_deformed_integral(swap, {0, 1}, an);
    ASSERT_TRUE(s.solvable);
    EXPECT_EQ(s.solvable_deltas.size(), 3u);
    std::vector<RatFunc> stretch{a.parse("x2"), a.parse("3*x1")};
    EXPECT_FALSE(search_deformed_integral(stretch, {0, 1}, an).solvable);
}

TEST(Independence, JacobianRank) {
    Alphabet a{{"x", "y"}, {}};
    EXPECT_TRUE(functional_independence(a.parse("x+y"), a.parse("x*y"), {0, 1}));
    EXPECT_FALSE(functional_independence(a.parse("x+y"), a.parse("(x+y)^2+3"), {0, 1}));
}
