#include "defmut/alphabet.hpp"
#include "defmut/geometry.hpp"

#include <gtest/gtest.h>

using namespace defmut;

namespace {

const ExchangeMatrix kRank2 = ExchangeMatrix::square({{0, 1}, {-1, 0}});
const ExchangeMatrix kA4 = ExchangeMatrix::square({{0, 1, 0, 0}, {-1, 0, 1, 0}, {0, -1, 0, 1}, {0, 0, -1, 0}});

std::vector<RatFunc> parse_all(const Alphabet& a, const std::vector<std::string>& exprs) {
    std::vector<RatFunc> out;
    for (const auto& e : exprs) out.push_back(a.parse(e));
    return out;
}

}  // namespace

TEST(Form, LynessMapPreservesThePlaneForm) {
    Alphabet a{{"x1", "x2"}, {"a", "b"}};
    auto phi = parse_all(a, {"x2", "(a*x2+b)/x1"});
    EXPECT_TRUE(pullback_form_check(phi, {0, 1}, LogCanonicalForm::from_matrix(kRank2)));
}

TEST(Form, SquaredDenominatorDoublesTheForm) {
    Alphabet a{{"x1", "x2"}, {}};
    auto phi = parse_all(a, {"x2", "(x2+x2^2+1)/x1^2"});
    EXPECT_FALSE(pullback_form_check(phi, {0, 1}, LogCanonicalForm::from_matrix(kRank2)));
}

TEST(Form, FormScalesUnderMonomialMaps) {
    // (x, y) -> (x y, y) preserves d log x ^ d log y; (x, y) -> (x^2, y) doubles it.
    Alphabet a{{"x", "y"}, {}};
    LogCanonicalForm omega = LogCanonicalForm::from_matrix(kRank2);
    EXPECT_TRUE(pullback_form_check(parse_all(a, {"x*y", "y"}), {0, 1}, omega));
    EXPECT_FALSE(pullback_form_check(parse_all(a, {"x^2", "y"}), {0, 1}, omega));
    QMatrix doubled{{0, 2}, {-2, 0}};
    EXPECT_TRUE(pullback_form_check(parse_all(a, {"x^2", "y"}), {0, 1}, omega, LogCanonicalForm(doubled)));
}

TEST(Form, ProjectionPullbackIsIntegerMatrixIdentity) {
    ZMatrix e{{1, 0}, {0, 2}};
    LogCanonicalForm hat(QMatrix{{0, 1}, {-1, 0}});
    EXPECT_TRUE(pullback_projection_check(e, hat, LogCanonicalForm(QMatrix{{0, 2}, {-2, 0}})));
    EXPECT_FALSE(pullback_projection_check(e, hat, LogCanonicalForm(QMatrix{{0, 1}, {-1, 0}})));
    EXPECT_EQ(pullback_coefficients(e, hat), (QMatrix{{0, 2}, {-2, 0}}));
}

TEST(Poisson, InverseOfA4IsTheBracket) {
    PoissonLogStructure p = invert_to_poisson(kA4);
    QMatrix b = to_rational(kA4.mutable_block_integer());
    QMatrix id{{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}};
    EXPECT_EQ(multiply(p.coefficients(), b), id);
    EXPECT_THROW(invert_to_poisson(ExchangeMatrix::square({{0, 1, -1}, {-1, 0, 1}, {1, -1, 0}})), Error);
}

TEST(Poisson, LogCanonicalBracketIsAntisymmetricAndJacobi) {
    PoissonLogStructure p = invert_to_poisson(kA4);
    std::vector<int> coords{0, 1, 2, 3};
    EXPECT_TRUE(jacobi_identity_holds(p, coords));
    Alphabet a{{"x1", "x2", "x3", "x4"}, {}};
    RatFunc f = a.parse("x1 + x2*x3"), g = a.parse("x4/x1");
    EXPECT_EQ(poisson_bracket(f, g, p, coords), -poisson_bracket(g, f, p, coords));
    RatFunc x1 = a.parse("x1"), x2 = a.parse("x2");
    EXPECT_EQ(poisson_bracket(x1, x2, p, coords), RatFunc(p.coefficients()[0][1]) * x1 * x2);
}

TEST(Commute, IteratesOfOneMapCommute) {
    Alphabet a{{"x1", "x2"}, {}};
    auto phi = parse_all(a, {"x2", "(x2+1)/x1"});
    auto phi2 = RationalMap::compose({0, 1}, phi, phi);
    EXPECT_TRUE(maps_commute({0, 1}, phi, phi2));
    EXPECT_FALSE(maps_commute({0, 1}, phi, parse_all(a, {"x1+1", "x2"})));
}
