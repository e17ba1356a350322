#include "defmut/quiver.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

using namespace defmut;

namespace {

// Direct entrywise rule, written independently of the library:
// b'_ij = -b_ij if k in {i, j}, else b_ij + (|b_ik| b_kj + b_ik |b_kj|) / 2.
std::vector<std::vector<long>> oracle_mutation(const std::vector<std::vector<long>>& b, int k) {
    auto out = b;
    int kk = k - 1;
    for (std::size_t i = 0; i < b.size(); ++i)
        for (std::size_t j = 0; j < b[i].size(); ++j) {
            if (static_cast<int>(i) == kk || static_cast<int>(j) == kk) {
                out[i][j] = -b[i][j];
                continue;
            }
            long bik = b[i][kk], bkj = b[kk][j];
            out[i][j] = b[i][j] + (std::abs(bik) * bkj + bik * std::abs(bkj)) / 2;
        }
    return out;
}

ExchangeMatrix random_skew(std::mt19937& rng, int n, int frozen) {
    std::uniform_int_distribution<long> e(-2, 2);
    std::vector<std::vector<long>> rows(n + frozen, std::vector<long>(n, 0));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            rows[i][j] = e(rng);
            rows[j][i] = -rows[i][j];
        }
    for (int f = n; f < n + frozen; ++f)
        for (int j = 0; j < n; ++j) rows[f][j] = e(rng);
    return ExchangeMatrix(n, frozen, rows);
}

const ExchangeMatrix kA3 = ExchangeMatrix::square({{0, 1, -1}, {-1, 0, 1}, {1, -1, 0}});

}  // namespace

TEST(ExchangeMatrix, RejectsMalformedInput) {
    EXPECT_THROW(ExchangeMatrix::square({{0, 1}, {1, 0}}), Error);
    EXPECT_THROW(ExchangeMatrix::square({{0, 1, 0}, {-1, 0}}), Error);
    EXPECT_THROW(ExchangeMatrix(2, 1, {{0, 1}, {-1, 0}}), Error);
    EXPECT_NO_THROW(ExchangeMatrix(2, 1, {{0, 1}, {-1, 0}, {3, -4}}));
}

TEST(Mutation, MatchesEntrywiseOracleIncludingFrozenRows) {
    std::mt19937 rng(1);
    for (int trial = 0; trial < 50; ++trial) {
        int n = 2 + trial % 4;
        ExchangeMatrix b = random_skew(rng, n, trial % 3);
        int k = 1 + trial % n;
        EXPECT_EQ(mutate_matrix(b, k).entries(), oracle_mutation(b.entries(), k));
    }
}

TEST(Mutation, IsAnInvolutionAndKeepsSkewSymmetry) {
    std::mt19937 rng(2);
    for (int trial = 0; trial < 50; ++trial) {
        int n = 2 + trial % 5;
        ExchangeMatrix b = random_skew(rng, n, trial % 2);
        for (int k = 1; k <= n; ++k) {
            ExchangeMatrix m = mutate_matrix(b, k);
            EXPECT_TRUE(m.is_skew_symmetric());
            EXPECT_EQ(mutate_matrix(m, k), b);
        }
    }
    EXPECT_THROW(mutate_matrix(kA3, 4), Error);
    EXPECT_THROW(mutate_matrix(kA3, 0), Error);
}

TEST(Mutation, RankTwoMatrixFlipsSign) {
    ExchangeMatrix b = ExchangeMatrix::square({{0, 1}, {-1, 0}});
    EXPECT_EQ(mutate_matrix(b, 1), ExchangeMatrix::square({{0, -1}, {1, 0}}));
}

TEST(Permutation, GroupOperations) {
    Permutation p({2, 3, 1});
    EXPECT_EQ(p(1), 2);
    EXPECT_EQ(p * p.inverse(), Permutation::identity(3));
    EXPECT_EQ((p * p * p), Permutation::identity(3));
    EXPECT_THROW(Permutation({1, 1, 2}), Error);
    EXPECT_THROW(Permutation({1, 4, 2}), Error);
}

TEST(Permutation, RelabelsEntries) {
    std::mt19937 rng(4);
    ExchangeMatrix b = random_skew(rng, 4, 1);
    Permutation rho({3, 1, 4, 2});
    ExchangeMatrix r = apply_permutation(b, rho);
    for (int i = 1; i <= 4; ++i)
        for (int j = 1; j <= 4; ++j) EXPECT_EQ(r.at(i - 1, j - 1), b.at(rho(i) - 1, rho(j) - 1));
    EXPECT_EQ(apply_permutation(r, rho.inverse()), b);
    auto found = find_permutation(b, r);
    ASSERT_TRUE(found.has_value());
    EXPECT_EQ(apply_permutation(b, *found), r);
}

TEST(MutationWord, RankTwoWordIsInvariantUpToSwap) {
    ExchangeMatrix b = ExchangeMatrix::square({{0, 1}, {-1, 0}});
    MutationWord w{{1}, Permutation({2, 1})};
    EXPECT_TRUE(check_word_invariance(b, w).invariant);
    EXPECT_FALSE(check_word_invariance(b, MutationWord{{1}, std::nullopt}).invariant);
}

TEST(MutationWord, A3PathWordIsInvariant) {
    ExchangeMatrix path = ExchangeMatrix::square({{0, 1, 0}, {-1, 0, 1}, {0, -1, 0}});
    EXPECT_TRUE(check_word_invariance(path, MutationWord{{1, 2, 3}, std::nullopt}).invariant);
    EXPECT_FALSE(check_word_invariance(kA3, MutationWord{{1, 2, 3}, std::nullopt}).invariant);
    EXPECT_THROW(MutationWord({{1, 5}, std::nullopt}).validate(3), Error);
    EXPECT_THROW(MutationWord({{1}, Permutation({2, 1})}).validate(3), Error);
}

TEST(MutationWord, ParseIndices) {
    EXPECT_EQ(parse_indices("1,5,2,6"), (std::vector<int>{1, 5, 2, 6}));
    EXPECT_EQ(parse_indices("1 5  2"), (std::vector<int>{1, 5, 2}));
    EXPECT_THROW(parse_indices("1,x"), Error);
}

TEST(KernelImage, A3BasesSpanTheExpectedLattices) {
    KernelImage ki = integer_kernel_image(kA3);
    ASSERT_EQ(ki.kernel.size(), 1u);
    EXPECT_EQ(ki.kernel[0], (ZVector{1, 1, 1}));
    EXPECT_TRUE(same_lattice(ki.image, {{1, 0, -1}, {0, 1, -1}}));
}

TEST(Dot, ExportsOneArrowPerPositiveEntry) {
    std::string dot = export_dot(kA3, {"x1", "x2", "x3"});
    EXPECT_NE(dot.find("digraph"), std::string::npos);
    EXPECT_NE(dot.find("label=\"x1\""), std::string::npos);
    EXPECT_EQ(std::count(dot.begin(), dot.end(), '>'), 3);
    std::string weighted = export_dot(ExchangeMatrix::square({{0, 2}, {-2, 0}}));
    EXPECT_NE(weighted.find("n0 -> n1 [label=\"2\"]"), std::string::npos);
}
