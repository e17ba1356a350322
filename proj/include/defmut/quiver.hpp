#pragma once

// Exchange matrices with frozen rows, mutation, permutation actions and
// lattice data. Node indices in the public API are 1-based; at() is 0-based.

#include "defmut/linalg.hpp"

#include <optional>
#include <string>
#include <vector>

namespace defmut {

class ExchangeMatrix {
  public:
    ExchangeMatrix() = default;
    /// rows has n_mutable + n_frozen rows of length n_mutable; the top block
    /// must be skew-symmetric.
    ExchangeMatrix(int n_mutable, int n_frozen, std::vector<std::vector<long>> rows);
    static ExchangeMatrix square(std::vector<std::vector<long>> rows);

    int n_mutable() const { return n_mutable_; }
    int n_frozen() const { return n_frozen_; }
    int rows() const { return n_mutable_ + n_frozen_; }
    long at(int i, int j) const { return rows_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]; }
    const std::vector<std::vector<long>>& entries() const { return rows_; }

    ExchangeMatrix mutable_block() const;
    ZMatrix mutable_block_integer() const;
    bool is_skew_symmetric() const;

    friend bool operator==(const ExchangeMatrix& a, const ExchangeMatrix& b) {
        return a.n_mutable_ == b.n_mutable_ && a.n_frozen_ == b.n_frozen_ && a.rows_ == b.rows_;
    }

  private:
    int n_mutable_ = 0;
    int n_frozen_ = 0;
    std::vector<std::vector<long>> rows_;
};

/// A bijection of {1..n}; images[i-1] is the image of i.
class Permutation {
  public:
    Permutation() = default;
    explicit Permutation(std::vector<int> images);
    static Permutation identity(int n);

    int size() const { return static_cast<int>(images_.size()); }
    int operator()(int i) const { return images_.at(static_cast<std::size_t>(i - 1)); }
    const std::vector<int>& images() const { return images_; }
    Permutation inverse() const;
    bool is_identity() const;
    /// (a * b)(i) = a(b(i)).
    friend Permutation operator*(const Permutation& a, const Permutation& b);
    friend bool operator==(const Permutation& a, const Permutation& b) = default;

  private:
    std::vector<int> images_;
};

struct MutationWord {
    std::vector<int> indices;  // application order, 1-based
    std::optional<Permutation> permutation;

    /// Validates node indices and permutation size against n_mutable.
    void validate(int n_mutable) const;
};

/// Parses "1,5,2,6" or "1 5 2 6" into indices.
std::vector<int> parse_indices(const std::string& text);

ExchangeMatrix mutate_matrix(const ExchangeMatrix& b, int k);
/// rho(B)_ij = B_{rho(i) rho(j)} on the mutable block; frozen rows keep their
/// position and have their columns relabeled.
ExchangeMatrix apply_permutation(const ExchangeMatrix& b, const Permutation& rho);

/// Mutations in order, then relabeling by the inverse of the trailing
/// permutation; a word is invariant when this returns the input.
ExchangeMatrix apply_word(const ExchangeMatrix& b, const MutationWord& w);

struct WordInvariance {
    bool invariant = false;
    ExchangeMatrix final;
};
WordInvariance check_word_invariance(const ExchangeMatrix& b, const MutationWord& w);

/// Some rho with apply_permutation(b, rho) == target, by search over S_n (n <= 8).
std::optional<Permutation> find_permutation(const ExchangeMatrix& b, const ExchangeMatrix& target);

struct KernelImage {
    ZMatrix kernel;  // primitive integer vectors spanning ker B over Q
    ZMatrix image;   // Hermite basis of the column lattice of B
};
KernelImage integer_kernel_image(const ExchangeMatrix& b);

std::string export_dot(const ExchangeMatrix& b, const std::vector<std::string>& labels = {});

}  // namespace defmut
