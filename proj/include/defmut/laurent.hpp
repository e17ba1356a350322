#pragma once

// Shift-indexed bilinear tau-function systems, their exact and symbolic
// orbits, Laurent-property checks and cluster realizations.

#include "defmut/alphabet.hpp"
#include "defmut/dynamics.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace defmut {

/// seq_{n + shift}.
struct SeqFactor {
    std::string seq;
    int shift = 0;
};

struct BilinearTerm {
    RatFunc coeff;  // in the parameters
    std::vector<SeqFactor> factors;
};

/// lhs[0] * lhs[1] = sum of rhs terms. At step n exactly one lhs factor is
/// unknown; it is solved for.
struct BilinearEquation {
    SeqFactor lhs[2];
    std::vector<BilinearTerm> rhs;
};

class BilinearSystem {
  public:
    BilinearSystem() = default;
    /// window: for each sequence the consecutive indices given initially.
    BilinearSystem(std::vector<BilinearEquation> equations, std::map<std::string, std::pair<int, int>> window);

    const std::vector<BilinearEquation>& equations() const { return equations_; }
    /// Inclusive index range of each sequence's initial values.
    const std::map<std::string, std::pair<int, int>>& window() const { return window_; }
    /// Sequence names with their initial indices, in a stable order.
    std::vector<std::pair<std::string, int>> initial_labels() const;

    /// Parses "s[n+2]*t[n-2] = d*s[n+1]*t[n-1] + c*s[n]*t[n]" with the
    /// coefficient written in the parameters of the alphabet.
    static BilinearEquation parse_equation(const Alphabet& params, const std::string& text);

  private:
    std::vector<BilinearEquation> equations_;
    std::map<std::string, std::pair<int, int>> window_;
};

template <class F>
struct TauOrbit {
    std::map<std::string, std::map<int, F>> values;

    const F& at(const std::string& seq, int index) const {
        auto s = values.find(seq);
        if (s == values.end()) throw Error("tau orbit: unknown sequence '" + seq + "'");
        auto v = s->second.find(index);
        if (v == s->second.end())
            throw Error("tau orbit: " + seq + "[" + std::to_string(index) + "] has not been computed");
        return v->second;
    }
    bool has(const std::string& seq, int index) const {
        auto s = values.find(seq);
        return s != values.end() && s->second.count(index) > 0;
    }
};

class BilinearSingular : public Error {
  public:
    using Error::Error;
};

/// Exact iteration for steps n = 0 .. steps-1. Init holds every window value.
TauOrbit<Rational> iterate_bilinear(const BilinearSystem& sys, const TauOrbit<Rational>& init, int steps,
                                    const Bindings& params);

/// All-equal initial data (typically all ones).
TauOrbit<Rational> constant_window(const BilinearSystem& sys, const Rational& value);

struct LaurentEntry {
    std::string seq;
    int index = 0;
    int step = 0;
    bool laurent = false;
    bool positive_terms = false;    // every integer coefficient > 0
    bool positive_samples = false;  // positive after specializing parameters
    std::size_t terms = 0;
};

struct LaurentReport {
    std::vector<LaurentEntry> entries;
    int depth_reached = 0;
    bool budget_exceeded = false;
    bool all_laurent() const;
    bool all_positive() const;
    /// First step at which a non-Laurent value appears, or -1.
    int first_failure_step() const;
};

struct LaurentOptions {
    std::size_t term_budget = 100000;
    int positivity_samples = 2;
    unsigned sample_seed = 7;
};

/// Iterates symbolically with the initial window as fresh variables and
/// parameters left free. The alphabet must declare the parameters; window
/// variables are appended to a copy of it.
LaurentReport laurent_property_check(const BilinearSystem& sys, const Alphabet& params, int depth,
                                     const LaurentOptions& options = {});

/// Symbolic orbit (for tests): the alphabet gets the window variables added.
TauOrbit<RatFunc> iterate_bilinear_symbolic(const BilinearSystem& sys, Alphabet& alphabet, int depth,
                                            std::size_t term_budget = 100000, int* depth_reached = nullptr);

/// A cluster coordinate as a monomial in shifted tau values.
struct TauMonomial {
    std::string name;
    std::vector<std::pair<SeqFactor, int>> factors;  // factor and exponent
};

struct TauProjection {
    std::vector<TauMonomial> components;
};

/// Points n = first .. last for which every needed value exists.
OrbitRecord tau_projection(const TauProjection& p, const TauOrbit<Rational>& orbit, int first, int last);

/// Node label inside an extended tau cluster.
struct TauLabel {
    std::string seq;
    int index = 0;
};

struct ClusterSequenceReport {
    struct Block {
        bool invariant = false;
        std::vector<std::string> mismatches;
    };
    std::vector<Block> blocks;
    bool ok() const;
};

/// Applies the word `blocks` times with undeformed rules from the seed whose
/// mutable nodes carry `labels`; after block b node i must equal
/// seq_i[index_i + b * shift] of the reference orbit, and the matrix must be
/// unchanged.
ClusterSequenceReport tau_cluster_sequence_check(const ExchangeMatrix& b, const MutationWord& word,
                                                 const std::vector<Rational>& seed, const std::vector<TauLabel>& labels,
                                                 int shift, int blocks, const TauOrbit<Rational>& reference);

}  // namespace defmut
