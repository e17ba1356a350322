#pragma once

// Prime factorization of exact orbits and p-adic singularity patterns.

#include "defmut/dynamics.hpp"

#include <map>
#include <string>
#include <vector>

namespace defmut {

/// Strong probable-prime test; deterministic below 3.3e24 (first 13 prime
/// witnesses), backed by GMP's test above that.
bool is_probable_prime(const Integer& n);

struct IntegerFactorization {
    std::map<Integer, int> primes;
    std::vector<Integer> composites;  // cofactors that resisted splitting
};

/// Pollard-Brent iterations allowed per integer, shared by every split attempt.
inline constexpr unsigned long kDefaultRhoBudget = 4000000;

/// |n| split by trial division to `trial_bound`, then Pollard-Brent on what is
/// left. Composites that outlast `rho_budget` are returned, not fatal.
IntegerFactorization factor_integer(const Integer& n, unsigned long trial_bound = 1000000,
                                    unsigned long rho_budget = kDefaultRhoBudget);

struct FactoredRational {
    int sign = 1;                      // zero only for the value zero
    std::map<Integer, int> factors;    // prime -> nonzero valuation
    Rational cofactor = 1;             // product of unfactored composites (num / den)

    bool complete() const { return cofactor == 1; }
    Rational value() const;
    int valuation(const Integer& p) const;
};

FactoredRational factor_rational(const Rational& q, unsigned long trial_bound = 1000000,
                                 unsigned long rho_budget = kDefaultRhoBudget);

/// facts[step][variable]. Distinct entries are factored on up to `jobs` threads.
std::vector<std::vector<FactoredRational>> factor_orbit(const OrbitRecord& o, unsigned long trial_bound = 1000000,
                                                        unsigned jobs = 1, unsigned long rho_budget = kDefaultRhoBudget);

std::vector<int> valuation_series(const std::vector<std::vector<FactoredRational>>& facts, const Integer& p,
                                  std::size_t variable);

/// Valuations per tracked prime, as rows[p][variable][step].
struct ValuationTable {
    std::vector<std::string> variables;
    int steps = 0;  // number of orbit entries per variable
    std::map<Integer, std::vector<std::vector<int>>> rows;
    std::vector<std::pair<int, std::size_t>> incomplete;  // (step, variable) with composite cofactors

    int at(const Integer& p, std::size_t variable, int step) const;
};

/// Tracks every prime that occurs unless `primes` is non-empty.
ValuationTable valuation_table(const std::vector<std::vector<FactoredRational>>& facts,
                               std::vector<std::string> variables, const std::vector<Integer>& primes = {});

/// An integer valuation template per variable over a common window. Leading
/// and trailing zero columns are stripped on construction.
class SingularityPattern {
public:
    struct TauLink {
        std::string seq;
        int offset = 0;  // an instance starting at step s means p^m | seq[s + offset]
    };

    SingularityPattern(std::string name, const std::vector<std::string>& variables,
                       const std::map<std::string, std::vector<int>>& rows, std::optional<TauLink> link = {});

    const std::string& name() const { return name_; }
    int width() const { return width_; }
    const std::vector<std::vector<int>>& rows() const { return rows_; }  // [variable][offset]
    int at(std::size_t variable, int offset) const { return rows_[variable][static_cast<std::size_t>(offset)]; }
    const std::optional<TauLink>& link() const { return link_; }

private:
    std::string name_;
    std::vector<std::vector<int>> rows_;
    int width_ = 0;
    std::optional<TauLink> link_;
};

struct PatternInstance {
    std::size_t pattern = 0;  // index into the library
    int start = 0;            // orbit step aligned with the first window column
    int scale = 1;            // m
    bool clipped = false;     // the window runs past the orbit ends

    friend bool operator==(const PatternInstance&, const PatternInstance&) = default;
    friend auto operator<=>(const PatternInstance&, const PatternInstance&) = default;
};

struct PrimeClassification {
    Integer prime;
    std::string classification;  // pattern name, "mixed" or "unclassified"
    std::string primary;         // pattern of the earliest instance, empty if unclassified
    std::vector<PatternInstance> instances;
};

/// Distinct primes sharing an identical instance, such as a tau value
/// divisible by their product.
struct CompositeClass {
    std::vector<Integer> primes;
    PatternInstance instance;
};

struct PatternReport {
    std::vector<PrimeClassification> primes;
    std::vector<CompositeClass> composites;
    std::map<std::string, int> counts;  // primes per classification

    const PrimeClassification* find(const Integer& p) const;
};

PatternReport detect_patterns(const ValuationTable& table, const std::vector<SingularityPattern>& library);

}  // namespace defmut
