#pragma once

// Deformed mutations, cluster maps and orbits over exact rationals
// (numeric runs) or rational functions (symbolic runs).

#include "defmut/alphabet.hpp"
#include "defmut/quiver.hpp"
#include "defmut/ratfunc.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace defmut {

/// Numeric values for parameters (and possibly other variables).
using Bindings = Point;

class SingularError : public Error {
  public:
    SingularError(const std::string& what, int node, int step = -1)
        : Error(what), node_(node), step_(step) {}
    int node() const { return node_; }
    int step() const { return step_; }

  private:
    int node_;
    int step_;
};

/// A rational function of one formal variable, coefficients in the parameters.
struct UnivariateRational {
    std::vector<RatFunc> num;  // num[i] multiplies x^i
    std::vector<RatFunc> den;
};

/// A rational function of the two formal variables P = M+ and M = M-.
struct BivariateRational {
    struct Term {
        RatFunc coeff;
        int p_exp = 0;
        int m_exp = 0;
    };
    std::vector<Term> num;
    std::vector<Term> den;
};

/// Exchange rule of one node: x_k' x_k = f(M+, M-).
class GSpec {
  public:
    enum class Kind { affine, moebius, moebius_x, custom, raw_f };

    /// Undeformed rule g(x) = 1 + x.
    GSpec() : coeffs_{RatFunc(1), RatFunc(1)} {}

    /// g(x) = b x + a, i.e. f = a M+ + b M-.
    static GSpec affine(RatFunc a, RatFunc b);
    /// g(x) = (a1 x + a3) / (a2 x + a1).
    static GSpec moebius(RatFunc a1, RatFunc a2, RatFunc a3);
    /// g(x) = x (a1 + a3 x) / (a2 + a1 x).
    static GSpec moebius_x(RatFunc a1, RatFunc a2, RatFunc a3);
    /// f = M+ g(M-/M+) for an arbitrary univariate g.
    static GSpec custom(UnivariateRational g);
    /// f given directly; generally breaks form preservation (negative controls).
    static GSpec raw_f(BivariateRational f);

    /// Parses g (custom) in the formal variable "x" or f (raw_f) in "P", "M";
    /// any other identifier must be a parameter of the alphabet.
    static GSpec parse_custom(const Alphabet& alphabet, const std::string& g_of_x);
    static GSpec parse_raw_f(const Alphabet& alphabet, const std::string& f_of_pm);

    Kind kind() const { return kind_; }
    const std::vector<RatFunc>& coefficients() const { return coeffs_; }
    const UnivariateRational& g() const { return g_; }
    const BivariateRational& f() const { return f_; }
    std::string kind_name() const;
    /// Degree-one homogeneity f(lP, lM) = l f(P, M), checked symbolically.
    bool is_homogeneous() const;

    /// Replaces bound parameters by their values.
    GSpec specialized(const Bindings& b) const;

    /// f(M+, M-) for symbolic or numeric values.
    RatFunc exchange(const RatFunc& plus, const RatFunc& minus, const Bindings& b) const;
    Rational exchange(const Rational& plus, const Rational& minus, const Bindings& b) const;

    std::vector<int> parameter_variables() const;

  private:
    Kind kind_ = Kind::affine;
    std::vector<RatFunc> coeffs_;
    UnivariateRational g_;
    BivariateRational f_;
};

template <class F>
struct Seed {
    ExchangeMatrix matrix;
    std::vector<F> cluster;  // n_mutable + n_frozen values
};

/// A word of mutations with per-node rules; construction checks that the word
/// (with its trailing permutation) leaves the matrix invariant.
class ClusterMap {
  public:
    ClusterMap(ExchangeMatrix b, MutationWord word, std::map<int, GSpec> rules = {}, bool require_invariance = true);

    const ExchangeMatrix& matrix() const { return b_; }
    const MutationWord& word() const { return word_; }
    const GSpec& rule(int node) const;
    const std::map<int, GSpec>& rules() const { return rules_; }

    /// The same word applied `times` times, as one word (for coherence checks).
    ClusterMap repeated(int times) const;

  private:
    ExchangeMatrix b_;
    MutationWord word_;
    std::map<int, GSpec> rules_;
    GSpec undeformed_;
};

namespace detail {

inline Rational value_exchange(const GSpec& g, const Rational& p, const Rational& m, const Bindings& b) {
    return g.exchange(p, m, b);
}
inline RatFunc value_exchange(const GSpec& g, const RatFunc& p, const RatFunc& m, const Bindings& b) {
    return g.exchange(p, m, b);
}
inline std::string describe(const Rational& q) { return to_string(q); }
std::string describe(const RatFunc& f);

template <class F>
F power(const F& x, long e) {
    if constexpr (std::is_same_v<F, Rational>) {
        return qpow(x, e);
    } else {
        return x.pow(e);
    }
}

}  // namespace detail

/// M+ and M- of node k (1-based); frozen rows enter through b_kf = -b_fk.
template <class F>
std::pair<F, F> exchange_monomials(const ExchangeMatrix& b, const std::vector<F>& x, int k) {
    F plus = 1;
    F minus = 1;
    int kk = k - 1;
    for (int i = 0; i < b.rows(); ++i) {
        if (i == kk) continue;
        long bki = i < b.n_mutable() ? b.at(kk, i) : -b.at(i, kk);
        if (bki > 0) plus *= detail::power(x[static_cast<std::size_t>(i)], bki);
        if (bki < 0) minus *= detail::power(x[static_cast<std::size_t>(i)], -bki);
    }
    return {plus, minus};
}

template <class F>
Seed<F> mutate_seed(const Seed<F>& s, int k, const GSpec& g, const Bindings& bindings = {}) {
    if (k < 1 || k > s.matrix.n_mutable())
        throw Error("mutate_seed: node " + std::to_string(k) + " is not mutable");
    if (static_cast<int>(s.cluster.size()) != s.matrix.rows()) throw Error("mutate_seed: cluster length mismatch");
    const F& xk = s.cluster[static_cast<std::size_t>(k - 1)];
    if (xk == 0) throw SingularError("singular mutation at node " + std::to_string(k) + ": x_k = 0", k);
    auto [plus, minus] = exchange_monomials(s.matrix, s.cluster, k);
    F f;
    try {
        f = detail::value_exchange(g, plus, minus, bindings);
    } catch (const SingularValue& e) {
        throw SingularError("singular exchange at node " + std::to_string(k) + " with M+ = " +
                                detail::describe(plus) + ", M- = " + detail::describe(minus) + ": " + e.what(),
                            k);
    }
    Seed<F> out{mutate_matrix(s.matrix, k), s.cluster};
    out.cluster[static_cast<std::size_t>(k - 1)] = f / xk;
    return out;
}

/// phi = rho^-1 mu_word: mutations in word order, then new[rho(i)] = old[i].
template <class F>
std::vector<F> apply_map(const ClusterMap& m, const std::vector<F>& cluster, const Bindings& bindings = {},
                         int step = -1) {
    Seed<F> s{m.matrix(), cluster};
    for (int k : m.word().indices) {
        try {
            s = mutate_seed(s, k, m.rule(k), bindings);
        } catch (const SingularError& e) {
            throw SingularError(step >= 0 ? "step " + std::to_string(step) + ": " + e.what() : e.what(), e.node(),
                                step);
        }
    }
    if (!m.word().permutation) return s.cluster;
    const Permutation& rho = *m.word().permutation;
    std::vector<F> out = s.cluster;
    for (int i = 1; i <= rho.size(); ++i)
        out[static_cast<std::size_t>(rho(i) - 1)] = s.cluster[static_cast<std::size_t>(i - 1)];
    return out;
}

template <class F>
Seed<F> apply_map(const ClusterMap& m, const Seed<F>& s, const Bindings& bindings = {}) {
    if (!(s.matrix == m.matrix())) throw Error("apply_map: seed matrix differs from the map's matrix");
    return {s.matrix, apply_map(m, s.cluster, bindings)};
}

/// Symbolic images of the mutable variables under the map. cluster holds the
/// starting values (usually RatFunc::variable for mutable nodes and parameters
/// for frozen nodes).
std::vector<RatFunc> symbolic_images(const ClusterMap& m, const std::vector<RatFunc>& cluster,
                                     const Bindings& bindings = {});

/// A rational map given by sequential updates: each update overwrites one
/// coordinate using the current values of all coordinates.
class RationalMap {
  public:
    struct Update {
        int var;
        RatFunc expr;
    };

    RationalMap() = default;
    RationalMap(std::vector<int> coords, std::vector<Update> updates);
    /// Single-stage map: coordinate i goes to components[i], all evaluated at
    /// the old point.
    static RationalMap simultaneous(std::vector<int> coords, std::vector<RatFunc> components);

    const std::vector<int>& coords() const { return coords_; }
    const std::vector<Update>& updates() const { return updates_; }

    std::vector<Rational> apply(const std::vector<Rational>& point, const Bindings& bindings = {}) const;
    /// Components in terms of the coordinates; bound parameters substituted.
    std::vector<RatFunc> symbolic(const Bindings& bindings = {}) const;
    /// Symbolic composition: first this, then other.
    static std::vector<RatFunc> compose(const std::vector<int>& coords, const std::vector<RatFunc>& first,
                                        const std::vector<RatFunc>& second);

  private:
    std::vector<int> coords_;
    std::vector<Update> updates_;
    bool simultaneous_ = false;
    std::vector<RatFunc> components_;
};

struct OrbitRecord {
    std::vector<std::vector<Rational>> points;  // points[0] is the seed
    std::optional<int> period;                   // first return of the compared part
    bool singular = false;
    int singular_step = -1;
    std::string singular_message;

    int steps() const { return static_cast<int>(points.size()) - 1; }
};

/// Iterates a cluster map on exact values; compares the mutable part for
/// periodicity and stops (recording the report) at a singular step.
OrbitRecord iterate_orbit(const ClusterMap& m, const std::vector<Rational>& seed, int steps,
                          const Bindings& bindings = {});
OrbitRecord iterate_orbit(const RationalMap& m, const std::vector<Rational>& seed, int steps,
                          const Bindings& bindings = {});

class MonomialProjection {
  public:
    MonomialProjection() = default;
    explicit MonomialProjection(std::vector<std::vector<long>> rows) : rows_(std::move(rows)) {}

    const std::vector<std::vector<long>>& rows() const { return rows_; }
    ZMatrix exponent_matrix() const;
    /// True when each row lies in the rational span of im B.
    bool rows_in_image(const ExchangeMatrix& b) const;

    std::vector<Rational> apply(const std::vector<Rational>& x) const;
    std::vector<RatFunc> apply(const std::vector<RatFunc>& x) const;

  private:
    std::vector<std::vector<long>> rows_;
};

OrbitRecord project_orbit(const MonomialProjection& p, const OrbitRecord& o);

/// Reads x_1, x_2, ... off an orbit of a shift map (each point is the
/// previous one shifted left by one entry). Throws if the orbit is not a shift.
std::vector<Rational> shift_sequence(const OrbitRecord& o, int width);

/// a1 (x_n x_{n+4} - x_{n+1} x_{n+3}) + a2 x_n x_{n+1} x_{n+3} x_{n+4} = a3 at every window.
bool check_quad_relation(const std::vector<Rational>& seq, const Rational& a1, const Rational& a2,
                         const Rational& a3);

}  // namespace defmut
