#pragma once

// First integrals: verification, cyclic constructions for periodic maps, and
// the linear monomial-ansatz search at numeric parameter values.

#include "defmut/dynamics.hpp"

#include <optional>
#include <vector>

namespace defmut {

/// K(phi(x)) == K(x) exactly. phi[i] is the image of coords[i].
bool verify_integral(const std::vector<RatFunc>& phi, const std::vector<int>& coords, const RatFunc& k);

/// K(phi(x)) - K(x) simplified; zero exactly when K is invariant.
RatFunc integral_defect(const std::vector<RatFunc>& phi, const std::vector<int>& coords, const RatFunc& k);

enum class CyclicKind { sum, product };

/// Sum or product of (phi*)^i generator for i < period. Throws when the
/// result is not invariant or the generator does not return after `period`.
RatFunc periodic_integral(const std::vector<RatFunc>& phi, const std::vector<int>& coords, const RatFunc& generator,
                          int period, CyclicKind kind);

/// K = sum_m c_m m / (D0 + delta D1), with one coefficient fixed to one.
struct MonomialAnsatz {
    std::vector<Monomial> support;
    std::size_t gauge = 0;            // index of the coefficient fixed to one
    bool free_constant = false;       // an additive constant is implied and quotiented out
    std::optional<Poly> den_fixed;    // D0; absent means denominator one
    std::optional<Poly> den_scaled;   // D1, multiplied by the grid unknown
    std::vector<Rational> delta_grid; // values tried for delta
};

struct AnsatzSolution {
    bool solvable = false;
    std::vector<Rational> coefficients;  // aligned with support
    std::optional<Rational> delta;
    int nullity = 0;                     // dimension of the solution space including the gauge
    std::vector<Rational> solvable_deltas;
    RatFunc integral;                    // the assembled K when solvable
};

/// phi must be numeric in the parameters (bind them before calling).
AnsatzSolution search_deformed_integral(const std::vector<RatFunc>& phi, const std::vector<int>& coords,
                                        const MonomialAnsatz& ansatz);

/// Rank 2 of the Jacobian of (k1, k2) at some random rational point, trying up
/// to `attempts` points. Throws when every point is singular.
bool functional_independence(const RatFunc& k1, const RatFunc& k2, const std::vector<int>& coords,
                             unsigned seed = 11, int attempts = 5);

}  // namespace defmut
