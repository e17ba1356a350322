#pragma once

// Log-canonical presymplectic forms and Poisson brackets.
//
// A form sum_{i<j} b_ij / (x_i x_j) dx_i ^ dx_j is stored by its coefficient
// matrix over an ordered list of coordinates.

#include "defmut/dynamics.hpp"
#include "defmut/linalg.hpp"

#include <vector>

namespace defmut {

class LogCanonicalForm {
  public:
    LogCanonicalForm() = default;
    explicit LogCanonicalForm(QMatrix coefficients);
    static LogCanonicalForm from_matrix(const ExchangeMatrix& b);

    const QMatrix& coefficients() const { return c_; }
    int dimension() const { return static_cast<int>(c_.size()); }

  private:
    QMatrix c_;
};

/// phi* omega_image == omega, where phi[k] is the image of coordinate k. Uses
/// the logarithmic Jacobian L_ki = x_i d(log phi_k)/dx_i and checks
/// L^T B' L = B entrywise as rational functions.
bool pullback_form_check(const std::vector<RatFunc>& phi, const std::vector<int>& coords,
                         const LogCanonicalForm& omega_image, const LogCanonicalForm& omega);
inline bool pullback_form_check(const std::vector<RatFunc>& phi, const std::vector<int>& coords,
                                const LogCanonicalForm& omega) {
    return pullback_form_check(phi, coords, omega, omega);
}

/// Integer identity E^T Omega_hat E == Omega for a monomial map with exponent matrix E.
bool pullback_projection_check(const ZMatrix& exponents, const LogCanonicalForm& omega_hat,
                               const LogCanonicalForm& omega);
QMatrix pullback_coefficients(const ZMatrix& exponents, const LogCanonicalForm& omega_hat);

/// {x_i, x_j} = p_ij x_i x_j.
class PoissonLogStructure {
  public:
    PoissonLogStructure() = default;
    explicit PoissonLogStructure(QMatrix p);
    const QMatrix& coefficients() const { return p_; }

  private:
    QMatrix p_;
};

/// P = B^-1 for a nondegenerate mutable block; throws Error when singular.
PoissonLogStructure invert_to_poisson(const ExchangeMatrix& b);

RatFunc poisson_bracket(const RatFunc& f, const RatFunc& g, const PoissonLogStructure& p,
                        const std::vector<int>& coords);

/// {x_i,{x_j,x_k}} + cyclic == 0 for every coordinate triple.
bool jacobi_identity_holds(const PoissonLogStructure& p, const std::vector<int>& coords);

/// psi(phi(x)) == phi(psi(x)) componentwise.
bool maps_commute(const std::vector<int>& coords, const std::vector<RatFunc>& phi, const std::vector<RatFunc>& psi);

}  // namespace defmut
