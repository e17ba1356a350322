#include "defmut/geometry.hpp"

namespace defmut {

namespace {

bool skew(const QMatrix& m) {
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (m[i].size() != m.size()) return false;
        for (std::size_t j = 0; j < m.size(); ++j)
            if (m[i][j] != -m[j][i]) return false;
    }
    return true;
}

}  // namespace

LogCanonicalForm::LogCanonicalForm(QMatrix coefficients) : c_(std::move(coefficients)) {
    if (!skew(c_)) throw Error("log-canonical form: coefficient matrix must be skew-symmetric");
}

LogCanonicalForm LogCanonicalForm::from_matrix(const ExchangeMatrix& b) {
    return LogCanonicalForm(to_rational(b.mutable_block_integer()));
}

bool pullback_form_check(const std::vector<RatFunc>& phi, const std::vector<int>& coords,
                         const LogCanonicalForm& omega_image, const LogCanonicalForm& omega) {
    std::size_t n = coords.size();
    if (phi.size() != n || omega.dimension() != static_cast<int>(n) || omega_image.dimension() != static_cast<int>(n))
        throw Error("pullback_form_check: dimension mismatch");
    for (const auto& f : phi)
        if (f.is_zero()) throw Error("pullback_form_check: identically zero component");
    std::vector<std::vector<RatFunc>> l(n, std::vector<RatFunc>(n));
    for (std::size_t k = 0; k < n; ++k) {
        RatFunc inv = phi[k].inverse();
        for (std::size_t i = 0; i < n; ++i) {
            RatFunc d = phi[k].derivative(coords[i]);
            if (!d.is_zero()) l[k][i] = d * inv * RatFunc::variable(coords[i]);
        }
    }
    const QMatrix& bp = omega_image.coefficients();
    const QMatrix& b = omega.coefficients();
    // (B' L)_lj, then L^T (B' L).
    std::vector<std::vector<RatFunc>> bl(n, std::vector<RatFunc>(n));
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t j = 0; j < n; ++j) {
            RatFunc s;
            for (std::size_t m = 0; m < n; ++m)
                if (bp[k][m] != 0 && !l[m][j].is_zero()) s += RatFunc(bp[k][m]) * l[m][j];
            bl[k][j] = s;
        }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            RatFunc s;
            for (std::size_t k = 0; k < n; ++k)
                if (!l[k][i].is_zero() && !bl[k][j].is_zero()) s += l[k][i] * bl[k][j];
            if (!(s == RatFunc(b[i][j]))) return false;
        }
    return true;
}

QMatrix pullback_coefficients(const ZMatrix& exponents, const LogCanonicalForm& omega_hat) {
    QMatrix e = to_rational(exponents);
    if (static_cast<int>(e.size()) != omega_hat.dimension()) throw Error("pullback: exponent rows mismatch");
    return multiply(transpose(e), multiply(omega_hat.coefficients(), e));
}

bool pullback_projection_check(const ZMatrix& exponents, const LogCanonicalForm& omega_hat,
                               const LogCanonicalForm& omega) {
    return pullback_coefficients(exponents, omega_hat) == omega.coefficients();
}

PoissonLogStructure::PoissonLogStructure(QMatrix p) : p_(std::move(p)) {
    if (!skew(p_)) throw Error("Poisson structure: coefficient matrix must be skew-symmetric");
}

PoissonLogStructure invert_to_poisson(const ExchangeMatrix& b) {
    auto inv = inverse(to_rational(b.mutable_block_integer()));
    if (!inv) throw Error("invert_to_poisson: exchange matrix is singular; reduce by its kernel instead");
    return PoissonLogStructure(std::move(*inv));
}

RatFunc poisson_bracket(const RatFunc& f, const RatFunc& g, const PoissonLogStructure& p,
                        const std::vector<int>& coords) {
    std::size_t n = coords.size();
    const QMatrix& c = p.coefficients();
    if (c.size() != n) throw Error("poisson_bracket: dimension mismatch");
    std::vector<RatFunc> df(n), dg(n);
    for (std::size_t i = 0; i < n; ++i) {
        df[i] = f.derivative(coords[i]) * RatFunc::variable(coords[i]);
        dg[i] = g.derivative(coords[i]) * RatFunc::variable(coords[i]);
    }
    RatFunc s;
    for (std::size_t i = 0; i < n; ++i) {
        if (df[i].is_zero()) continue;
        RatFunc row;
        for (std::size_t j = 0; j < n; ++j)
            if (c[i][j] != 0 && !dg[j].is_zero()) row += RatFunc(c[i][j]) * dg[j];
        if (!row.is_zero()) s += df[i] * row;
    }
    return s;
}

bool jacobi_identity_holds(const PoissonLogStructure& p, const std::vector<int>& coords) {
    auto br = [&](const RatFunc& f, const RatFunc& g) { return poisson_bracket(f, g, p, coords); };
    for (std::size_t i = 0; i < coords.size(); ++i)
        for (std::size_t j = i + 1; j < coords.size(); ++j)
            for (std::size_t k = j + 1; k < coords.size(); ++k) {
                RatFunc a = RatFunc::variable(coords[i]);
                RatFunc b = RatFunc::variable(coords[j]);
                RatFunc c = RatFunc::variable(coords[k]);
                if (!(br(a, br(b, c)) + br(b, br(c, a)) + br(c, br(a, b))).is_zero()) return false;
            }
    return true;
}

bool maps_commute(const std::vector<int>& coords, const std::vector<RatFunc>& phi, const std::vector<RatFunc>& psi) {
    return RationalMap::compose(coords, phi, psi) == RationalMap::compose(coords, psi, phi);
}

}  // namespace defmut
