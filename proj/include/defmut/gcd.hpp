#pragma once

// Exact division and greatest common divisors of integer polynomials.
//
// Inputs must have nonnegative exponents. gcd results are normalized to a
// positive grlex-leading coefficient and include the integer content.

#include "defmut/poly.hpp"

#include <optional>

namespace defmut {

/// a / b when b divides a exactly in Z[x], otherwise nullopt.
std::optional<Poly> divide_exact(const Poly& a, const Poly& b);

/// Like divide_exact but throws when the division is not exact.
Poly divide_or_throw(const Poly& a, const Poly& b);

Poly gcd(const Poly& a, const Poly& b);

/// Sign-normalized copy: multiplied by -1 if the leading coefficient is negative.
Poly normalize_sign(Poly p);

}  // namespace defmut
