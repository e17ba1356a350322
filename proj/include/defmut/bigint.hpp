#pragma once

// Arbitrary-precision integers and rationals (GMP) plus the "p/q" text form
// used everywhere for exact serialization.

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <string_view>

namespace defmut {

using Integer = mpz_class;
using Rational = mpq_class;

class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class ParseError : public Error {
  public:
    using Error::Error;
};

std::string to_string(const Integer& z);

/// "p/q", or just "p" when the denominator is one.
std::string to_string(const Rational& q);

/// Accepts "p", "-p", "p/q". Whitespace around the tokens is ignored.
Rational parse_rational(std::string_view text);

Integer parse_integer(std::string_view text);

Integer ipow(const Integer& base, unsigned long e);
Rational qpow(const Rational& base, long e);

inline Rational make_rational(long num, long den = 1) {
    Rational q(num, den);
    q.canonicalize();
    return q;
}

}  // namespace defmut
