#pragma once

// Reduced rational functions over Z[x] (hence over Q).

#include "defmut/poly.hpp"

#include <map>
#include <optional>
#include <span>
#include <vector>

namespace defmut {

/// Canonical form: num and den have nonnegative exponents, gcd(num, den) = 1
/// including integer content, and den has a positive grlex-leading coefficient.
class RatFunc {
  public:
    RatFunc() : den_(1) {}
    RatFunc(long c) : num_(c), den_(1) {}  // NOLINT
    RatFunc(const Integer& c) : num_(c), den_(1) {}  // NOLINT
    RatFunc(const Rational& q);  // NOLINT
    /// Accepts Laurent polynomials; negative exponents move to the denominator.
    RatFunc(const Poly& p);  // NOLINT

    static RatFunc variable(int v) { return RatFunc(Poly::variable(v)); }
    /// n / d, reduced. Throws on d == 0.
    static RatFunc fraction(const Poly& n, const Poly& d);

    const Poly& num() const { return num_; }
    const Poly& den() const { return den_; }

    bool is_zero() const { return num_.is_zero(); }
    bool is_constant() const { return num_.is_constant() && den_.is_constant(); }
    std::optional<Rational> constant_value() const;
    bool uses(int v) const { return num_.uses(v) || den_.uses(v); }
    std::vector<int> variables() const;
    /// Total number of stored terms, a size measure.
    std::size_t term_count() const { return num_.size() + den_.size(); }

    RatFunc operator-() const;
    friend RatFunc operator+(const RatFunc& a, const RatFunc& b);
    friend RatFunc operator-(const RatFunc& a, const RatFunc& b);
    friend RatFunc operator*(const RatFunc& a, const RatFunc& b);
    friend RatFunc operator/(const RatFunc& a, const RatFunc& b);
    RatFunc& operator+=(const RatFunc& o) { return *this = *this + o; }
    RatFunc& operator-=(const RatFunc& o) { return *this = *this - o; }
    RatFunc& operator*=(const RatFunc& o) { return *this = *this * o; }
    RatFunc& operator/=(const RatFunc& o) { return *this = *this / o; }

    RatFunc inverse() const;
    RatFunc pow(long e) const;
    RatFunc derivative(int v) const;

    friend bool operator==(const RatFunc& a, const RatFunc& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }

  private:
    struct Unchecked {};
    RatFunc(Poly n, Poly d, Unchecked) : num_(std::move(n)), den_(std::move(d)) {}
    static RatFunc reduce(Poly n, Poly d);

    Poly num_;
    Poly den_;
};

/// Equality by cross-multiplication, independent of normalization.
bool equal_by_cross_multiplication(const RatFunc& a, const RatFunc& b);

struct LaurentForm {
    bool is_laurent = false;
    Poly value;  // Laurent polynomial (may carry negative exponents) when is_laurent
};

/// Laurent with integer coefficients: the reduced denominator is a monomial of
/// coefficient one.
LaurentForm laurent_normal_form(const RatFunc& f);

/// A partial substitution: variables without an entry map to themselves.
using Assignment = std::map<int, RatFunc>;

RatFunc substitute(const RatFunc& f, const Assignment& assignment);
Poly substitute(const Poly& p, const std::map<int, Poly>& assignment);

/// Point values indexed by variable. Missing variables raise an error.
using Point = std::map<int, Rational>;

Rational evaluate(const Poly& p, const Point& point);
/// Throws SingularValue when the denominator vanishes.
Rational evaluate(const RatFunc& f, const Point& point);
double evaluate_double(const RatFunc& f, const std::map<int, double>& point);

class SingularValue : public Error {
  public:
    using Error::Error;
};

}  // namespace defmut
