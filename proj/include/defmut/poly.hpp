#pragma once

// Sparse multivariate Laurent polynomials with integer coefficients.
//
// Variables are identified by index (0 .. kMaxVars-1); an Alphabet gives them
// names. Terms are kept sorted by descending graded-lexicographic order with no
// zero coefficients, so structural equality is mathematical equality.

#include "defmut/bigint.hpp"

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace defmut {

inline constexpr int kMaxVars = 16;

class Monomial {
  public:
    Monomial() = default;

    static Monomial variable(int v, int power = 1);

    int operator[](int v) const { return exps_[static_cast<std::size_t>(v)]; }
    void set(int v, int e);
    int degree() const { return degree_; }

    bool is_unit() const { return degree_ == 0 && is_all_zero(); }
    bool is_nonnegative() const;
    /// True when every exponent of *this is <= the matching exponent of m.
    bool divides(const Monomial& m) const;

    Monomial operator*(const Monomial& o) const;
    Monomial operator/(const Monomial& o) const;
    Monomial pow(int e) const;

    static Monomial min(const Monomial& a, const Monomial& b);
    static Monomial max(const Monomial& a, const Monomial& b);

    std::size_t hash() const;

    friend bool operator==(const Monomial& a, const Monomial& b) { return a.exps_ == b.exps_; }
    // Graded lexicographic: total degree first, then variable 0 most significant.
    friend std::strong_ordering operator<=>(const Monomial& a, const Monomial& b);

  private:
    bool is_all_zero() const;

    std::array<int16_t, kMaxVars> exps_{};
    int32_t degree_ = 0;
};

struct MonomialHash {
    std::size_t operator()(const Monomial& m) const { return m.hash(); }
};

class Poly {
  public:
    struct Term {
        Monomial mono;
        Integer coeff;
    };

    Poly() = default;
    Poly(long c);  // NOLINT: integer constants convert implicitly
    Poly(const Integer& c);  // NOLINT

    static Poly variable(int v);
    static Poly monomial(const Monomial& m, const Integer& c = 1);
    /// Sorts and merges duplicate monomials, dropping zeros.
    static Poly from_terms(std::vector<Term> terms);

    const std::vector<Term>& terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].mono.is_unit()); }
    bool is_monomial() const { return terms_.size() == 1; }
    bool is_one() const { return is_constant() && !is_zero() && terms_[0].coeff == 1; }
    bool is_nonnegative() const;

    /// Greatest term in grlex. Precondition: nonzero.
    const Term& leading() const { return terms_.front(); }
    Integer constant_term() const;

    /// gcd of the absolute values of the coefficients (0 for the zero poly).
    Integer content() const;
    Monomial min_exponents() const;
    Monomial max_exponents() const;
    int degree_in(int v) const;
    int min_degree_in(int v) const;
    bool uses(int v) const;
    std::vector<int> variables() const;
    int total_degree() const;

    Poly operator-() const;
    Poly& operator+=(const Poly& o);
    Poly& operator-=(const Poly& o);
    Poly& operator*=(const Poly& o);
    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    friend Poly operator*(const Poly& a, const Poly& b);

    Poly scaled(const Integer& c) const;
    /// Exact division of every coefficient. Precondition: c divides the content.
    Poly divided_by_integer(const Integer& c) const;
    Poly times_monomial(const Monomial& m) const;
    Poly pow(unsigned e) const;
    Poly derivative(int v) const;

    /// Coefficients with respect to v: result[k] is the coefficient of v^(min+k)
    /// with v removed, where min = min_degree_in(v) (returned through `shift`).
    std::vector<Poly> coefficients_in(int v, int* shift = nullptr) const;
    static Poly from_coefficients(std::span<const Poly> coeffs, int v, int shift = 0);

    friend bool operator==(const Poly& a, const Poly& b);

  private:
    std::vector<Term> terms_;
};

Poly pow(const Poly& p, unsigned e);

}  // namespace defmut
