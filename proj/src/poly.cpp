#include "defmut/poly.hpp"

#include <algorithm>
#include <limits>
#include <unordered_map>

namespace defmut {

namespace {

void check_var(int v) {
    if (v < 0 || v >= kMaxVars) throw Error("variable index out of range: " + std::to_string(v));
}

int16_t narrow_exponent(long e) {
    if (e > std::numeric_limits<int16_t>::max() || e < std::numeric_limits<int16_t>::min())
        throw Error("exponent overflow");
    return static_cast<int16_t>(e);
}

bool term_greater(const Poly::Term& a, const Poly::Term& b) { return a.mono > b.mono; }

}  // namespace

// ---------------------------------------------------------------- Monomial

Monomial Monomial::variable(int v, int power) {
    Monomial m;
    m.set(v, power);
    return m;
}

void Monomial::set(int v, int e) {
    check_var(v);
    auto& slot = exps_[static_cast<std::size_t>(v)];
    degree_ += e - slot;
    slot = narrow_exponent(e);
}

bool Monomial::is_all_zero() const {
    return std::all_of(exps_.begin(), exps_.end(), [](int16_t e) { return e == 0; });
}

bool Monomial::is_nonnegative() const {
    return std::all_of(exps_.begin(), exps_.end(), [](int16_t e) { return e >= 0; });
}

bool Monomial::divides(const Monomial& m) const {
    for (std::size_t i = 0; i < exps_.size(); ++i)
        if (exps_[i] > m.exps_[i]) return false;
    return true;
}

Monomial Monomial::operator*(const Monomial& o) const {
    Monomial r;
    for (std::size_t i = 0; i < exps_.size(); ++i) r.exps_[i] = narrow_exponent(long{exps_[i]} + o.exps_[i]);
    r.degree_ = degree_ + o.degree_;
    return r;
}

Monomial Monomial::operator/(const Monomial& o) const {
    Monomial r;
    for (std::size_t i = 0; i < exps_.size(); ++i) r.exps_[i] = narrow_exponent(long{exps_[i]} - o.exps_[i]);
    r.degree_ = degree_ - o.degree_;
    return r;
}

Monomial Monomial::pow(int e) const {
    Monomial r;
    for (std::size_t i = 0; i < exps_.size(); ++i) r.exps_[i] = narrow_exponent(long{exps_[i]} * e);
    r.degree_ = degree_ * e;
    return r;
}

Monomial Monomial::min(const Monomial& a, const Monomial& b) {
    Monomial r;
    int d = 0;
    for (std::size_t i = 0; i < a.exps_.size(); ++i) {
        r.exps_[i] = std::min(a.exps_[i], b.exps_[i]);
        d += r.exps_[i];
    }
    r.degree_ = d;
    return r;
}

Monomial Monomial::max(const Monomial& a, const Monomial& b) {
    Monomial r;
    int d = 0;
    for (std::size_t i = 0; i < a.exps_.size(); ++i) {
        r.exps_[i] = std::max(a.exps_[i], b.exps_[i]);
        d += r.exps_[i];
    }
    r.degree_ = d;
    return r;
}

std::size_t Monomial::hash() const {
    std::uint64_t h = 1469598103934665603ull;
    for (int16_t e : exps_) {
        h ^= static_cast<std::uint16_t>(e);
        h *= 1099511628211ull;
    }
    return static_cast<std::size_t>(h);
}

std::strong_ordering operator<=>(const Monomial& a, const Monomial& b) {
    if (a.degree_ != b.degree_) return a.degree_ <=> b.degree_;
    for (std::size_t i = 0; i < a.exps_.size(); ++i)
        if (a.exps_[i] != b.exps_[i]) return a.exps_[i] <=> b.exps_[i];
    return std::strong_ordering::equal;
}

// -------------------------------------------------------------------- Poly

Poly::Poly(long c) {
    if (c != 0) terms_.push_back({Monomial{}, Integer(c)});
}

Poly::Poly(const Integer& c) {
    if (c != 0) terms_.push_back({Monomial{}, c});
}

Poly Poly::variable(int v) { return monomial(Monomial::variable(v)); }

Poly Poly::monomial(const Monomial& m, const Integer& c) {
    Poly p;
    if (c != 0) p.terms_.push_back({m, c});
    return p;
}

Poly Poly::from_terms(std::vector<Term> terms) {
    std::sort(terms.begin(), terms.end(), term_greater);
    Poly p;
    p.terms_.reserve(terms.size());
    for (auto& t : terms) {
        if (!p.terms_.empty() && p.terms_.back().mono == t.mono) {
            p.terms_.back().coeff += t.coeff;
            if (p.terms_.back().coeff == 0) p.terms_.pop_back();
        } else if (t.coeff != 0) {
            p.terms_.push_back(std::move(t));
        }
    }
    return p;
}

bool Poly::is_nonnegative() const {
    return std::all_of(terms_.begin(), terms_.end(), [](const Term& t) { return t.mono.is_nonnegative(); });
}

Integer Poly::constant_term() const {
    if (!terms_.empty() && terms_.back().mono.is_unit()) return terms_.back().coeff;
    return 0;
}

Integer Poly::content() const {
    Integer g = 0;
    for (const auto& t : terms_) {
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), t.coeff.get_mpz_t());
        if (g == 1) break;
    }
    return g;
}

Monomial Poly::min_exponents() const {
    if (terms_.empty()) return {};
    Monomial m = terms_.front().mono;
    for (const auto& t : terms_) m = Monomial::min(m, t.mono);
    return m;
}

Monomial Poly::max_exponents() const {
    if (terms_.empty()) return {};
    Monomial m = terms_.front().mono;
    for (const auto& t : terms_) m = Monomial::max(m, t.mono);
    return m;
}

int Poly::degree_in(int v) const {
    int d = std::numeric_limits<int>::min();
    for (const auto& t : terms_) d = std::max(d, t.mono[v]);
    return terms_.empty() ? 0 : d;
}

int Poly::min_degree_in(int v) const {
    int d = std::numeric_limits<int>::max();
    for (const auto& t : terms_) d = std::min(d, t.mono[v]);
    return terms_.empty() ? 0 : d;
}

bool Poly::uses(int v) const {
    return std::any_of(terms_.begin(), terms_.end(), [v](const Term& t) { return t.mono[v] != 0; });
}

std::vector<int> Poly::variables() const {
    std::vector<int> vs;
    for (int v = 0; v < kMaxVars; ++v)
        if (uses(v)) vs.push_back(v);
    return vs;
}

int Poly::total_degree() const {
    int d = 0;
    for (const auto& t : terms_) d = std::max(d, t.mono.degree());
    return d;
}

Poly Poly::operator-() const {
    Poly r = *this;
    for (auto& t : r.terms_) t.coeff = -t.coeff;
    return r;
}

namespace {

// Merge two sorted term lists; sign = +1 for addition, -1 for subtraction.
std::vector<Poly::Term> merge_terms(const std::vector<Poly::Term>& a, const std::vector<Poly::Term>& b,
                                    int sign) {
    std::vector<Poly::Term> out;
    out.reserve(a.size() + b.size());
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        if (j == b.size() || (i < a.size() && a[i].mono > b[j].mono)) {
            out.push_back(a[i++]);
        } else if (i == a.size() || b[j].mono > a[i].mono) {
            out.push_back({b[j].mono, sign > 0 ? b[j].coeff : Integer(-b[j].coeff)});
            ++j;
        } else {
            Integer c = sign > 0 ? Integer(a[i].coeff + b[j].coeff) : Integer(a[i].coeff - b[j].coeff);
            if (c != 0) out.push_back({a[i].mono, std::move(c)});
            ++i;
            ++j;
        }
    }
    return out;
}

}  // namespace

Poly& Poly::operator+=(const Poly& o) {
    if (o.terms_.empty()) return *this;
    if (terms_.empty()) return *this = o;
    terms_ = merge_terms(terms_, o.terms_, +1);
    return *this;
}

Poly& Poly::operator-=(const Poly& o) {
    if (o.terms_.empty()) return *this;
    terms_ = merge_terms(terms_, o.terms_, -1);
    return *this;
}

Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    if (a.size() == 1) return b.times_monomial(a.terms_[0].mono).scaled(a.terms_[0].coeff);
    if (b.size() == 1) return a.times_monomial(b.terms_[0].mono).scaled(b.terms_[0].coeff);
    std::unordered_map<Monomial, Integer, MonomialHash> acc;
    acc.reserve(a.size() * b.size() / 2 + 16);
    for (const auto& s : a.terms_) {
        for (const auto& t : b.terms_) {
            auto [it, inserted] = acc.try_emplace(s.mono * t.mono);
            mpz_addmul(it->second.get_mpz_t(), s.coeff.get_mpz_t(), t.coeff.get_mpz_t());
        }
    }
    Poly r;
    r.terms_.reserve(acc.size());
    for (auto& [m, c] : acc)
        if (c != 0) r.terms_.push_back({m, std::move(c)});
    std::sort(r.terms_.begin(), r.terms_.end(), term_greater);
    return r;
}

Poly& Poly::operator*=(const Poly& o) { return *this = *this * o; }

Poly Poly::scaled(const Integer& c) const {
    if (c == 0) return {};
    Poly r = *this;
    if (c != 1)
        for (auto& t : r.terms_) t.coeff *= c;
    return r;
}

Poly Poly::divided_by_integer(const Integer& c) const {
    if (c == 0) throw Error("polynomial divided by zero");
    Poly r = *this;
    if (c != 1)
        for (auto& t : r.terms_) mpz_divexact(t.coeff.get_mpz_t(), t.coeff.get_mpz_t(), c.get_mpz_t());
    return r;
}

Poly Poly::times_monomial(const Monomial& m) const {
    Poly r = *this;
    if (!m.is_unit())
        for (auto& t : r.terms_) t.mono = t.mono * m;
    return r;
}

Poly Poly::pow(unsigned e) const {
    Poly result = 1;
    Poly base = *this;
    while (e > 0) {
        if (e & 1u) result *= base;
        e >>= 1u;
        if (e > 0) base = base * base;
    }
    return result;
}

Poly pow(const Poly& p, unsigned e) { return p.pow(e); }

Poly Poly::derivative(int v) const {
    check_var(v);
    std::vector<Term> out;
    out.reserve(terms_.size());
    for (const auto& t : terms_) {
        int e = t.mono[v];
        if (e == 0) continue;
        Monomial m = t.mono;
        m.set(v, e - 1);
        out.push_back({m, t.coeff * e});
    }
    return from_terms(std::move(out));
}

std::vector<Poly> Poly::coefficients_in(int v, int* shift) const {
    int lo = min_degree_in(v);
    int hi = degree_in(v);
    if (shift) *shift = lo;
    if (terms_.empty()) return {};
    std::vector<std::vector<Term>> buckets(static_cast<std::size_t>(hi - lo + 1));
    for (const auto& t : terms_) {
        Monomial m = t.mono;
        int e = m[v];
        m.set(v, 0);
        buckets[static_cast<std::size_t>(e - lo)].push_back({m, t.coeff});
    }
    std::vector<Poly> out;
    out.reserve(buckets.size());
    // Removing one variable from a grlex-sorted list can break the order only
    // between terms of different degree in v, so each bucket needs a re-sort.
    for (auto& b : buckets) out.push_back(from_terms(std::move(b)));
    return out;
}

Poly Poly::from_coefficients(std::span<const Poly> coeffs, int v, int shift) {
    std::vector<Term> out;
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
        Monomial vk = Monomial::variable(v, static_cast<int>(k) + shift);
        for (const auto& t : coeffs[k].terms()) out.push_back({t.mono * vk, t.coeff});
    }
    return from_terms(std::move(out));
}

bool operator==(const Poly& a, const Poly& b) {
    if (a.terms_.size() != b.terms_.size()) return false;
    for (std::size_t i = 0; i < a.terms_.size(); ++i)
        if (!(a.terms_[i].mono == b.terms_[i].mono) || a.terms_[i].coeff != b.terms_[i].coeff) return false;
    return true;
}

}  // namespace defmut
