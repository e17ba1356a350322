#include "defmut/ratfunc.hpp"

#include "defmut/gcd.hpp"

#include <algorithm>
#include <cmath>

namespace defmut {

namespace {

Poly exact(const Poly& a, const Poly& b) { return b.is_one() ? a : divide_or_throw(a, b); }

// Caches nonnegative powers of one polynomial.
class PowerCache {
  public:
    explicit PowerCache(Poly base) { powers_.push_back(1), powers_.push_back(std::move(base)); }
    const Poly& get(int e) {
        while (static_cast<int>(powers_.size()) <= e) powers_.push_back(powers_.back() * powers_[1]);
        return powers_[static_cast<std::size_t>(e)];
    }

  private:
    std::vector<Poly> powers_;
};

}  // namespace

RatFunc::RatFunc(const Rational& q) : num_(q.get_num()), den_(q.get_den()) {}

RatFunc::RatFunc(const Poly& p) : den_(1) {
    Monomial lo = p.min_exponents();
    Monomial shift;
    bool negative = false;
    for (int v = 0; v < kMaxVars; ++v)
        if (lo[v] < 0) {
            shift.set(v, -lo[v]);
            negative = true;
        }
    if (!negative) {
        num_ = p;
        return;
    }
    num_ = p.times_monomial(shift);
    den_ = Poly::monomial(shift);
}

RatFunc RatFunc::reduce(Poly n, Poly d) {
    if (d.is_zero()) throw SingularValue("rational function with zero denominator");
    if (n.is_zero()) return {};
    if (!n.is_nonnegative() || !d.is_nonnegative()) return RatFunc(n) / RatFunc(d);
    Poly g = gcd(n, d);
    if (!g.is_one()) {
        n = divide_or_throw(n, g);
        d = divide_or_throw(d, g);
    }
    if (d.leading().coeff < 0) {
        n = -n;
        d = -d;
    }
    return RatFunc(std::move(n), std::move(d), Unchecked{});
}

RatFunc RatFunc::fraction(const Poly& n, const Poly& d) { return reduce(n, d); }

std::optional<Rational> RatFunc::constant_value() const {
    if (!is_constant()) return std::nullopt;
    Rational q(num_.constant_term(), den_.constant_term());
    q.canonicalize();
    return q;
}

std::vector<int> RatFunc::variables() const {
    std::vector<int> vs;
    for (int v = 0; v < kMaxVars; ++v)
        if (uses(v)) vs.push_back(v);
    return vs;
}

RatFunc RatFunc::operator-() const { return RatFunc(-num_, den_, Unchecked{}); }

RatFunc operator+(const RatFunc& a, const RatFunc& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    if (a.den_.is_one() && b.den_.is_one()) return RatFunc(a.num_ + b.num_, 1, RatFunc::Unchecked{});
    if (a.den_ == b.den_) return RatFunc::reduce(a.num_ + b.num_, a.den_);
    Poly g = gcd(a.den_, b.den_);
    if (g.is_one()) return RatFunc(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_, RatFunc::Unchecked{});
    Poly ad = exact(a.den_, g);
    Poly bd = exact(b.den_, g);
    Poly t = a.num_ * bd + b.num_ * ad;
    if (t.is_zero()) return {};
    Poly h = gcd(t, g);
    return RatFunc::reduce(exact(t, h), ad * bd * exact(g, h));
}

RatFunc operator-(const RatFunc& a, const RatFunc& b) { return a + (-b); }

RatFunc operator*(const RatFunc& a, const RatFunc& b) {
    if (a.is_zero() || b.is_zero()) return {};
    Poly g1 = gcd(a.num_, b.den_);
    Poly g2 = gcd(b.num_, a.den_);
    Poly n = exact(a.num_, g1) * exact(b.num_, g2);
    Poly d = exact(a.den_, g2) * exact(b.den_, g1);
    if (d.leading().coeff < 0) {
        n = -n;
        d = -d;
    }
    return RatFunc(std::move(n), std::move(d), RatFunc::Unchecked{});
}

RatFunc RatFunc::inverse() const {
    if (is_zero()) throw SingularValue("inverse of the zero rational function");
    if (num_.leading().coeff < 0) return RatFunc(-den_, -num_, Unchecked{});
    return RatFunc(den_, num_, Unchecked{});
}

RatFunc operator/(const RatFunc& a, const RatFunc& b) {
    if (b.is_zero()) throw SingularValue("division by the zero rational function");
    return a * b.inverse();
}

RatFunc RatFunc::pow(long e) const {
    if (e < 0) return inverse().pow(-e);
    if (e == 0) return 1;
    return RatFunc(num_.pow(static_cast<unsigned>(e)), den_.pow(static_cast<unsigned>(e)), Unchecked{});
}

RatFunc RatFunc::derivative(int v) const {
    if (!uses(v)) return {};
    if (den_.is_constant()) return reduce(num_.derivative(v), den_);
    return reduce(num_.derivative(v) * den_ - num_ * den_.derivative(v), den_ * den_);
}

bool equal_by_cross_multiplication(const RatFunc& a, const RatFunc& b) {
    return a.num() * b.den() == b.num() * a.den();
}

LaurentForm laurent_normal_form(const RatFunc& f) {
    const Poly& d = f.den();
    if (!d.is_monomial() || d.leading().coeff != 1) return {false, {}};
    return {true, f.num().times_monomial(d.leading().mono.pow(-1))};
}

Poly substitute(const Poly& p, const std::map<int, Poly>& assignment) {
    std::map<int, PowerCache> caches;
    for (const auto& [v, img] : assignment)
        if (p.uses(v)) caches.emplace(v, PowerCache(img));
    if (caches.empty()) return p;
    Poly out;
    for (const auto& t : p.terms()) {
        Monomial rest = t.mono;
        for (const auto& [v, c] : caches) rest.set(v, 0);
        Poly term = Poly::monomial(rest, t.coeff);
        for (auto& [v, c] : caches) {
            int e = t.mono[v];
            if (e < 0) throw Error("substitute: negative exponent on a substituted variable");
            if (e > 0) term *= c.get(e);
        }
        out += term;
    }
    return out;
}

RatFunc substitute(const RatFunc& f, const Assignment& assignment) {
    struct Group {
        Poly den;
        std::vector<int> vars;
        int max_weight = 0;
    };
    std::map<int, Poly> numerators;
    std::vector<Group> groups;
    for (const auto& [v, img] : assignment) {
        if (!f.uses(v)) continue;
        numerators.emplace(v, img.num());
        if (img.den().is_one()) continue;
        auto it = std::find_if(groups.begin(), groups.end(), [&](const Group& g) { return g.den == img.den(); });
        if (it == groups.end()) {
            groups.push_back({img.den(), {v}, 0});
        } else {
            it->vars.push_back(v);
        }
    }
    if (numerators.empty()) return f;
    auto weight = [](const Monomial& m, const Group& g) {
        int s = 0;
        for (int v : g.vars) s += m[v];
        return s;
    };
    for (auto& g : groups) {
        for (const auto& t : f.num().terms()) g.max_weight = std::max(g.max_weight, weight(t.mono, g));
        for (const auto& t : f.den().terms()) g.max_weight = std::max(g.max_weight, weight(t.mono, g));
    }
    std::map<int, PowerCache> num_cache;
    for (const auto& [v, n] : numerators) num_cache.emplace(v, PowerCache(n));
    std::vector<PowerCache> den_cache;
    for (const auto& g : groups) den_cache.emplace_back(g.den);

    auto homogenize = [&](const Poly& p) {
        Poly out;
        for (const auto& t : p.terms()) {
            Monomial rest = t.mono;
            for (const auto& [v, c] : num_cache) rest.set(v, 0);
            Poly term = Poly::monomial(rest, t.coeff);
            for (auto& [v, c] : num_cache)
                if (int e = t.mono[v]; e > 0) term *= c.get(e);
            for (std::size_t gi = 0; gi < groups.size(); ++gi)
                if (int e = groups[gi].max_weight - weight(t.mono, groups[gi]); e > 0) term *= den_cache[gi].get(e);
            out += term;
        }
        return out;
    };
    Poly n = homogenize(f.num());
    Poly d = homogenize(f.den());
    if (d.is_zero()) throw SingularValue("substitution makes the denominator vanish identically");
    return RatFunc::fraction(n, d);
}

Rational evaluate(const Poly& p, const Point& point) {
    Rational sum = 0;
    std::map<std::pair<int, int>, Rational> powers;
    for (const auto& t : p.terms()) {
        Rational term = t.coeff;
        for (int v = 0; v < kMaxVars; ++v) {
            int e = t.mono[v];
            if (e == 0) continue;
            auto it = point.find(v);
            if (it == point.end()) throw Error("evaluate: no value for variable " + std::to_string(v));
            auto [pos, inserted] = powers.try_emplace({v, e});
            if (inserted) {
                if (e < 0 && it->second == 0) throw SingularValue("evaluate: negative power of zero");
                pos->second = qpow(it->second, e);
            }
            term *= pos->second;
        }
        sum += term;
    }
    return sum;
}

Rational evaluate(const RatFunc& f, const Point& point) {
    Rational d = evaluate(f.den(), point);
    if (d == 0) throw SingularValue("evaluate: denominator vanishes");
    return evaluate(f.num(), point) / d;
}

double evaluate_double(const RatFunc& f, const std::map<int, double>& point) {
    auto eval = [&](const Poly& p) {
        double sum = 0;
        for (const auto& t : p.terms()) {
            double term = t.coeff.get_d();
            for (int v = 0; v < kMaxVars; ++v) {
                int e = t.mono[v];
                if (e == 0) continue;
                auto it = point.find(v);
                if (it == point.end()) throw Error("evaluate: no value for variable " + std::to_string(v));
                term *= std::pow(it->second, e);
            }
            sum += term;
        }
        return sum;
    };
    return eval(f.num()) / eval(f.den());
}

}  // namespace defmut
