#include "defmut/gcd.hpp"

#include <algorithm>
#include <map>

namespace defmut {

namespace {

using Terms = std::map<Monomial, Integer, std::greater<>>;

bool degree_bounds_allow(const Poly& a, const Poly& b) {
    Monomial amax = a.max_exponents();
    Monomial bmax = b.max_exponents();
    Monomial amin = a.min_exponents();
    Monomial bmin = b.min_exponents();
    for (int v = 0; v < kMaxVars; ++v) {
        if (bmax[v] - bmin[v] > amax[v] - amin[v]) return false;
        if (bmin[v] > amin[v]) return false;
    }
    return true;
}

// Univariate view over a coefficient ring: u[k] is the coefficient of v^k.
using UPoly = std::vector<Poly>;

int udeg(const UPoly& u) { return static_cast<int>(u.size()) - 1; }

void utrim(UPoly& u) {
    while (!u.empty() && u.back().is_zero()) u.pop_back();
}

UPoly to_upoly(const Poly& p, int v) {
    int shift = 0;
    UPoly u = p.coefficients_in(v, &shift);
    if (shift != 0) throw Error("to_upoly: negative or shifted exponents");
    return u;
}

// lc(b)^(deg a - deg b + 1) * a mod b.
UPoly pseudo_remainder(UPoly a, const UPoly& b) {
    const Poly& lb = b.back();
    int db = udeg(b);
    int steps = udeg(a) - db + 1;
    while (!a.empty() && udeg(a) >= db) {
        Poly la = a.back();
        int shift = udeg(a) - db;
        for (auto& c : a) c *= lb;
        for (int k = 0; k <= db; ++k) a[static_cast<std::size_t>(k + shift)] -= la * b[static_cast<std::size_t>(k)];
        utrim(a);
        --steps;
    }
    if (steps > 0) {
        Poly f = lb.pow(static_cast<unsigned>(steps));
        for (auto& c : a) c *= f;
    }
    return a;
}

Poly content_of(const UPoly& u) {
    Poly g;
    for (const auto& c : u) {
        g = gcd(g, c);
        if (g.is_one()) break;
    }
    return g;
}

Poly gcd_of_coefficients_with(const Poly& seed, const Poly& p, int v) {
    Poly g = seed;
    for (const auto& c : p.coefficients_in(v)) {
        if (c.is_zero()) continue;
        g = gcd(g, c);
        if (g.is_one()) break;
    }
    return g;
}

// gcd of primitive (integer content 1, no monomial factor) polynomials that
// share at least one variable.
Poly gcd_core(const Poly& a, const Poly& b) {
    if (a.size() <= b.size()) {
        if (divide_exact(b, a)) return a;
    } else {
        if (divide_exact(a, b)) return b;
    }

    auto va = a.variables();
    auto vb = b.variables();
    for (int v : va)
        if (!b.uses(v)) return gcd_of_coefficients_with(b, a, v);
    for (int v : vb)
        if (!a.uses(v)) return gcd_of_coefficients_with(a, b, v);

    int best = va.front();
    for (int v : va)
        if (std::max(a.degree_in(v), b.degree_in(v)) < std::max(a.degree_in(best), b.degree_in(best))) best = v;

    UPoly ua = to_upoly(a, best);
    UPoly ub = to_upoly(b, best);
    Poly ca = content_of(ua);
    Poly cb = content_of(ub);
    Poly cont = gcd(ca, cb);
    if (!ca.is_one())
        for (auto& c : ua) c = divide_or_throw(c, ca);
    if (!cb.is_one())
        for (auto& c : ub) c = divide_or_throw(c, cb);
    if (udeg(ua) < udeg(ub)) std::swap(ua, ub);

    Poly g = 1;
    Poly h = 1;
    UPoly result;
    while (true) {
        int delta = udeg(ua) - udeg(ub);
        UPoly r = pseudo_remainder(ua, ub);
        if (r.empty()) {
            result = std::move(ub);
            break;
        }
        if (udeg(r) == 0) {
            result = {Poly(1)};
            break;
        }
        Poly divisor = g * h.pow(static_cast<unsigned>(delta));
        ua = std::move(ub);
        for (auto& c : r) c = divide_or_throw(c, divisor);
        ub = std::move(r);
        g = ua.back();
        if (delta == 0) {
            // h unchanged
        } else if (delta == 1) {
            h = g;
        } else {
            h = divide_or_throw(g.pow(static_cast<unsigned>(delta)), h.pow(static_cast<unsigned>(delta - 1)));
        }
    }
    Poly rc = content_of(result);
    if (!rc.is_one())
        for (auto& c : result) c = divide_or_throw(c, rc);
    Poly pp = Poly::from_coefficients(result, best, 0);
    return normalize_sign(cont * pp);
}

}  // namespace

Poly normalize_sign(Poly p) {
    if (!p.is_zero() && p.leading().coeff < 0) p = -p;
    return p;
}

std::optional<Poly> divide_exact(const Poly& a, const Poly& b) {
    if (b.is_zero()) throw Error("polynomial division by zero");
    if (a.is_zero()) return Poly{};
    if (b.is_monomial()) {
        const auto& t = b.leading();
        std::vector<Poly::Term> out;
        out.reserve(a.size());
        for (const auto& s : a.terms()) {
            if (!t.mono.divides(s.mono) || !mpz_divisible_p(s.coeff.get_mpz_t(), t.coeff.get_mpz_t()))
                return std::nullopt;
            Integer q;
            mpz_divexact(q.get_mpz_t(), s.coeff.get_mpz_t(), t.coeff.get_mpz_t());
            out.push_back({s.mono / t.mono, std::move(q)});
        }
        return Poly::from_terms(std::move(out));
    }
    if (a.size() < 2 || !degree_bounds_allow(a, b)) return std::nullopt;
    {
        // Trailing terms must divide as well as leading ones.
        const auto& ta = a.terms().back();
        const auto& tb = b.terms().back();
        if (!tb.mono.divides(ta.mono) || !mpz_divisible_p(ta.coeff.get_mpz_t(), tb.coeff.get_mpz_t()))
            return std::nullopt;
        const auto& la = a.leading();
        const auto& lb = b.leading();
        if (!lb.mono.divides(la.mono) || !mpz_divisible_p(la.coeff.get_mpz_t(), lb.coeff.get_mpz_t()))
            return std::nullopt;
    }

    Terms rem;
    for (const auto& t : a.terms()) rem.emplace(t.mono, t.coeff);
    const auto& lb = b.leading();
    std::vector<Poly::Term> quotient;
    Integer q;
    while (!rem.empty()) {
        auto it = rem.begin();
        if (!lb.mono.divides(it->first) || !mpz_divisible_p(it->second.get_mpz_t(), lb.coeff.get_mpz_t()))
            return std::nullopt;
        Monomial qm = it->first / lb.mono;
        mpz_divexact(q.get_mpz_t(), it->second.get_mpz_t(), lb.coeff.get_mpz_t());
        rem.erase(it);
        auto bt = b.terms().begin();
        for (++bt; bt != b.terms().end(); ++bt) {
            Monomial m = bt->mono * qm;
            auto [pos, inserted] = rem.try_emplace(m);
            mpz_submul(pos->second.get_mpz_t(), q.get_mpz_t(), bt->coeff.get_mpz_t());
            if (pos->second == 0) rem.erase(pos);
        }
        quotient.push_back({qm, q});
    }
    return Poly::from_terms(std::move(quotient));
}

Poly divide_or_throw(const Poly& a, const Poly& b) {
    auto q = divide_exact(a, b);
    if (!q) throw Error("inexact polynomial division");
    return std::move(*q);
}

Poly gcd(const Poly& a, const Poly& b) {
    if (a.is_zero()) return normalize_sign(b);
    if (b.is_zero()) return normalize_sign(a);
    if (a.is_one() || b.is_one()) return 1;
    if (a == b) return normalize_sign(a);

    Integer ca = a.content();
    Integer cb = b.content();
    Integer c;
    mpz_gcd(c.get_mpz_t(), ca.get_mpz_t(), cb.get_mpz_t());
    Monomial ma = a.min_exponents();
    Monomial mb = b.min_exponents();
    Monomial m = Monomial::min(ma, mb);
    if (a.is_monomial() || b.is_monomial()) return Poly::monomial(m, c);

    Poly pa = a.divided_by_integer(ca);
    Poly pb = b.divided_by_integer(cb);
    if (!ma.is_unit()) pa = pa.times_monomial(ma.pow(-1));
    if (!mb.is_unit()) pb = pb.times_monomial(mb.pow(-1));
    Poly g;
    if (pa.is_constant() || pb.is_constant()) {
        g = 1;
    } else if (normalize_sign(pa) == normalize_sign(pb)) {
        g = normalize_sign(pa);
    } else {
        g = gcd_core(pa, pb);
    }
    return normalize_sign(g.times_monomial(m).scaled(c));
}

}  // namespace defmut
