#include "defmut/dynamics.hpp"

#include <algorithm>

namespace defmut {

namespace {

RatFunc bind_parameters(const RatFunc& c, const Bindings& b) {
    if (c.is_constant() || b.empty()) return c;
    Assignment a;
    for (const auto& [v, q] : b)
        if (c.uses(v)) a.emplace(v, RatFunc(q));
    return a.empty() ? c : substitute(c, a);
}

template <class F>
F horner(const std::vector<F>& coeffs, const F& u) {
    F acc = 0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * u + *it;
    return acc;
}

template <class F>
F ipower(const F& x, int e) {
    F r = 1;
    for (int i = 0; i < e; ++i) r *= x;
    return r;
}

template <class F, class Coef>
F exchange_generic(const GSpec& g, const F& plus, const F& minus, Coef coef) {
    const auto& c = g.coefficients();
    auto nonzero = [](const F& d) {
        if (d == 0) throw SingularValue("exchange rule denominator vanishes");
        return d;
    };
    switch (g.kind()) {
        case GSpec::Kind::affine:
            return coef(c[0]) * plus + coef(c[1]) * minus;
        case GSpec::Kind::moebius: {
            F a1 = coef(c[0]), a2 = coef(c[1]), a3 = coef(c[2]);
            return plus * (a1 * minus + a3 * plus) / nonzero(a2 * minus + a1 * plus);
        }
        case GSpec::Kind::moebius_x: {
            F a1 = coef(c[0]), a2 = coef(c[1]), a3 = coef(c[2]);
            return minus * (a1 * plus + a3 * minus) / nonzero(a2 * plus + a1 * minus);
        }
        case GSpec::Kind::custom: {
            if (plus == 0) throw SingularValue("custom rule needs M+ != 0");
            F u = minus / plus;
            std::vector<F> num, den;
            for (const auto& x : g.g().num) num.push_back(coef(x));
            for (const auto& x : g.g().den) den.push_back(coef(x));
            return plus * horner(num, u) / nonzero(horner(den, u));
        }
        case GSpec::Kind::raw_f: {
            auto eval = [&](const std::vector<BivariateRational::Term>& terms) {
                F acc = 0;
                for (const auto& t : terms) acc += coef(t.coeff) * ipower(plus, t.p_exp) * ipower(minus, t.m_exp);
                return acc;
            };
            return eval(g.f().num) / nonzero(eval(g.f().den));
        }
    }
    throw Error("unknown exchange rule kind");
}

// Copy of the parameter part of an alphabet, keeping indices, plus formal names.
std::pair<Alphabet, std::vector<int>> formal_alphabet(const Alphabet& a, const std::vector<std::string>& formal) {
    Alphabet out;
    for (int v = 0; v < a.size(); ++v) out.add(a.is_parameter(v) ? a.name(v) : "_v" + std::to_string(v), a.is_parameter(v));
    std::vector<int> idx;
    for (const auto& f : formal) {
        if (out.find(f)) throw Error("formal variable '" + f + "' clashes with a parameter name");
        idx.push_back(out.add(f));
    }
    return {out, idx};
}

void require_only(const RatFunc& f, const Alphabet& a, const std::vector<int>& formal) {
    for (int v : f.variables())
        if (!a.is_parameter(v) && std::find(formal.begin(), formal.end(), v) == formal.end())
            throw ParseError("exchange rule uses non-parameter variable '" + a.name(v) + "'");
}

std::vector<RatFunc> coefficient_list(const Poly& p, int v) {
    int shift = 0;
    auto cs = p.coefficients_in(v, &shift);
    std::vector<RatFunc> out(static_cast<std::size_t>(shift), RatFunc(0));
    for (const auto& c : cs) out.emplace_back(c);
    return out;
}

std::vector<BivariateRational::Term> bivariate_terms(const Poly& p, int pv, int mv) {
    std::vector<BivariateRational::Term> out;
    for (const auto& t : p.terms()) {
        Monomial rest = t.mono;
        rest.set(pv, 0);
        rest.set(mv, 0);
        out.push_back({RatFunc(Poly::monomial(rest, t.coeff)), t.mono[pv], t.mono[mv]});
    }
    return out;
}

std::vector<int> free_indices(const std::vector<int>& used, int count) {
    std::vector<int> out;
    for (int v = kMaxVars - 1; v >= 0 && static_cast<int>(out.size()) < count; --v)
        if (std::find(used.begin(), used.end(), v) == used.end()) out.push_back(v);
    if (static_cast<int>(out.size()) < count) throw Error("no free variable indices left");
    return out;
}

}  // namespace

std::string detail::describe(const RatFunc& f) {
    Alphabet none;
    return none.format(f);
}

GSpec GSpec::affine(RatFunc a, RatFunc b) {
    GSpec g;
    g.kind_ = Kind::affine;
    g.coeffs_ = {std::move(a), std::move(b)};
    return g;
}

GSpec GSpec::moebius(RatFunc a1, RatFunc a2, RatFunc a3) {
    GSpec g;
    g.kind_ = Kind::moebius;
    g.coeffs_ = {std::move(a1), std::move(a2), std::move(a3)};
    return g;
}

GSpec GSpec::moebius_x(RatFunc a1, RatFunc a2, RatFunc a3) {
    GSpec g = moebius(std::move(a1), std::move(a2), std::move(a3));
    g.kind_ = Kind::moebius_x;
    return g;
}

GSpec GSpec::custom(UnivariateRational gx) {
    if (gx.den.empty() || std::all_of(gx.den.begin(), gx.den.end(), [](const RatFunc& c) { return c.is_zero(); }))
        throw Error("custom rule: zero denominator");
    GSpec g;
    g.kind_ = Kind::custom;
    g.coeffs_.clear();
    g.g_ = std::move(gx);
    return g;
}

GSpec GSpec::raw_f(BivariateRational f) {
    if (f.den.empty()) throw Error("raw rule: zero denominator");
    GSpec g;
    g.kind_ = Kind::raw_f;
    g.coeffs_.clear();
    g.f_ = std::move(f);
    return g;
}

GSpec GSpec::parse_custom(const Alphabet& alphabet, const std::string& g_of_x) {
    auto [a, idx] = formal_alphabet(alphabet, {"x"});
    RatFunc g = a.parse(g_of_x);
    require_only(g, a, idx);
    return custom({coefficient_list(g.num(), idx[0]), coefficient_list(g.den(), idx[0])});
}

GSpec GSpec::parse_raw_f(const Alphabet& alphabet, const std::string& f_of_pm) {
    auto [a, idx] = formal_alphabet(alphabet, {"P", "M"});
    RatFunc f = a.parse(f_of_pm);
    require_only(f, a, idx);
    return raw_f({bivariate_terms(f.num(), idx[0], idx[1]), bivariate_terms(f.den(), idx[0], idx[1])});
}

std::string GSpec::kind_name() const {
    switch (kind_) {
        case Kind::affine: return "affine";
        case Kind::moebius: return "moebius";
        case Kind::moebius_x: return "moebius_x";
        case Kind::custom: return "custom";
        case Kind::raw_f: return "raw_f";
    }
    return "unknown";
}

std::vector<int> GSpec::parameter_variables() const {
    std::vector<int> vs;
    auto add = [&](const RatFunc& f) {
        for (int v : f.variables())
            if (std::find(vs.begin(), vs.end(), v) == vs.end()) vs.push_back(v);
    };
    for (const auto& c : coeffs_) add(c);
    for (const auto& c : g_.num) add(c);
    for (const auto& c : g_.den) add(c);
    for (const auto& t : f_.num) add(t.coeff);
    for (const auto& t : f_.den) add(t.coeff);
    std::sort(vs.begin(), vs.end());
    return vs;
}

bool GSpec::is_homogeneous() const {
    auto idx = free_indices(parameter_variables(), 3);
    RatFunc p = RatFunc::variable(idx[0]);
    RatFunc m = RatFunc::variable(idx[1]);
    RatFunc l = RatFunc::variable(idx[2]);
    return exchange(l * p, l * m, {}) == l * exchange(p, m, {});
}

GSpec GSpec::specialized(const Bindings& b) const {
    GSpec g = *this;
    for (auto& c : g.coeffs_) c = bind_parameters(c, b);
    for (auto& c : g.g_.num) c = bind_parameters(c, b);
    for (auto& c : g.g_.den) c = bind_parameters(c, b);
    for (auto& t : g.f_.num) t.coeff = bind_parameters(t.coeff, b);
    for (auto& t : g.f_.den) t.coeff = bind_parameters(t.coeff, b);
    return g;
}

RatFunc GSpec::exchange(const RatFunc& plus, const RatFunc& minus, const Bindings& b) const {
    return exchange_generic<RatFunc>(*this, plus, minus, [&](const RatFunc& c) { return bind_parameters(c, b); });
}

Rational GSpec::exchange(const Rational& plus, const Rational& minus, const Bindings& b) const {
    return exchange_generic<Rational>(*this, plus, minus, [&](const RatFunc& c) { return evaluate(c, b); });
}

ClusterMap::ClusterMap(ExchangeMatrix b, MutationWord word, std::map<int, GSpec> rules, bool require_invariance)
    : b_(std::move(b)), word_(std::move(word)), rules_(std::move(rules)) {
    word_.validate(b_.n_mutable());
    for (const auto& [k, g] : rules_)
        if (k < 1 || k > b_.n_mutable()) throw Error("cluster map: rule for non-mutable node " + std::to_string(k));
    if (require_invariance && !check_word_invariance(b_, word_).invariant)
        throw Error("cluster map: the mutation word does not leave the exchange matrix invariant");
}

const GSpec& ClusterMap::rule(int node) const {
    auto it = rules_.find(node);
    return it == rules_.end() ? undeformed_ : it->second;
}

ClusterMap ClusterMap::repeated(int times) const {
    if (times < 1) throw Error("repeated: need at least one pass");
    MutationWord w;
    if (!word_.permutation) {
        for (int t = 0; t < times; ++t) w.indices.insert(w.indices.end(), word_.indices.begin(), word_.indices.end());
        return ClusterMap(b_, w, rules_);
    }
    // Pass j acts on nodes relabeled by rho^j, so its indices are rho^-j(w).
    const Permutation& rho = *word_.permutation;
    for (const auto& [k, g] : rules_)
        for (const auto& [k2, g2] : rules_)
            if (g.kind() != g2.kind() || g.coefficients() != g2.coefficients())
                throw Error("repeated: node rules must agree when the word carries a permutation");
    if (!rules_.empty() && static_cast<int>(rules_.size()) != b_.n_mutable())
        throw Error("repeated: node rules must cover every node when the word carries a permutation");
    Permutation shift = Permutation::identity(rho.size());
    Permutation rho_inv = rho.inverse();
    for (int t = 0; t < times; ++t) {
        for (int k : word_.indices) w.indices.push_back(shift(k));
        shift = rho_inv * shift;
    }
    Permutation total = Permutation::identity(rho.size());
    for (int t = 0; t < times; ++t) total = rho * total;
    w.permutation = total;
    return ClusterMap(b_, w, rules_);
}

std::vector<RatFunc> symbolic_images(const ClusterMap& m, const std::vector<RatFunc>& cluster,
                                     const Bindings& bindings) {
    auto out = apply_map(m, cluster, bindings);
    out.resize(static_cast<std::size_t>(m.matrix().n_mutable()));
    return out;
}

RationalMap::RationalMap(std::vector<int> coords, std::vector<Update> updates)
    : coords_(std::move(coords)), updates_(std::move(updates)) {
    for (const auto& u : updates_)
        if (std::find(coords_.begin(), coords_.end(), u.var) == coords_.end())
            throw Error("rational map: update targets a non-coordinate variable");
}

RationalMap RationalMap::simultaneous(std::vector<int> coords, std::vector<RatFunc> components) {
    if (coords.size() != components.size()) throw Error("rational map: component count mismatch");
    RationalMap m;
    m.coords_ = std::move(coords);
    m.simultaneous_ = true;
    m.components_ = std::move(components);
    return m;
}

std::vector<Rational> RationalMap::apply(const std::vector<Rational>& point, const Bindings& bindings) const {
    if (point.size() != coords_.size()) throw Error("rational map: point has wrong dimension");
    Point current = bindings;
    for (std::size_t i = 0; i < coords_.size(); ++i) current[coords_[i]] = point[i];
    try {
        if (simultaneous_) {
            std::vector<Rational> out;
            for (const auto& c : components_) out.push_back(evaluate(c, current));
            return out;
        }
        for (const auto& u : updates_) current[u.var] = evaluate(u.expr, current);
    } catch (const SingularValue& e) {
        throw SingularError(std::string("singular point of the rational map: ") + e.what(), -1);
    }
    std::vector<Rational> out;
    for (int v : coords_) out.push_back(current.at(v));
    return out;
}

std::vector<RatFunc> RationalMap::symbolic(const Bindings& bindings) const {
    if (simultaneous_) {
        std::vector<RatFunc> out;
        for (const auto& c : components_) out.push_back(bind_parameters(c, bindings));
        return out;
    }
    std::map<int, RatFunc> current;
    for (int v : coords_) current.emplace(v, RatFunc::variable(v));
    for (const auto& u : updates_) {
        Assignment a;
        for (const auto& [v, f] : current) a.emplace(v, f);
        for (const auto& [v, q] : bindings)
            if (!a.count(v)) a.emplace(v, RatFunc(q));
        current[u.var] = substitute(u.expr, a);
    }
    std::vector<RatFunc> out;
    for (int v : coords_) out.push_back(current.at(v));
    return out;
}

std::vector<RatFunc> RationalMap::compose(const std::vector<int>& coords, const std::vector<RatFunc>& first,
                                          const std::vector<RatFunc>& second) {
    Assignment a;
    for (std::size_t i = 0; i < coords.size(); ++i) a.emplace(coords[i], first[i]);
    std::vector<RatFunc> out;
    for (const auto& s : second) out.push_back(substitute(s, a));
    return out;
}

namespace {

template <class Step>
OrbitRecord iterate(const std::vector<Rational>& seed, int steps, std::size_t compared, Step step) {
    OrbitRecord o;
    o.points.push_back(seed);
    auto same = [&](const std::vector<Rational>& a) {
        return std::equal(a.begin(), a.begin() + static_cast<long>(compared), seed.begin());
    };
    for (int n = 1; n <= steps; ++n) {
        try {
            o.points.push_back(step(o.points.back(), n));
        } catch (const SingularError& e) {
            o.singular = true;
            o.singular_step = n;
            o.singular_message = e.what();
            break;
        }
        if (!o.period && same(o.points.back())) o.period = n;
    }
    return o;
}

}  // namespace

OrbitRecord iterate_orbit(const ClusterMap& m, const std::vector<Rational>& seed, int steps,
                          const Bindings& bindings) {
    if (static_cast<int>(seed.size()) != m.matrix().rows()) throw Error("iterate_orbit: seed length mismatch");
    return iterate(seed, steps, static_cast<std::size_t>(m.matrix().n_mutable()),
                   [&](const std::vector<Rational>& x, int n) { return apply_map(m, x, bindings, n); });
}

OrbitRecord iterate_orbit(const RationalMap& m, const std::vector<Rational>& seed, int steps,
                          const Bindings& bindings) {
    return iterate(seed, steps, seed.size(), [&](const std::vector<Rational>& x, int n) {
        try {
            return m.apply(x, bindings);
        } catch (const SingularError& e) {
            throw SingularError("step " + std::to_string(n) + ": " + e.what(), -1, n);
        }
    });
}

ZMatrix MonomialProjection::exponent_matrix() const {
    ZMatrix out;
    for (const auto& r : rows_) {
        ZVector z;
        for (long e : r) z.emplace_back(e);
        out.push_back(std::move(z));
    }
    return out;
}

bool MonomialProjection::rows_in_image(const ExchangeMatrix& b) const {
    ZMatrix image = integer_kernel_image(b).image;
    for (const auto& r : exponent_matrix()) {
        if (static_cast<int>(r.size()) != b.n_mutable()) return false;
        if (!in_rational_span(image, r)) return false;
    }
    return true;
}

std::vector<Rational> MonomialProjection::apply(const std::vector<Rational>& x) const {
    std::vector<Rational> out;
    for (const auto& r : rows_) {
        Rational y = 1;
        for (std::size_t i = 0; i < r.size(); ++i) {
            if (r[i] == 0) continue;
            if (x.at(i) == 0) throw SingularError("projection of a zero cluster entry", static_cast<int>(i) + 1);
            y *= qpow(x[i], r[i]);
        }
        out.push_back(y);
    }
    return out;
}

std::vector<RatFunc> MonomialProjection::apply(const std::vector<RatFunc>& x) const {
    std::vector<RatFunc> out;
    for (const auto& r : rows_) {
        RatFunc y = 1;
        for (std::size_t i = 0; i < r.size(); ++i)
            if (r[i] != 0) y *= x.at(i).pow(r[i]);
        out.push_back(y);
    }
    return out;
}

OrbitRecord project_orbit(const MonomialProjection& p, const OrbitRecord& o) {
    OrbitRecord out;
    out.singular = o.singular;
    out.singular_step = o.singular_step;
    out.singular_message = o.singular_message;
    for (const auto& x : o.points) {
        out.points.push_back(p.apply(x));
        if (!out.period && out.points.size() > 1 && out.points.back() == out.points.front())
            out.period = static_cast<int>(out.points.size()) - 1;
    }
    return out;
}

std::vector<Rational> shift_sequence(const OrbitRecord& o, int width) {
    if (o.points.empty()) return {};
    auto w = static_cast<std::size_t>(width);
    std::vector<Rational> seq(o.points[0].begin(), o.points[0].begin() + width);
    for (std::size_t n = 1; n < o.points.size(); ++n) {
        for (std::size_t i = 0; i + 1 < w; ++i)
            if (o.points[n][i] != o.points[n - 1][i + 1]) throw Error("shift_sequence: orbit is not a shift");
        seq.push_back(o.points[n][w - 1]);
    }
    return seq;
}

bool check_quad_relation(const std::vector<Rational>& x, const Rational& a1, const Rational& a2,
                         const Rational& a3) {
    for (std::size_t n = 0; n + 4 < x.size(); ++n) {
        Rational lhs = a1 * (x[n] * x[n + 4] - x[n + 1] * x[n + 3]) + a2 * x[n] * x[n + 1] * x[n + 3] * x[n + 4];
        if (lhs != a3) return false;
    }
    return true;
}

}  // namespace defmut
