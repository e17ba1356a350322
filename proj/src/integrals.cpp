#include "defmut/integrals.hpp"

#include "defmut/gcd.hpp"
#include "defmut/linalg.hpp"

#include <random>
#include <unordered_map>

namespace defmut {

namespace {

Assignment assignment_of(const std::vector<RatFunc>& phi, const std::vector<int>& coords) {
    if (phi.size() != coords.size()) throw Error("map and coordinate counts differ");
    Assignment a;
    for (std::size_t i = 0; i < coords.size(); ++i) a.emplace(coords[i], phi[i]);
    return a;
}

Poly lcm(const Poly& a, const Poly& b) {
    Poly g = gcd(a, b);
    return divide_or_throw(a, g) * b;
}

}  // namespace

RatFunc integral_defect(const std::vector<RatFunc>& phi, const std::vector<int>& coords, const RatFunc& k) {
    return substitute(k, assignment_of(phi, coords)) - k;
}

bool verify_integral(const std::vector<RatFunc>& phi, const std::vector<int>& coords, const RatFunc& k) {
    return substitute(k, assignment_of(phi, coords)) == k;
}

RatFunc periodic_integral(const std::vector<RatFunc>& phi, const std::vector<int>& coords, const RatFunc& generator,
                          int period, CyclicKind kind) {
    if (period < 1) throw Error("periodic_integral: period must be positive");
    Assignment a = assignment_of(phi, coords);
    RatFunc current = generator;
    RatFunc acc = kind == CyclicKind::sum ? RatFunc(0) : RatFunc(1);
    for (int i = 0; i < period; ++i) {
        acc = kind == CyclicKind::sum ? acc + current : acc * current;
        current = substitute(current, a);
    }
    if (!(current == generator))
        throw Error("periodic_integral: generator does not return after " + std::to_string(period) + " steps");
    if (!verify_integral(phi, coords, acc)) throw Error("periodic_integral: cyclic combination is not invariant");
    return acc;
}

AnsatzSolution search_deformed_integral(const std::vector<RatFunc>& phi, const std::vector<int>& coords,
                                        const MonomialAnsatz& ansatz) {
    if (ansatz.support.empty()) throw Error("search_deformed_integral: empty support");
    if (ansatz.gauge >= ansatz.support.size()) throw Error("search_deformed_integral: gauge index out of range");
    Assignment a = assignment_of(phi, coords);

    std::vector<std::size_t> active;
    for (std::size_t i = 0; i < ansatz.support.size(); ++i)
        if (!(ansatz.free_constant && !ansatz.den_fixed && ansatz.support[i].is_unit())) active.push_back(i);

    std::vector<RatFunc> images;
    for (const auto& m : ansatz.support) images.push_back(substitute(RatFunc(Poly::monomial(m)), a));

    std::vector<std::optional<Rational>> deltas;
    if (ansatz.den_fixed && ansatz.den_scaled) {
        for (const auto& d : ansatz.delta_grid) deltas.emplace_back(d);
        if (deltas.empty()) throw Error("search_deformed_integral: denominator template needs a delta grid");
    } else {
        deltas.emplace_back(std::nullopt);
    }

    AnsatzSolution best;
    for (const auto& delta : deltas) {
        RatFunc den = 1;
        if (ansatz.den_fixed) {
            den = RatFunc(*ansatz.den_fixed);
            if (delta && ansatz.den_scaled) den += RatFunc(*delta) * RatFunc(*ansatz.den_scaled);
            if (den.is_zero()) continue;
        }
        RatFunc den_image = substitute(den, a);
        // Condition per unknown: m(phi) D - m D(phi) over a common denominator.
        std::vector<RatFunc> rows;
        for (std::size_t i : active) rows.push_back(images[i] * den - RatFunc(Poly::monomial(ansatz.support[i])) * den_image);
        Poly common = 1;
        for (const auto& r : rows)
            if (!r.is_zero()) common = lcm(common, r.den());
        std::vector<Poly> nums;
        for (const auto& r : rows) nums.push_back(r.is_zero() ? Poly() : r.num() * divide_or_throw(common, r.den()));
        std::unordered_map<Monomial, std::size_t, MonomialHash> eq_index;
        QMatrix system;
        for (std::size_t col = 0; col < nums.size(); ++col)
            for (const auto& t : nums[col].terms()) {
                auto [it, inserted] = eq_index.try_emplace(t.mono, system.size());
                if (inserted) system.emplace_back(nums.size(), Rational(0));
                system[it->second][col] = Rational(t.coeff);
            }
        std::size_t gauge_col = 0;
        bool gauge_active = false;
        for (std::size_t c = 0; c < active.size(); ++c)
            if (active[c] == ansatz.gauge) {
                gauge_col = c;
                gauge_active = true;
            }
        if (!gauge_active) throw Error("search_deformed_integral: the gauge coefficient is quotiented out");
        // Move the gauge column to the right-hand side.
        QMatrix lhs;
        QVector rhs;
        for (const auto& row : system) {
            QVector r;
            for (std::size_t c = 0; c < row.size(); ++c)
                if (c != gauge_col) r.push_back(row[c]);
            lhs.push_back(std::move(r));
            rhs.push_back(-row[gauge_col]);
        }
        int unknowns = static_cast<int>(active.size()) - 1;
        auto x = solve(lhs, rhs, unknowns);
        if (!x) continue;
        best.solvable_deltas.push_back(delta.value_or(Rational(0)));
        if (best.solvable) continue;
        best.solvable = true;
        best.delta = delta;
        best.nullity = static_cast<int>(nullspace(system, static_cast<int>(active.size())).size());
        best.coefficients.assign(ansatz.support.size(), Rational(0));
        std::size_t k = 0;
        for (std::size_t c = 0; c < active.size(); ++c)
            best.coefficients[active[c]] = c == gauge_col ? Rational(1) : (*x)[k++];
        RatFunc num;
        for (std::size_t i = 0; i < ansatz.support.size(); ++i)
            if (best.coefficients[i] != 0) num += RatFunc(best.coefficients[i]) * RatFunc(Poly::monomial(ansatz.support[i]));
        best.integral = num / den;
    }
    return best;
}

bool functional_independence(const RatFunc& k1, const RatFunc& k2, const std::vector<int>& coords, unsigned seed,
                             int attempts) {
    std::vector<RatFunc> d1, d2;
    for (int v : coords) {
        d1.push_back(k1.derivative(v));
        d2.push_back(k2.derivative(v));
    }
    std::mt19937 rng(seed);
    std::uniform_int_distribution<int> num(1, 97);
    std::uniform_int_distribution<int> den(1, 13);
    int singular = 0;
    for (int t = 0; t < attempts; ++t) {
        Point p;
        for (int v : coords) p[v] = make_rational(num(rng), den(rng));
        try {
            QMatrix j(2);
            for (std::size_t i = 0; i < coords.size(); ++i) {
                j[0].push_back(evaluate(d1[i], p));
                j[1].push_back(evaluate(d2[i], p));
            }
            if (rank(j) == 2) return true;
        } catch (const SingularValue&) {
            ++singular;
        }
    }
    if (singular == attempts) throw Error("functional_independence: every sample point was singular");
    return false;
}

}  // namespace defmut
