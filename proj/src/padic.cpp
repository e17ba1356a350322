#include "defmut/padic.hpp"

#include <algorithm>
#include <functional>
#include <mutex>
#include <set>
#include <thread>

namespace defmut {

namespace {

const std::vector<unsigned long>& primes_below(unsigned long bound) {
    static std::mutex guard;
    static std::map<unsigned long, std::vector<unsigned long>> cache;
    std::lock_guard lock(guard);
    auto it = cache.find(bound);
    if (it != cache.end()) return it->second;
    std::vector<bool> composite(bound + 1, false);
    std::vector<unsigned long> out;
    for (unsigned long i = 2; i <= bound; ++i) {
        if (composite[i]) continue;
        out.push_back(i);
        for (unsigned long j = i * i; j <= bound; j += i) composite[j] = true;
    }
    return cache.emplace(bound, std::move(out)).first->second;
}

bool strong_probable_prime(const Integer& n, unsigned long base) {
    Integer d = n - 1;
    unsigned long s = 0;
    while (mpz_even_p(d.get_mpz_t())) {
        d /= 2;
        ++s;
    }
    Integer x;
    Integer a = base;
    mpz_powm(x.get_mpz_t(), a.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
    if (x == 1 || x == n - 1) return true;
    for (unsigned long r = 1; r < s; ++r) {
        x = (x * x) % n;
        if (x == n - 1) return true;
    }
    return false;
}

// Brent's cycle finding on x -> x^2 + c. Returns a nontrivial factor or 0.
Integer pollard_brent(const Integer& n, unsigned long c, unsigned long& budget) {
    if (mpz_even_p(n.get_mpz_t())) return 2;
    Integer y = 2, x, g = 1, q = 1, ys;
    const unsigned long block = 128;
    unsigned long r = 1;
    auto step = [&](Integer& v) { v = (v * v + c) % n; };
    while (g == 1) {
        x = y;
        for (unsigned long i = 0; i < r; ++i) step(y);
        unsigned long k = 0;
        while (k < r && g == 1) {
            ys = y;
            unsigned long lim = std::min(block, r - k);
            for (unsigned long i = 0; i < lim; ++i) {
                step(y);
                Integer diff = abs(x - y);
                q = (q * diff) % n;
            }
            mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
            k += lim;
            if (lim >= budget) {
                budget = 0;
                return 0;
            }
            budget -= lim;
        }
        r *= 2;
    }
    if (g == n) {
        do {
            step(ys);
            Integer diff = abs(x - ys);
            mpz_gcd(g.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
        } while (g == 1);
    }
    return g == n ? Integer(0) : g;
}

void split(const Integer& n, IntegerFactorization& out, unsigned long& budget) {
    if (n == 1) return;
    if (is_probable_prime(n)) {
        ++out.primes[n];
        return;
    }
    for (unsigned long c = 1; c <= 8 && budget > 0; ++c) {
        Integer f = pollard_brent(n, c, budget);
        if (f != 0 && f != 1 && f != n) {
            split(f, out, budget);
            split(n / f, out, budget);
            return;
        }
    }
    out.composites.push_back(n);
}

}  // namespace

bool is_probable_prime(const Integer& n) {
    if (n < 2) return false;
    static const unsigned long witnesses[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41};
    for (unsigned long p : witnesses) {
        if (n == p) return true;
        if (mpz_divisible_ui_p(n.get_mpz_t(), p)) return false;
    }
    for (unsigned long p : witnesses)
        if (!strong_probable_prime(n, p)) return false;
    static const Integer deterministic_limit("3317044064679887385961981");
    if (n < deterministic_limit) return true;
    return mpz_probab_prime_p(n.get_mpz_t(), 30) > 0;
}

IntegerFactorization factor_integer(const Integer& value, unsigned long trial_bound, unsigned long rho_budget) {
    IntegerFactorization out;
    Integer n = abs(value);
    if (n == 0) throw Error("factor_integer: zero has no factorization");
    for (unsigned long p : primes_below(std::max(trial_bound, 2UL))) {
        if (Integer(p) * p > n) break;
        if (!mpz_divisible_ui_p(n.get_mpz_t(), p)) continue;
        int e = 0;
        while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
            mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), p);
            ++e;
        }
        out.primes[Integer(p)] = e;
    }
    split(n, out, rho_budget);
    return out;
}

Rational FactoredRational::value() const {
    Rational v = cofactor * sign;
    for (const auto& [p, e] : factors) v *= qpow(Rational(p), e);
    return v;
}

int FactoredRational::valuation(const Integer& p) const {
    auto it = factors.find(p);
    return it == factors.end() ? 0 : it->second;
}

FactoredRational factor_rational(const Rational& q, unsigned long trial_bound, unsigned long rho_budget) {
    FactoredRational f;
    if (q == 0) {
        f.sign = 0;
        f.cofactor = 0;
        return f;
    }
    f.sign = q < 0 ? -1 : 1;
    auto num = factor_integer(q.get_num(), trial_bound, rho_budget);
    auto den = factor_integer(q.get_den(), trial_bound, rho_budget);
    for (const auto& [p, e] : num.primes) f.factors[p] += e;
    for (const auto& [p, e] : den.primes) f.factors[p] -= e;
    std::erase_if(f.factors, [](const auto& kv) { return kv.second == 0; });
    Integer cn = 1, cd = 1;
    for (const auto& c : num.composites) cn *= c;
    for (const auto& c : den.composites) cd *= c;
    f.cofactor = Rational(cn, cd);
    f.cofactor.canonicalize();
    return f;
}

std::vector<std::vector<FactoredRational>> factor_orbit(const OrbitRecord& o, unsigned long trial_bound,
                                                        unsigned jobs, unsigned long rho_budget) {
    std::vector<std::vector<FactoredRational>> out(o.points.size());
    std::vector<std::pair<std::size_t, std::size_t>> cells;
    for (std::size_t s = 0; s < o.points.size(); ++s) {
        out[s].resize(o.points[s].size());
        for (std::size_t v = 0; v < o.points[s].size(); ++v) cells.emplace_back(s, v);
    }
    primes_below(std::max(trial_bound, 2UL));
    auto work = [&](std::size_t first, std::size_t stride) {
        for (std::size_t i = first; i < cells.size(); i += stride) {
            auto [s, v] = cells[i];
            out[s][v] = factor_rational(o.points[s][v], trial_bound, rho_budget);
        }
    };
    jobs = std::max(1U, jobs);
    if (jobs == 1) {
        work(0, 1);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(work, j, jobs);
    }
    return out;
}

std::vector<int> valuation_series(const std::vector<std::vector<FactoredRational>>& facts, const Integer& p,
                                  std::size_t variable) {
    std::vector<int> out;
    for (const auto& step : facts) out.push_back(variable < step.size() ? step[variable].valuation(p) : 0);
    return out;
}

int ValuationTable::at(const Integer& p, std::size_t variable, int step) const {
    auto it = rows.find(p);
    if (it == rows.end() || step < 0 || step >= steps) return 0;
    return it->second[variable][static_cast<std::size_t>(step)];
}

ValuationTable valuation_table(const std::vector<std::vector<FactoredRational>>& facts,
                               std::vector<std::string> variables, const std::vector<Integer>& primes) {
    ValuationTable t;
    t.variables = std::move(variables);
    t.steps = static_cast<int>(facts.size());
    std::vector<Integer> tracked = primes;
    if (tracked.empty()) {
        std::set<Integer> seen;
        for (const auto& step : facts)
            for (const auto& f : step)
                for (const auto& kv : f.factors) seen.insert(kv.first);
        tracked.assign(seen.begin(), seen.end());
    }
    for (const auto& p : tracked) {
        auto& rows = t.rows[p];
        rows.assign(t.variables.size(), std::vector<int>(facts.size(), 0));
        for (std::size_t v = 0; v < t.variables.size(); ++v) rows[v] = valuation_series(facts, p, v);
    }
    for (std::size_t s = 0; s < facts.size(); ++s)
        for (std::size_t v = 0; v < facts[s].size(); ++v)
            if (!facts[s][v].complete()) t.incomplete.emplace_back(static_cast<int>(s), v);
    return t;
}

SingularityPattern::SingularityPattern(std::string name, const std::vector<std::string>& variables,
                                       const std::map<std::string, std::vector<int>>& rows,
                                       std::optional<TauLink> link)
    : name_(std::move(name)), link_(std::move(link)) {
    std::size_t width = 0;
    for (const auto& [var, row] : rows) {
        if (std::find(variables.begin(), variables.end(), var) == variables.end())
            throw Error("pattern " + name_ + ": unknown variable " + var);
        width = std::max(width, row.size());
    }
    rows_.assign(variables.size(), std::vector<int>(width, 0));
    for (std::size_t v = 0; v < variables.size(); ++v) {
        auto it = rows.find(variables[v]);
        if (it != rows.end()) std::copy(it->second.begin(), it->second.end(), rows_[v].begin());
    }
    auto column_zero = [&](std::size_t c) {
        return std::all_of(rows_.begin(), rows_.end(), [&](const auto& r) { return r[c] == 0; });
    };
    std::size_t lead = 0, trail = width;
    while (lead < trail && column_zero(lead)) ++lead;
    while (trail > lead && column_zero(trail - 1)) --trail;
    if (lead == trail) throw Error("pattern " + name_ + " has no nonzero entry");
    for (auto& r : rows_) r = std::vector<int>(r.begin() + static_cast<long>(lead), r.begin() + static_cast<long>(trail));
    width_ = static_cast<int>(trail - lead);
}

const PrimeClassification* PatternReport::find(const Integer& p) const {
    for (const auto& c : primes)
        if (c.prime == p) return &c;
    return nullptr;
}

namespace {

using Grid = std::vector<std::vector<int>>;  // [variable][step]

// Exact decomposition of a valuation grid into positively scaled, possibly
// clipped library instances. The earliest nonzero cell (step-major) must be
// the earliest visible cell of some instance, which drives the search.
class Decomposer {
public:
    Decomposer(const std::vector<SingularityPattern>& library, int steps) : library_(library), steps_(steps) {}

    std::optional<std::vector<PatternInstance>> run(Grid grid) {
        budget_ = 20000;
        std::vector<PatternInstance> found;
        if (search(grid, found, 0)) return found;
        return std::nullopt;
    }

private:
    bool search(Grid& grid, std::vector<PatternInstance>& found, int depth) {
        auto first = first_nonzero(grid);
        if (!first) return true;
        if (depth > 64 || --budget_ < 0) return false;
        auto [step, var] = *first;
        for (std::size_t pi = 0; pi < library_.size(); ++pi) {
            const auto& pat = library_[pi];
            for (int c = 0; c < pat.width(); ++c) {
                int entry = pat.at(var, c);
                if (entry == 0) continue;
                int start = step - c;
                if (!earlier_cells_hidden(pat, start, c, var)) continue;
                if (grid[var][static_cast<std::size_t>(step)] % entry != 0) continue;
                int full = grid[var][static_cast<std::size_t>(step)] / entry;
                for (int m = full; m >= 1; --m) {
                    apply(grid, pat, start, -m);
                    bool clipped = start < 0 || start + pat.width() > steps_;
                    found.push_back({pi, start, m, clipped});
                    if (search(grid, found, depth + 1)) return true;
                    found.pop_back();
                    apply(grid, pat, start, m);
                }
            }
        }
        return false;
    }

    // Cells of the pattern preceding (c, var) in step-major order must fall
    // before the orbit start, otherwise they would already be nonzero.
    bool earlier_cells_hidden(const SingularityPattern& pat, int start, int c, std::size_t var) const {
        for (int cc = 0; cc <= c; ++cc)
            for (std::size_t v = 0; v < pat.rows().size(); ++v) {
                if (cc == c && v >= var) break;
                if (pat.at(v, cc) != 0 && start + cc >= 0) return false;
            }
        return true;
    }

    void apply(Grid& grid, const SingularityPattern& pat, int start, int m) const {
        for (std::size_t v = 0; v < grid.size(); ++v)
            for (int c = 0; c < pat.width(); ++c) {
                int s = start + c;
                if (s >= 0 && s < steps_) grid[v][static_cast<std::size_t>(s)] += m * pat.at(v, c);
            }
    }

    std::optional<std::pair<int, std::size_t>> first_nonzero(const Grid& grid) const {
        for (int s = 0; s < steps_; ++s)
            for (std::size_t v = 0; v < grid.size(); ++v)
                if (grid[v][static_cast<std::size_t>(s)] != 0) return std::pair{s, v};
        return std::nullopt;
    }

    const std::vector<SingularityPattern>& library_;
    int steps_;
    long budget_ = 0;
};

}  // namespace

PatternReport detect_patterns(const ValuationTable& table, const std::vector<SingularityPattern>& library) {
    for (const auto& pat : library)
        if (pat.rows().size() != table.variables.size())
            throw Error("pattern " + pat.name() + " does not match the table's variables");
    PatternReport report;
    Decomposer decomposer(library, table.steps);
    std::map<PatternInstance, std::vector<Integer>> sharing;
    for (const auto& [p, grid] : table.rows) {
        bool any = std::any_of(grid.begin(), grid.end(),
                               [](const auto& row) { return std::any_of(row.begin(), row.end(), [](int v) { return v != 0; }); });
        if (!any) continue;
        PrimeClassification c{p, "unclassified", "", {}};
        if (auto inst = decomposer.run(grid)) {
            std::sort(inst->begin(), inst->end(),
                      [](const auto& a, const auto& b) { return a.start != b.start ? a.start < b.start : a.pattern < b.pattern; });
            c.instances = *inst;
            bool uniform = std::all_of(inst->begin(), inst->end(),
                                       [&](const auto& i) { return i.pattern == inst->front().pattern; });
            c.classification = uniform ? library[inst->front().pattern].name() : "mixed";
            c.primary = library[inst->front().pattern].name();
            for (const auto& i : *inst)
                if (!i.clipped) sharing[i].push_back(p);
        }
        ++report.counts[c.classification];
        report.primes.push_back(std::move(c));
    }
    for (auto& [inst, ps] : sharing)
        if (ps.size() > 1) report.composites.push_back({ps, inst});
    return report;
}

}  // namespace defmut
