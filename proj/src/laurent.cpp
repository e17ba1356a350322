#include "defmut/laurent.hpp"

#include "defmut/gcd.hpp"

#include <algorithm>
#include <random>
#include <regex>

namespace defmut {

namespace {

std::string trim(const std::string& s) {
    auto a = s.find_first_not_of(" \t");
    auto b = s.find_last_not_of(" \t");
    return a == std::string::npos ? "" : s.substr(a, b - a + 1);
}

// Splits at a separator outside parentheses and brackets.
std::vector<std::string> split_top(const std::string& s, char sep) {
    std::vector<std::string> out;
    int depth = 0;
    std::string cur;
    for (char c : s) {
        if (c == '(' || c == '[') ++depth;
        if (c == ')' || c == ']') --depth;
        if (c == sep && depth == 0) {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(trim(cur));
    return out;
}

std::optional<SeqFactor> parse_factor(const std::string& token) {
    static const std::regex re(R"(^\s*([A-Za-z_][A-Za-z0-9_]*)\s*\[\s*n\s*(?:([+-])\s*(\d+))?\s*\]\s*$)");
    std::smatch m;
    if (!std::regex_match(token, m, re)) return std::nullopt;
    int shift = m[3].matched ? std::stoi(m[3].str()) : 0;
    if (m[2].matched && m[2].str() == "-") shift = -shift;
    return SeqFactor{m[1].str(), shift};
}

template <class F>
F multiply_factors(const TauOrbit<F>& o, const std::vector<SeqFactor>& fs, int n) {
    F p = 1;
    for (const auto& f : fs) p *= o.at(f.seq, n + f.shift);
    return p;
}

struct Solve {
    const SeqFactor* unknown;
    const SeqFactor* cofactor;
};

template <class F>
Solve pick_unknown(const BilinearEquation& eq, const TauOrbit<F>& o, int n) {
    bool k0 = o.has(eq.lhs[0].seq, n + eq.lhs[0].shift);
    bool k1 = o.has(eq.lhs[1].seq, n + eq.lhs[1].shift);
    if (k0 == k1)
        throw Error("bilinear system: equation at n=" + std::to_string(n) +
                    (k0 ? " has no unknown" : " has two unknowns") + " on its left side");
    return k0 ? Solve{&eq.lhs[1], &eq.lhs[0]} : Solve{&eq.lhs[0], &eq.lhs[1]};
}

std::string window_variable(const std::string& seq, int index) {
    return seq + "_" + (index < 0 ? "m" + std::to_string(-index) : std::to_string(index));
}

// rhs / cofactor, using exact Laurent division when both are Laurent.
RatFunc laurent_quotient(const RatFunc& rhs, const RatFunc& cof) {
    if (cof.is_zero()) throw BilinearSingular("bilinear system: zero cofactor");
    LaurentForm r = laurent_normal_form(rhs);
    LaurentForm c = laurent_normal_form(cof);
    if (r.is_laurent && c.is_laurent) {
        Monomial cm = c.value.min_exponents();
        Poly cp = c.value.times_monomial(cm.pow(-1));
        Monomial rm = r.value.min_exponents();
        Poly rp = r.value.times_monomial(rm.pow(-1));
        if (auto q = divide_exact(rp, cp)) return RatFunc(q->times_monomial(rm / cm));
    }
    return rhs / cof;
}

bool coefficients_positive(const Poly& p) {
    return std::all_of(p.terms().begin(), p.terms().end(), [](const Poly::Term& t) { return t.coeff > 0; });
}

}  // namespace

BilinearSystem::BilinearSystem(std::vector<BilinearEquation> equations,
                               std::map<std::string, std::pair<int, int>> window)
    : equations_(std::move(equations)), window_(std::move(window)) {
    for (const auto& [s, w] : window_)
        if (w.first > w.second) throw Error("bilinear system: empty window for '" + s + "'");
    auto known = [&](const std::string& s) { return window_.count(s) > 0; };
    for (const auto& eq : equations_) {
        for (const auto& f : eq.lhs)
            if (!known(f.seq)) throw Error("bilinear system: sequence '" + f.seq + "' has no initial window");
        for (const auto& t : eq.rhs)
            for (const auto& f : t.factors)
                if (!known(f.seq)) throw Error("bilinear system: sequence '" + f.seq + "' has no initial window");
    }
}

std::vector<std::pair<std::string, int>> BilinearSystem::initial_labels() const {
    std::vector<std::pair<std::string, int>> out;
    for (const auto& [s, w] : window_)
        for (int i = w.first; i <= w.second; ++i) out.emplace_back(s, i);
    return out;
}

BilinearEquation BilinearSystem::parse_equation(const Alphabet& params, const std::string& text) {
    auto sides = split_top(text, '=');
    if (sides.size() != 2) throw ParseError("bilinear equation needs exactly one '=': " + text);
    BilinearEquation eq;
    auto lhs = split_top(sides[0], '*');
    if (lhs.size() != 2) throw ParseError("bilinear equation: left side must be a product of two factors: " + text);
    for (int i = 0; i < 2; ++i) {
        auto f = parse_factor(lhs[static_cast<std::size_t>(i)]);
        if (!f) throw ParseError("bilinear equation: bad factor '" + lhs[static_cast<std::size_t>(i)] + "'");
        eq.lhs[i] = *f;
    }
    for (const auto& term : split_top(sides[1], '+')) {
        if (term.empty()) throw ParseError("bilinear equation: empty term in " + text);
        BilinearTerm t{RatFunc(1), {}};
        for (const auto& tok : split_top(term, '*')) {
            if (auto f = parse_factor(tok)) {
                t.factors.push_back(*f);
            } else {
                t.coeff *= params.parse(tok);
            }
        }
        eq.rhs.push_back(std::move(t));
    }
    return eq;
}

TauOrbit<Rational> constant_window(const BilinearSystem& sys, const Rational& value) {
    TauOrbit<Rational> o;
    for (const auto& [s, i] : sys.initial_labels()) o.values[s][i] = value;
    return o;
}

TauOrbit<Rational> iterate_bilinear(const BilinearSystem& sys, const TauOrbit<Rational>& init, int steps,
                                    const Bindings& params) {
    TauOrbit<Rational> o;
    for (const auto& [s, i] : sys.initial_labels()) o.values[s][i] = init.at(s, i);
    std::vector<std::vector<Rational>> coeffs;
    for (const auto& eq : sys.equations()) {
        std::vector<Rational> cs;
        for (const auto& t : eq.rhs) cs.push_back(evaluate(t.coeff, params));
        coeffs.push_back(std::move(cs));
    }
    for (int n = 0; n < steps; ++n) {
        for (std::size_t e = 0; e < sys.equations().size(); ++e) {
            const auto& eq = sys.equations()[e];
            Solve s = pick_unknown(eq, o, n);
            Rational rhs = 0;
            for (std::size_t t = 0; t < eq.rhs.size(); ++t) rhs += coeffs[e][t] * multiply_factors(o, eq.rhs[t].factors, n);
            const Rational& cof = o.at(s.cofactor->seq, n + s.cofactor->shift);
            if (cof == 0)
                throw BilinearSingular("bilinear system: zero divisor " + s.cofactor->seq + "[" +
                                       std::to_string(n + s.cofactor->shift) + "] in equation " +
                                       std::to_string(e + 1) + " at n=" + std::to_string(n));
            o.values[s.unknown->seq][n + s.unknown->shift] = rhs / cof;
        }
    }
    return o;
}

TauOrbit<RatFunc> iterate_bilinear_symbolic(const BilinearSystem& sys, Alphabet& alphabet, int depth,
                                            std::size_t term_budget, int* depth_reached) {
    TauOrbit<RatFunc> o;
    for (const auto& [s, i] : sys.initial_labels())
        o.values[s][i] = RatFunc::variable(alphabet.add(window_variable(s, i)));
    if (depth_reached) *depth_reached = 0;
    for (int n = 0; n < depth; ++n) {
        for (const auto& eq : sys.equations()) {
            Solve s = pick_unknown(eq, o, n);
            RatFunc rhs;
            for (const auto& t : eq.rhs) rhs += t.coeff * multiply_factors(o, t.factors, n);
            RatFunc v = laurent_quotient(rhs, o.at(s.cofactor->seq, n + s.cofactor->shift));
            o.values[s.unknown->seq][n + s.unknown->shift] = v;
            if (v.term_count() > term_budget) return o;
        }
        if (depth_reached) *depth_reached = n + 1;
    }
    return o;
}

bool LaurentReport::all_laurent() const {
    return !entries.empty() && std::all_of(entries.begin(), entries.end(), [](const auto& e) { return e.laurent; });
}

bool LaurentReport::all_positive() const {
    return !entries.empty() && std::all_of(entries.begin(), entries.end(), [](const auto& e) {
        return e.laurent && e.positive_terms && e.positive_samples;
    });
}

int LaurentReport::first_failure_step() const {
    for (const auto& e : entries)
        if (!e.laurent) return e.step;
    return -1;
}

LaurentReport laurent_property_check(const BilinearSystem& sys, const Alphabet& params, int depth,
                                     const LaurentOptions& options) {
    Alphabet alphabet = params;
    int reached = 0;
    TauOrbit<RatFunc> o = iterate_bilinear_symbolic(sys, alphabet, depth, options.term_budget, &reached);
    LaurentReport report;
    report.depth_reached = reached;
    std::mt19937 rng(options.sample_seed);
    std::uniform_int_distribution<int> dist(1, 9);
    std::vector<std::map<int, Poly>> samples;
    for (int s = 0; s < options.positivity_samples; ++s) {
        std::map<int, Poly> a;
        for (int v : params.parameters()) a.emplace(v, Poly(dist(rng)));
        samples.push_back(std::move(a));
    }
    auto window = sys.window();
    for (const auto& [seq, values] : o.values) {
        for (const auto& [index, value] : values) {
            if (index >= window.at(seq).first && index <= window.at(seq).second) continue;
            LaurentEntry e;
            e.seq = seq;
            e.index = index;
            e.terms = value.term_count();
            if (e.terms > options.term_budget) report.budget_exceeded = true;
            LaurentForm f = laurent_normal_form(value);
            e.laurent = f.is_laurent;
            if (f.is_laurent) {
                e.positive_terms = coefficients_positive(f.value);
                e.positive_samples = true;
                for (const auto& a : samples) {
                    Poly shifted = f.value.times_monomial(f.value.min_exponents().pow(-1));
                    if (!coefficients_positive(substitute(shifted, a))) e.positive_samples = false;
                }
            }
            report.entries.push_back(std::move(e));
        }
    }
    // Step at which each value was produced: the n of the solving equation, plus one.
    TauOrbit<RatFunc> probe;
    for (const auto& [s, i] : sys.initial_labels()) probe.values[s][i] = RatFunc(1);
    std::map<std::pair<std::string, int>, int> produced;
    for (int n = 0; n < depth; ++n)
        for (const auto& eq : sys.equations()) {
            Solve s = pick_unknown(eq, probe, n);
            probe.values[s.unknown->seq][n + s.unknown->shift] = RatFunc(1);
            produced[{s.unknown->seq, n + s.unknown->shift}] = n + 1;
        }
    for (auto& e : report.entries) e.step = produced[{e.seq, e.index}];
    std::stable_sort(report.entries.begin(), report.entries.end(),
                     [](const LaurentEntry& a, const LaurentEntry& b) { return a.step < b.step; });
    return report;
}

OrbitRecord tau_projection(const TauProjection& p, const TauOrbit<Rational>& orbit, int first, int last) {
    OrbitRecord out;
    for (int n = first; n <= last; ++n) {
        std::vector<Rational> point;
        for (const auto& c : p.components) {
            Rational v = 1;
            for (const auto& [f, e] : c.factors) {
                const Rational& t = orbit.at(f.seq, n + f.shift);
                if (t == 0) throw SingularError("tau projection: zero " + f.seq + "[" + std::to_string(n + f.shift) + "]", -1);
                v *= qpow(t, e);
            }
            point.push_back(v);
        }
        out.points.push_back(std::move(point));
        if (!out.period && out.points.size() > 1 && out.points.back() == out.points.front())
            out.period = static_cast<int>(out.points.size()) - 1;
    }
    return out;
}

bool ClusterSequenceReport::ok() const {
    return !blocks.empty() &&
           std::all_of(blocks.begin(), blocks.end(), [](const Block& b) { return b.invariant && b.mismatches.empty(); });
}

ClusterSequenceReport tau_cluster_sequence_check(const ExchangeMatrix& b, const MutationWord& word,
                                                 const std::vector<Rational>& seed, const std::vector<TauLabel>& labels,
                                                 int shift, int blocks, const TauOrbit<Rational>& reference) {
    if (static_cast<int>(labels.size()) != b.n_mutable()) throw Error("cluster sequence: one label per mutable node");
    word.validate(b.n_mutable());
    ClusterSequenceReport report;
    ClusterMap map(b, word, {}, false);
    bool invariant = check_word_invariance(b, word).invariant;
    std::vector<Rational> x = seed;
    for (int blk = 1; blk <= blocks; ++blk) {
        x = apply_map(map, x, {}, blk);
        ClusterSequenceReport::Block r;
        r.invariant = invariant;
        for (int i = 0; i < b.n_mutable(); ++i) {
            const TauLabel& l = labels[static_cast<std::size_t>(i)];
            int idx = l.index + blk * shift;
            if (!reference.has(l.seq, idx)) {
                r.mismatches.push_back("node " + std::to_string(i + 1) + ": reference lacks " + l.seq + "[" +
                                       std::to_string(idx) + "]");
            } else if (reference.at(l.seq, idx) != x[static_cast<std::size_t>(i)]) {
                r.mismatches.push_back("node " + std::to_string(i + 1) + ": expected " + l.seq + "[" +
                                       std::to_string(idx) + "] = " + to_string(reference.at(l.seq, idx)) + ", got " +
                                       to_string(x[static_cast<std::size_t>(i)]));
            }
        }
        report.blocks.push_back(std::move(r));
    }
    return report;
}

}  // namespace defmut
