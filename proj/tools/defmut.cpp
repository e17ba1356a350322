// Command-line front end. Exit status: 0 when every requested check passes,
// 1 when a check fails, 2 on usage errors.

#include "defmut/geometry.hpp"
#include "defmut/integrals.hpp"
#include "defmut/scenarios.hpp"

#include <CLI11.hpp>

#include <atomic>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

using namespace defmut;

namespace {

constexpr int exit_pass = 0;
constexpr int exit_fail = 1;
constexpr int exit_usage = 2;

class UsageError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct Common {
    std::string scenario;
    std::string map;
    std::vector<std::string> set;
    std::string seed;
    std::optional<int> steps;
    std::string out;
    std::string format = "text";
    bool symbolic = false;
    int jobs = 1;
};

void add_scenario_arg(CLI::App* cmd, Common& o) {
    cmd->add_option("scenario", o.scenario, "Scenario id")->required();
    cmd->add_option("--map", o.map, "Map of the scenario (default: its first map)");
}

void add_set(CLI::App* cmd, Common& o) {
    cmd->add_option("--set", o.set, "Bind a parameter, e.g. --set c=2 (repeatable)");
}

void add_format(CLI::App* cmd, Common& o, std::vector<std::string> allowed) {
    o.format = allowed.front();
    cmd->add_option("--format", o.format, "Output format")->check(CLI::IsMember(allowed));
    cmd->add_option("--out", o.out, "Write the output to this file instead of standard output");
}

const Scenario& scenario_of(const ScenarioRegistry& reg, const std::string& id) {
    if (!reg.contains(id)) throw UsageError("unknown scenario '" + id + "' (see 'defmut list')");
    return reg.get(id);
}

const ScenarioMap& map_of(const Scenario& sc, const std::string& name) {
    try {
        return sc.map(name);
    } catch (const Error& e) {
        throw UsageError(e.what());
    }
}

NamedBindings overrides_of(const std::vector<std::string>& set) {
    NamedBindings out;
    for (const auto& kv : set) {
        auto eq = kv.find('=');
        if (eq == std::string::npos || eq == 0) throw UsageError("--set expects name=value, got '" + kv + "'");
        try {
            out[kv.substr(0, eq)] = parse_rational(kv.substr(eq + 1));
        } catch (const Error&) {
            throw UsageError("--set " + kv + ": value is not an exact rational");
        }
    }
    return out;
}

NamedBindings bindings_of(const Scenario& sc, const Common& o) {
    try {
        return sc.resolve(overrides_of(o.set));
    } catch (const UsageError&) {
        throw;
    } catch (const Error& e) {
        throw UsageError(e.what());
    }
}

std::vector<Rational> seed_of(const ScenarioMap& m, const Common& o) {
    if (o.seed.empty()) return m.seed();
    std::vector<Rational> s;
    try {
        s = parse_rational_list(o.seed);
    } catch (const Error& e) {
        throw UsageError(std::string("--seed: ") + e.what());
    }
    if (s.size() != m.coords().size())
        throw UsageError("--seed needs " + std::to_string(m.coords().size()) + " values");
    return s;
}

void emit(const Common& o, const std::string& text) {
    if (o.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(o.out);
    if (!f) throw UsageError("cannot write '" + o.out + "'");
    f << text;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

std::string matrix_text(const ExchangeMatrix& b) {
    std::ostringstream s;
    for (int i = 0; i < b.rows(); ++i) {
        if (i == b.n_mutable() && b.n_frozen() > 0) s << "--\n";
        for (int j = 0; j < b.n_mutable(); ++j) s << (j ? " " : "") << b.at(i, j);
        s << "\n";
    }
    return s.str();
}

Json matrix_json(const ExchangeMatrix& b) {
    Json rows = Json::array();
    for (const auto& r : b.entries()) rows.push_back(r);
    return Json{{"rows", rows}, {"n_frozen", b.n_frozen()}};
}

// Subcommands ----------------------------------------------------------------

int run_list(const ScenarioRegistry& reg, const Common& o) {
    if (o.format == "json") {
        Json out = Json::array();
        for (const auto& id : reg.ids()) {
            const auto& sc = reg.get(id);
            out.push_back({{"id", id}, {"description", sc.description()}, {"maps", sc.map_names()},
                           {"parameters", sc.parameter_names()}, {"checks", sc.checks().size()}});
        }
        emit(o, dump(out));
        return exit_pass;
    }
    std::ostringstream s;
    for (const auto& id : reg.ids()) {
        const auto& sc = reg.get(id);
        s << id << "  (" << sc.checks().size() << " checks; maps " << CLI::detail::join(sc.map_names(), ", ")
          << ")\n    " << sc.description() << "\n";
    }
    emit(o, s.str());
    return exit_pass;
}

std::string report_text(const ScenarioReport& r) {
    std::ostringstream s;
    s << "scenario " << r.id << ":";
    for (const auto& [k, v] : r.parameters) s << " " << k << "=" << rational_string(v);
    s << "\n";
    for (const auto& c : r.checks) s << "  " << status_name(c.status) << "  " << c.name << ": " << c.detail << "\n";
    s << "  " << r.count(CheckStatus::pass) << " passed, " << r.count(CheckStatus::fail) << " failed, "
      << r.count(CheckStatus::skip) << " skipped\n";
    return s.str();
}

int run_scenarios(const ScenarioRegistry& reg, const Common& o, std::vector<std::string> ids,
                  const std::vector<std::string>& only, std::optional<int> depth) {
    if (ids.size() == 1 && ids[0] == "all") ids = reg.ids();
    for (const auto& id : ids) scenario_of(reg, id);
    RunOptions opt;
    if (!o.set.empty()) {
        if (ids.size() != 1) throw UsageError("--set applies to a single scenario");
        opt.set = bindings_of(reg.get(ids[0]), o);
    }
    if (!o.seed.empty()) {
        if (ids.size() != 1) throw UsageError("--seed applies to a single scenario");
        opt.seed = seed_of(map_of(reg.get(ids[0]), ""), o);
    }
    opt.steps = o.steps;
    opt.depth = depth;
    opt.only = only;
    std::vector<std::optional<ScenarioReport>> reports(ids.size());
    std::vector<std::string> errors(ids.size());
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < ids.size(); i = next++) {
            try {
                reports[i] = run_scenario(reg, ids[i], opt);
            } catch (const std::exception& e) {
                errors[i] = e.what();
            }
        }
    };
    {
        std::vector<std::jthread> pool;
        int n = std::max(1, std::min<int>(o.jobs, static_cast<int>(ids.size())));
        for (int t = 1; t < n; ++t) pool.emplace_back(work);
        work();
    }
    bool ok = true;
    Json all = Json::array();
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (!reports[i]) {
            std::cerr << "scenario " << ids[i] << ": " << errors[i] << "\n";
            ok = false;
            continue;
        }
        ok = ok && reports[i]->passed();
        if (o.format == "text") std::cout << report_text(*reports[i]);
        all.push_back(reports[i]->to_json());
    }
    Json doc = all.size() == 1 ? all[0] : all;
    if (o.format == "json" && o.out.empty()) std::cout << dump(doc);
    if (!o.out.empty()) emit(o, dump(doc));
    return ok ? exit_pass : exit_fail;
}

int run_mutate(const ScenarioRegistry& reg, const Common& o, const std::string& matrix, const std::string& rows,
               const std::string& at) {
    ExchangeMatrix b;
    if (!rows.empty()) {
        Json j;
        try {
            j = Json::parse(rows);
            std::vector<std::vector<long>> r = j.get<std::vector<std::vector<long>>>();
            b = ExchangeMatrix::square(std::move(r));
        } catch (const std::exception& e) {
            throw UsageError(std::string("--rows: ") + e.what());
        }
    } else {
        if (o.scenario.empty()) throw UsageError("give a scenario or --rows");
        const auto& sc = scenario_of(reg, o.scenario);
        if (!matrix.empty()) {
            if (!sc.has_matrix(matrix)) throw UsageError("scenario '" + o.scenario + "' has no matrix '" + matrix + "'");
            b = sc.matrix(matrix);
        } else {
            b = map_of(sc, o.map).cluster().matrix();
        }
    }
    std::vector<int> ks;
    try {
        ks = at.empty() ? std::vector<int>{} : parse_indices(at);
    } catch (const Error& e) {
        throw UsageError(std::string("--at: ") + e.what());
    }
    for (int k : ks) {
        if (k < 1 || k > b.n_mutable()) throw UsageError("--at: node " + std::to_string(k) + " out of range");
        b = mutate_matrix(b, k);
    }
    if (o.format == "json") emit(o, dump(matrix_json(b)));
    else if (o.format == "dot") emit(o, export_dot(b));
    else emit(o, matrix_text(b));
    return exit_pass;
}

int run_orbit(const ScenarioRegistry& reg, const Common& o, bool factor) {
    const auto& sc = scenario_of(reg, o.scenario);
    const auto& m = map_of(sc, o.map);
    if (m.kind() == ScenarioMap::Kind::bilinear) throw UsageError("use tau-run for bilinear systems");
    OrbitRecord orbit = m.orbit(seed_of(m, o), o.steps.value_or(sc.report_steps()), sc.to_point(bindings_of(sc, o)));
    if (orbit.singular) std::cerr << "orbit stopped: " << orbit.singular_message << "\n";
    auto names = m.coord_names();
    if (o.format == "csv") {
        emit(o, orbit_to_csv(orbit, names));
    } else {
        Json j = orbit_to_json(orbit, names);
        if (factor) {
            Json fac = Json::array();
            for (const auto& row : factor_orbit(orbit, 100000, static_cast<unsigned>(o.jobs), 20000)) {
                Json r = Json::array();
                for (const auto& f : row) r.push_back(format_factored(f));
                fac.push_back(r);
            }
            j["factorizations"] = fac;
        }
        emit(o, dump(j));
    }
    return orbit.singular ? exit_fail : exit_pass;
}

Assignment assignment_of(const Scenario& sc, const NamedBindings& named) {
    Assignment out;
    for (const auto& [k, v] : named) out[sc.alphabet().index(k)] = RatFunc(v);
    return out;
}

std::vector<RatFunc> images_of(const Scenario& sc, const ScenarioMap& m, const Common& o) {
    if (o.symbolic || o.set.empty()) return m.symbolic();
    return m.symbolic(sc.to_point(bindings_of(sc, o)));
}

int run_verify_form(const ScenarioRegistry& reg, const Common& o) {
    const auto& sc = scenario_of(reg, o.scenario);
    const auto& m = map_of(sc, o.map);
    auto omega = m.form_matrix();
    if (!omega) throw UsageError("map '" + m.name() + "' has no attached form");
    bool ok = pullback_form_check(images_of(sc, m, o), m.coords(), LogCanonicalForm(*omega));
    std::cout << (ok ? "form preserved" : "form NOT preserved") << "\n";
    return ok ? exit_pass : exit_fail;
}

int run_verify_integral(const ScenarioRegistry& reg, const Common& o, const std::string& expr,
                        const std::string& orbit_file) {
    const auto& sc = scenario_of(reg, o.scenario);
    const auto& m = map_of(sc, o.map);
    RatFunc k;
    try {
        k = sc.parse(expr);
    } catch (const Error& e) {
        throw UsageError(std::string("--expr: ") + e.what());
    }
    if (orbit_file.empty()) {
        if (!o.symbolic && !o.set.empty()) k = substitute(k, assignment_of(sc, bindings_of(sc, o)));
        bool ok = verify_integral(images_of(sc, m, o), m.coords(), k);
        std::cout << (ok ? "integral preserved" : "integral NOT preserved") << "\n";
        return ok ? exit_pass : exit_fail;
    }
    std::ifstream in(orbit_file);
    if (!in) throw UsageError("cannot read '" + orbit_file + "'");
    std::stringstream text;
    text << in.rdbuf();
    std::vector<std::string> names;
    OrbitRecord orbit = orbit_from_csv(text.str(), &names);
    if (names != m.coord_names()) throw UsageError("orbit columns do not match the coordinates of map '" + m.name() + "'");
    Bindings params = sc.to_point(bindings_of(sc, o));
    std::optional<Rational> first;
    bool constant = true;
    for (const auto& p : orbit.points) {
        Point at = params;
        for (std::size_t i = 0; i < p.size(); ++i) at[m.coords()[i]] = p[i];
        Rational v = evaluate(k, at);
        if (!first) first = v;
        constant = constant && v == *first;
    }
    if (!first) throw UsageError("orbit file has no points");
    std::cout << (constant ? "constant " : "NOT constant, starts at ") << rational_string(*first) << " over "
              << orbit.steps() << " steps\n";
    return constant ? exit_pass : exit_fail;
}

int run_search_integral(const ScenarioRegistry& reg, const Common& o, const std::string& support, std::size_t gauge,
                        bool free_constant, const std::string& den_fixed, const std::string& den_scaled,
                        std::pair<long, long> grid) {
    const auto& sc = scenario_of(reg, o.scenario);
    const auto& m = map_of(sc, o.map);
    NamedBindings named = bindings_of(sc, o);
    Bindings point = sc.to_point(named);
    Assignment values = assignment_of(sc, named);
    auto laurent_of = [&](const std::string& text, const char* what) {
        LaurentForm lf;
        try {
            lf = laurent_normal_form(substitute(sc.parse(text), values));
        } catch (const Error& e) {
            throw UsageError(std::string(what) + ": " + e.what());
        }
        if (!lf.is_laurent) throw UsageError(std::string(what) + ": '" + text + "' is not a Laurent polynomial");
        return lf.value;
    };
    MonomialAnsatz a;
    std::stringstream ss(support);
    for (std::string item; std::getline(ss, item, ',');) {
        Poly p = laurent_of(item, "--support");
        if (!p.is_monomial()) throw UsageError("--support: '" + item + "' is not a monomial");
        a.support.push_back(p.terms()[0].mono);
    }
    if (a.support.empty()) throw UsageError("--support is empty");
    if (gauge >= a.support.size()) throw UsageError("--gauge out of range");
    a.gauge = gauge;
    a.free_constant = free_constant;
    if (!den_fixed.empty()) a.den_fixed = laurent_of(den_fixed, "--den-fixed");
    if (!den_scaled.empty()) {
        a.den_scaled = laurent_of(den_scaled, "--den-scaled");
        for (long d = grid.first; d <= grid.second; ++d) a.delta_grid.emplace_back(d);
    }
    AnsatzSolution sol = search_deformed_integral(m.symbolic(point), m.coords(), a);
    Json j = Json::object();
    j["solvable"] = sol.solvable;
    if (sol.solvable) {
        j["coefficients"] = rationals_to_json(sol.coefficients);
        j["nullity"] = sol.nullity;
        if (sol.delta) j["delta"] = rational_string(*sol.delta);
        j["integral"] = sc.alphabet().format(sol.integral);
    }
    if (o.format == "json") {
        emit(o, dump(j));
    } else {
        std::ostringstream s;
        s << (sol.solvable ? "solvable" : "unsolvable") << "\n";
        if (sol.solvable) {
            s << "coefficients: " << j["coefficients"].dump() << "\n";
            if (sol.delta) s << "delta: " << rational_string(*sol.delta) << "\n";
            s << "integral: " << j["integral"].get<std::string>() << "\n";
        }
        emit(o, s.str());
    }
    return sol.solvable ? exit_pass : exit_fail;
}

int run_laurent(const ScenarioRegistry& reg, const Common& o, int depth) {
    const auto& sc = scenario_of(reg, o.scenario);
    std::string name = o.map;
    if (name.empty())
        for (const auto& n : sc.map_names())
            if (sc.map(n).kind() == ScenarioMap::Kind::bilinear) {
                name = n;
                break;
            }
    const auto& m = map_of(sc, name);
    if (m.kind() != ScenarioMap::Kind::bilinear) throw UsageError("map '" + m.name() + "' is not a bilinear system");
    LaurentReport r = laurent_property_check(m.bilinear(), sc.alphabet(), depth);
    if (o.format == "json") {
        emit(o, dump(laurent_report_to_json(r)));
    } else {
        std::ostringstream s;
        for (const auto& e : r.entries)
            s << "  " << e.seq << "[" << e.index << "] step " << e.step << ": "
              << (e.laurent ? "Laurent" : "NOT Laurent") << (e.laurent && e.positive_terms ? ", positive" : "") << ", "
              << e.terms << " terms\n";
        s << (r.all_laurent() ? "all Laurent" : "NOT all Laurent") << " to depth " << r.depth_reached
          << (r.all_laurent() && r.all_positive() ? ", positive coefficients" : "") << "\n";
        emit(o, s.str());
    }
    return r.all_laurent() && r.depth_reached == depth && !r.budget_exceeded ? exit_pass : exit_fail;
}

const ScenarioMap& bilinear_map(const Scenario& sc, const std::string& name) {
    if (!name.empty()) return map_of(sc, name);
    for (const auto& n : sc.map_names())
        if (sc.map(n).kind() == ScenarioMap::Kind::bilinear) return sc.map(n);
    throw UsageError("scenario '" + sc.id() + "' has no bilinear system");
}

int run_tau(const ScenarioRegistry& reg, const Common& o) {
    const auto& sc = scenario_of(reg, o.scenario);
    const auto& m = bilinear_map(sc, o.map);
    auto orbit = m.tau_orbit(o.steps.value_or(sc.report_steps()), sc.to_point(bindings_of(sc, o)));
    if (o.format == "csv") {
        std::ostringstream s;
        s << "seq,index,value\n";
        for (const auto& [seq, vals] : orbit.values)
            for (const auto& [i, v] : vals) s << seq << "," << i << "," << rational_string(v) << "\n";
        emit(o, s.str());
    } else if (o.format == "json") {
        Json j = Json::object();
        for (const auto& [seq, vals] : orbit.values) {
            Json s = Json::object();
            for (const auto& [i, v] : vals) s[std::to_string(i)] = rational_string(v);
            j[seq] = s;
        }
        emit(o, dump(j));
    } else {
        std::ostringstream s;
        for (const auto& [seq, vals] : orbit.values) {
            s << seq << ":";
            for (const auto& [i, v] : vals) s << " " << rational_string(v);
            s << "\n";
        }
        emit(o, s.str());
    }
    return exit_pass;
}

int run_padic(const ScenarioRegistry& reg, const Common& o) {
    const auto& sc = scenario_of(reg, o.scenario);
    const auto& m = map_of(sc, o.map);
    if (m.kind() == ScenarioMap::Kind::bilinear) throw UsageError("padic-report needs a cluster or rational map");
    OrbitRecord orbit = m.orbit(seed_of(m, o), o.steps.value_or(sc.report_steps()), sc.to_point(bindings_of(sc, o)));
    if (orbit.singular) std::cerr << "orbit stopped: " << orbit.singular_message << "\n";
    auto facts = factor_orbit(orbit, 1000000, static_cast<unsigned>(std::max(1, o.jobs)));
    auto names = m.coord_names();
    auto table = valuation_table(facts, names);
    if (o.format == "csv") {
        emit(o, valuation_csv(table));
        return exit_pass;
    }
    auto library = pattern_library(sc, o.map);
    std::optional<PatternReport> report;
    if (library) report = detect_patterns(table, *library);
    if (o.format == "json") {
        Json j = Json::object();
        Json fac = Json::array();
        for (const auto& row : facts) {
            Json r = Json::object();
            for (std::size_t v = 0; v < row.size(); ++v) r[names[v]] = format_factored(row[v]);
            fac.push_back(r);
        }
        j["factorizations"] = fac;
        if (report) j["patterns"] = pattern_report_to_json(*report, *library);
        emit(o, dump(j));
        return exit_pass;
    }
    std::ostringstream s;
    for (std::size_t n = 0; n < facts.size(); ++n) {
        s << "n=" << n;
        for (std::size_t v = 0; v < facts[n].size(); ++v) s << "  " << names[v] << " = " << format_factored(facts[n][v]);
        s << "\n";
    }
    if (report) {
        for (const auto& pc : report->primes) {
            s << "  p=" << pc.prime.get_str() << ": " << pc.classification;
            for (const auto& inst : pc.instances) {
                s << " [" << (*library)[inst.pattern].name() << "@" << inst.start;
                if (inst.scale != 1) s << " m" << inst.scale;
                if (inst.clipped) s << " clipped";
                s << "]";
            }
            s << "\n";
        }
    }
    emit(o, s.str());
    return exit_pass;
}

int run_period(const ScenarioRegistry& reg, const Common& o, int max_steps) {
    const auto& sc = scenario_of(reg, o.scenario);
    const auto& m = map_of(sc, o.map);
    if (m.kind() == ScenarioMap::Kind::bilinear) throw UsageError("period needs a cluster or rational map");
    OrbitRecord orbit = m.orbit(seed_of(m, o), max_steps, sc.to_point(bindings_of(sc, o)));
    if (orbit.singular) {
        std::cout << "singular orbit: " << orbit.singular_message << "\n";
        return exit_fail;
    }
    for (std::size_t t = 1; t < orbit.points.size(); ++t)
        if (orbit.points[t] == orbit.points[0]) {
            std::cout << "period " << t << "\n";
            return exit_pass;
        }
    std::cout << "no period up to " << max_steps << "\n";
    return exit_fail;
}

int run_dot(const ScenarioRegistry& reg, const Common& o, const std::string& matrix, const std::string& at) {
    const auto& sc = scenario_of(reg, o.scenario);
    ExchangeMatrix b;
    if (!matrix.empty()) {
        if (!sc.has_matrix(matrix)) throw UsageError("scenario '" + o.scenario + "' has no matrix '" + matrix + "'");
        b = sc.matrix(matrix);
    } else {
        b = map_of(sc, o.map).cluster().matrix();
    }
    for (int k : at.empty() ? std::vector<int>{} : parse_indices(at)) {
        if (k < 1 || k > b.n_mutable()) throw UsageError("--at: node " + std::to_string(k) + " out of range");
        b = mutate_matrix(b, k);
    }
    emit(o, export_dot(b));
    return exit_pass;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact deformed cluster mutations: maps, forms, integrals, tau functions and p-adic patterns"};
    app.require_subcommand(1);
    std::string scenario_dir;
    app.add_option("--scenarios", scenario_dir, "Directory of scenario manifests (default: the shipped set)");

    Common o;
    std::string matrix, rows, at, expr, orbit_file, support, den_fixed, den_scaled;
    std::vector<std::string> ids, only;
    std::optional<int> depth;
    int laurent_depth = 3, max_steps = 100;
    std::size_t gauge = 0;
    bool free_constant = false, factor = false;
    long delta_from = -4, delta_to = 6;

    auto* list = app.add_subcommand("list", "List the registered scenarios");
    add_format(list, o, {"text", "json"});

    auto* scen = app.add_subcommand("scenario", "Run the checks of one or more scenarios ('all' for every one)");
    scen->add_option("ids", ids, "Scenario ids")->required();
    add_set(scen, o);
    scen->add_option("--seed", o.seed, "Initial point of the primary map, e.g. 1,1");
    scen->add_option("--steps", o.steps, "Orbit length for orbit checks and the report orbit");
    scen->add_option("--depth", depth, "Depth of Laurent checks");
    scen->add_option("--only", only, "Run only these checks (names or kinds)");
    scen->add_option("--jobs", o.jobs, "Scenarios run concurrently")->check(CLI::PositiveNumber);
    add_format(scen, o, {"text", "json"});

    auto* mut = app.add_subcommand("mutate", "Mutate an exchange matrix");
    mut->add_option("scenario", o.scenario, "Scenario id");
    mut->add_option("--map", o.map, "Take the matrix of this cluster map");
    mut->add_option("--matrix", matrix, "Take a named matrix of the scenario");
    mut->add_option("--rows", rows, "Literal skew-symmetric matrix as JSON rows");
    mut->add_option("--at", at, "Nodes to mutate at, in order, e.g. 1,5,2");
    add_format(mut, o, {"text", "json", "dot"});

    auto* orb = app.add_subcommand("orbit", "Iterate a map on exact rationals");
    add_scenario_arg(orb, o);
    add_set(orb, o);
    orb->add_option("--seed", o.seed, "Initial point, e.g. 1,1");
    orb->add_option("--steps", o.steps, "Number of steps");
    orb->add_flag("--factor", factor, "Include prime factorizations (json)");
    orb->add_option("--jobs", o.jobs, "Factorization threads")->check(CLI::PositiveNumber);
    add_format(orb, o, {"csv", "json"});

    auto* vf = app.add_subcommand("verify-form", "Check that a map preserves its log-canonical form");
    add_scenario_arg(vf, o);
    add_set(vf, o);
    vf->add_flag("--symbolic", o.symbolic, "Leave every parameter free (default unless --set is given)");

    auto* vi = app.add_subcommand("verify-integral", "Check a first integral symbolically or along an orbit file");
    add_scenario_arg(vi, o);
    add_set(vi, o);
    vi->add_option("--expr", expr, "The integral, in the scenario's variables and parameters")->required();
    vi->add_option("--orbit", orbit_file, "Orbit CSV written by 'orbit --format csv'");
    vi->add_flag("--symbolic", o.symbolic, "Leave every parameter free");

    auto* si = app.add_subcommand("search-integral", "Solve a Laurent-monomial ansatz for a first integral");
    add_scenario_arg(si, o);
    add_set(si, o);
    si->add_option("--support", support, "Comma-separated monomials, e.g. y,w,w/y")->required();
    si->add_option("--gauge", gauge, "Index of the monomial whose coefficient is fixed to one");
    si->add_flag("--free-constant", free_constant, "Quotient out an additive constant");
    si->add_option("--den-fixed", den_fixed, "Fixed part D0 of the denominator");
    si->add_option("--den-scaled", den_scaled, "Part D1 scaled by the unknown delta");
    si->add_option("--delta-from", delta_from, "Smallest integer delta tried");
    si->add_option("--delta-to", delta_to, "Largest integer delta tried");
    add_format(si, o, {"text", "json"});

    auto* lc = app.add_subcommand("laurent-check", "Iterate a bilinear system symbolically and test the Laurent property");
    add_scenario_arg(lc, o);
    lc->add_option("--depth", laurent_depth, "Number of steps")->check(CLI::PositiveNumber);
    add_format(lc, o, {"text", "json"});

    auto* tr = app.add_subcommand("tau-run", "Iterate a bilinear system on exact values");
    add_scenario_arg(tr, o);
    add_set(tr, o);
    tr->add_option("--steps", o.steps, "Number of steps");
    add_format(tr, o, {"text", "csv", "json"});

    auto* pr = app.add_subcommand("padic-report", "Factor an orbit and classify its p-adic singularity patterns");
    add_scenario_arg(pr, o);
    add_set(pr, o);
    pr->add_option("--seed", o.seed, "Initial point");
    pr->add_option("--steps", o.steps, "Number of steps");
    pr->add_option("--jobs", o.jobs, "Factorization threads")->check(CLI::PositiveNumber);
    add_format(pr, o, {"text", "json", "csv"});

    auto* per = app.add_subcommand("period", "Find the exact period of an orbit");
    add_scenario_arg(per, o);
    add_set(per, o);
    per->add_option("--seed", o.seed, "Initial point");
    per->add_option("--max", max_steps, "Give up after this many steps")->check(CLI::PositiveNumber);

    auto* dot = app.add_subcommand("quiver-dot", "Export a quiver as Graphviz DOT");
    add_scenario_arg(dot, o);
    dot->add_option("--matrix", matrix, "A named matrix of the scenario");
    dot->add_option("--at", at, "Mutate at these nodes first");
    dot->add_option("--out", o.out, "Output file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_usage;
    }

    try {
        const ScenarioRegistry* reg = nullptr;
        std::optional<ScenarioRegistry> loaded;
        if (!scenario_dir.empty()) {
            loaded = ScenarioRegistry::load_directory(scenario_dir);
            reg = &*loaded;
        } else {
            reg = &ScenarioRegistry::builtin();
        }
        if (*list) return run_list(*reg, o);
        if (*scen) return run_scenarios(*reg, o, ids, only, depth);
        if (*mut) return run_mutate(*reg, o, matrix, rows, at);
        if (*orb) return run_orbit(*reg, o, factor);
        if (*vf) return run_verify_form(*reg, o);
        if (*vi) return run_verify_integral(*reg, o, expr, orbit_file);
        if (*si) return run_search_integral(*reg, o, support, gauge, free_constant, den_fixed, den_scaled,
                                            {delta_from, delta_to});
        if (*lc) return run_laurent(*reg, o, laurent_depth);
        if (*tr) return run_tau(*reg, o);
        if (*pr) return run_padic(*reg, o);
        if (*per) return run_period(*reg, o, max_steps);
        if (*dot) return run_dot(*reg, o, matrix, at);
    } catch (const UsageError& e) {
        std::cerr << "defmut: " << e.what() << "\n";
        return exit_usage;
    } catch (const std::exception& e) {
        std::cerr << "defmut: " << e.what() << "\n";
        return exit_fail;
    }
    return exit_usage;
}
