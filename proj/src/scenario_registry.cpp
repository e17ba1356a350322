#include "defmut/scenarios.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace defmut {

namespace {

std::vector<std::string> strings_of(const Json& j, const char* what) {
    if (!j.is_array()) throw ParseError(std::string(what) + " must be an array of strings");
    std::vector<std::string> out;
    for (const auto& e : j) out.push_back(e.get<std::string>());
    return out;
}

std::vector<std::vector<long>> integer_rows(const Json& j) {
    if (!j.is_array()) throw ParseError("matrix must be an array of rows");
    std::vector<std::vector<long>> rows;
    for (const auto& r : j) {
        std::vector<long> row;
        for (const auto& e : r) row.push_back(e.get<long>());
        rows.push_back(std::move(row));
    }
    return rows;
}

ExchangeMatrix matrix_of(const Json& j) {
    auto rows = integer_rows(j.is_object() ? j.at("rows") : j);
    int frozen = j.is_object() ? j.value("n_frozen", 0) : 0;
    int n = static_cast<int>(rows.size()) - frozen;
    return ExchangeMatrix(n, frozen, std::move(rows));
}

QMatrix rational_matrix(const Json& j) {
    QMatrix m;
    for (const auto& r : integer_rows(j)) {
        QVector row;
        for (long v : r) row.emplace_back(v);
        m.push_back(std::move(row));
    }
    return m;
}

GSpec rule_of(const Alphabet& a, const Json& j) {
    std::string kind = j.at("kind").get<std::string>();
    auto p = [&](const char* key) { return a.parse(j.at(key).get<std::string>()); };
    if (kind == "affine") return GSpec::affine(p("a"), p("b"));
    if (kind == "moebius") return GSpec::moebius(p("a1"), p("a2"), p("a3"));
    if (kind == "moebius_x") return GSpec::moebius_x(p("a1"), p("a2"), p("a3"));
    if (kind == "custom") return GSpec::parse_custom(a, j.at("g").get<std::string>());
    if (kind == "raw_f") return GSpec::parse_raw_f(a, j.at("f").get<std::string>());
    throw ParseError("unknown exchange rule kind '" + kind + "'");
}

}  // namespace

std::vector<std::string> ScenarioMap::coord_names() const {
    std::vector<std::string> out;
    if (kind_ == Kind::bilinear) {
        for (const auto& [s, i] : bilinear_->initial_labels()) out.push_back(s + "[" + std::to_string(i) + "]");
        return out;
    }
    return names_;
}

const ClusterMap& ScenarioMap::cluster() const {
    if (!cluster_) throw Error("map '" + name_ + "' is not a cluster map");
    return *cluster_;
}
const RationalMap& ScenarioMap::rational() const {
    if (!rational_) throw Error("map '" + name_ + "' is not a rational map");
    return *rational_;
}
const BilinearSystem& ScenarioMap::bilinear() const {
    if (!bilinear_) throw Error("map '" + name_ + "' is not a bilinear system");
    return *bilinear_;
}

std::optional<QMatrix> ScenarioMap::form_matrix() const {
    if (omega_) return omega_;
    if (cluster_) return to_rational(cluster_->matrix().mutable_block_integer());
    return std::nullopt;
}

std::vector<RatFunc> ScenarioMap::symbolic(const Bindings& b) const {
    if (kind_ == Kind::cluster) {
        std::vector<RatFunc> cluster;
        for (int c : coords_) cluster.push_back(RatFunc::variable(c));
        return symbolic_images(*cluster_, cluster, b);
    }
    if (kind_ == Kind::rational) return rational_->symbolic(b);
    throw Error("map '" + name_ + "': bilinear systems have no symbolic images");
}

OrbitRecord ScenarioMap::orbit(const std::vector<Rational>& seed, int steps, const Bindings& b) const {
    if (seed.size() != coords_.size())
        throw Error("map '" + name_ + "': seed needs " + std::to_string(coords_.size()) + " values");
    if (kind_ == Kind::cluster) return iterate_orbit(*cluster_, seed, steps, b);
    if (kind_ == Kind::rational) return iterate_orbit(*rational_, seed, steps, b);
    throw Error("map '" + name_ + "': use tau_orbit for bilinear systems");
}

TauOrbit<Rational> ScenarioMap::tau_orbit(int steps, const Bindings& b) const {
    return iterate_bilinear(bilinear(), constant_window(bilinear(), initial_), steps, b);
}

Scenario Scenario::from_json(const Json& m) {
    Scenario s;
    s.manifest_ = m;
    s.id_ = m.at("id").get<std::string>();
    try {
        s.description_ = m.value("description", "");
        auto variables = strings_of(m.value("variables", Json::array()), "variables");
        s.parameters_ = strings_of(m.value("parameters", Json::array()), "parameters");
        s.alphabet_ = Alphabet(variables, s.parameters_);
        for (const auto& p : s.parameters_) s.defaults_[p] = 1;
        if (m.contains("defaults"))
            for (const auto& [k, v] : m.at("defaults").items()) {
                if (std::find(s.parameters_.begin(), s.parameters_.end(), k) == s.parameters_.end())
                    throw ParseError("default for undeclared parameter '" + k + "'");
                s.defaults_[k] = rational_from_json(v);
            }
        s.report_steps_ = m.value("report_steps", 10);
        if (m.contains("matrices"))
            for (const auto& [k, v] : m.at("matrices").items()) s.matrices_.emplace(k, matrix_of(v));
        if (!m.contains("maps") || m.at("maps").empty()) throw ParseError("scenario needs at least one map");
        for (const auto& [name, spec] : m.at("maps").items()) {
            ScenarioMap map;
            map.name_ = name;
            std::string type = spec.at("type").get<std::string>();
            if (spec.contains("coords"))
                for (const auto& c : strings_of(spec.at("coords"), "coords")) {
                    map.coords_.push_back(s.alphabet_.index(c));
                    map.names_.push_back(c);
                }
            if (spec.contains("omega")) map.omega_ = rational_matrix(spec.at("omega"));
            if (type == "cluster") {
                map.kind_ = ScenarioMap::Kind::cluster;
                ExchangeMatrix b = matrix_of(spec.at("matrix"));
                MutationWord w;
                for (const auto& i : spec.at("word")) w.indices.push_back(i.get<int>());
                if (spec.contains("permutation")) {
                    std::vector<int> images;
                    for (const auto& i : spec.at("permutation")) images.push_back(i.get<int>());
                    w.permutation = Permutation(images);
                }
                std::map<int, GSpec> rules;
                if (spec.contains("default_rule"))
                    for (int k = 1; k <= b.n_mutable(); ++k) rules[k] = rule_of(s.alphabet_, spec.at("default_rule"));
                if (spec.contains("rules"))
                    for (const auto& [node, r] : spec.at("rules").items())
                        rules[static_cast<int>(parse_integer(node).get_si())] = rule_of(s.alphabet_, r);
                map.cluster_ = std::make_shared<ClusterMap>(b, w, rules, spec.value("require_invariance", true));
                if (static_cast<int>(map.coords_.size()) != b.n_mutable())
                    throw ParseError("map '" + name + "': coords must name every mutable node");
            } else if (type == "rational") {
                map.kind_ = ScenarioMap::Kind::rational;
                if (spec.contains("components")) {
                    std::vector<RatFunc> comps;
                    for (const auto& c : spec.at("components")) comps.push_back(s.alphabet_.parse(c.get<std::string>()));
                    map.rational_ = std::make_shared<RationalMap>(RationalMap::simultaneous(map.coords_, comps));
                } else {
                    std::vector<RationalMap::Update> ups;
                    for (const auto& u : spec.at("updates"))
                        ups.push_back({s.alphabet_.index(u.at("var").get<std::string>()),
                                       s.alphabet_.parse(u.at("expr").get<std::string>())});
                    map.rational_ = std::make_shared<RationalMap>(map.coords_, ups);
                }
            } else if (type == "bilinear") {
                map.kind_ = ScenarioMap::Kind::bilinear;
                std::vector<BilinearEquation> eqs;
                for (const auto& e : spec.at("equations"))
                    eqs.push_back(BilinearSystem::parse_equation(s.alphabet_, e.get<std::string>()));
                std::map<std::string, std::pair<int, int>> window;
                for (const auto& [seq, range] : spec.at("window").items())
                    window[seq] = {range.at(0).get<int>(), range.at(1).get<int>()};
                map.bilinear_ = std::make_shared<BilinearSystem>(std::move(eqs), std::move(window));
                if (spec.contains("initial")) map.initial_ = rational_from_json(spec.at("initial"));
            } else {
                throw ParseError("map '" + name + "': unknown type '" + type + "'");
            }
            if (spec.contains("seed")) map.seed_ = rationals_from_json(spec.at("seed"));
            else map.seed_.assign(map.coords_.size(), Rational(1));
            s.maps_.push_back(std::move(map));
        }
        if (!m.contains("checks") || !m.at("checks").is_array()) throw ParseError("scenario needs a checks array");
    } catch (const std::exception& e) {
        throw ParseError("scenario '" + s.id_ + "': " + e.what());
    }
    return s;
}

const ScenarioMap& Scenario::map(const std::string& name) const {
    if (name.empty()) return maps_.front();
    for (const auto& m : maps_)
        if (m.name() == name) return m;
    throw Error("scenario '" + id_ + "' has no map '" + name + "'");
}

std::vector<std::string> Scenario::map_names() const {
    std::vector<std::string> out;
    for (const auto& m : maps_) out.push_back(m.name());
    return out;
}

const ExchangeMatrix& Scenario::matrix(const std::string& name) const {
    auto it = matrices_.find(name);
    if (it == matrices_.end()) throw Error("scenario '" + id_ + "' has no matrix '" + name + "'");
    return it->second;
}

NamedBindings Scenario::resolve(const NamedBindings& overrides) const {
    NamedBindings out = defaults_;
    for (const auto& [k, v] : overrides) {
        if (!defaults_.count(k)) throw Error("scenario '" + id_ + "' has no parameter '" + k + "'");
        out[k] = v;
    }
    return out;
}

Bindings Scenario::to_point(const NamedBindings& named) const {
    Bindings b;
    for (const auto& [k, v] : named) b[alphabet_.index(k)] = v;
    return b;
}

ScenarioRegistry ScenarioRegistry::load_directory(const std::string& dir) {
    ScenarioRegistry r;
    std::vector<std::filesystem::path> files;
    for (const auto& e : std::filesystem::directory_iterator(dir))
        if (e.path().extension() == ".json") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
        std::ifstream in(f);
        std::stringstream text;
        text << in.rdbuf();
        Json j;
        try {
            j = Json::parse(text.str());
        } catch (const std::exception& e) {
            throw ParseError(f.string() + ": " + e.what());
        }
        r.add(Scenario::from_json(j));
    }
    return r;
}

const ScenarioRegistry& ScenarioRegistry::builtin() {
    static const ScenarioRegistry r = load_directory(DEFMUT_SCENARIO_DIR);
    return r;
}

std::vector<std::string> ScenarioRegistry::ids() const {
    std::vector<std::string> out;
    for (const auto& kv : scenarios_) out.push_back(kv.first);
    return out;
}

const Scenario& ScenarioRegistry::get(const std::string& id) const {
    auto it = scenarios_.find(id);
    if (it == scenarios_.end()) throw Error("unknown scenario '" + id + "'");
    return it->second;
}

void ScenarioRegistry::add(Scenario s) {
    std::string id = s.id();
    if (!scenarios_.emplace(id, std::move(s)).second) throw Error("duplicate scenario id '" + id + "'");
}

}  // namespace defmut
