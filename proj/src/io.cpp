#include "defmut/io.hpp"

#include <sstream>

namespace defmut {

std::string rational_string(const Rational& q) { return to_string(q); }

Rational rational_from_json(const Json& j) {
    if (j.is_number_integer()) return Rational(static_cast<long>(j.get<long long>()));
    if (j.is_string()) return parse_rational(j.get<std::string>());
    throw ParseError("expected an exact rational (string \"p/q\" or integer), got " + j.dump());
}

std::vector<Rational> rationals_from_json(const Json& j) {
    if (!j.is_array()) throw ParseError("expected an array of rationals, got " + j.dump());
    std::vector<Rational> out;
    for (const auto& e : j) out.push_back(rational_from_json(e));
    return out;
}

Json rationals_to_json(const std::vector<Rational>& v) {
    Json out = Json::array();
    for (const auto& q : v) out.push_back(rational_string(q));
    return out;
}

std::vector<Rational> parse_rational_list(const std::string& text) {
    std::vector<Rational> out;
    std::string token;
    auto flush = [&] {
        if (!token.empty()) out.push_back(parse_rational(token));
        token.clear();
    };
    for (char c : text) {
        if (c == ',' || c == ' ' || c == '\t') flush();
        else token.push_back(c);
    }
    flush();
    if (out.empty()) throw ParseError("empty list of rationals: '" + text + "'");
    return out;
}

Json orbit_to_json(const OrbitRecord& o, const std::vector<std::string>& names) {
    Json points = Json::array();
    for (std::size_t s = 0; s < o.points.size(); ++s) {
        Json p = Json::object();
        p["step"] = s;
        for (std::size_t i = 0; i < o.points[s].size(); ++i)
            p[i < names.size() ? names[i] : "x" + std::to_string(i + 1)] = rational_string(o.points[s][i]);
        points.push_back(std::move(p));
    }
    Json out = Json::object();
    out["points"] = std::move(points);
    out["period"] = o.period ? Json(*o.period) : Json(nullptr);
    out["singular"] = o.singular;
    if (o.singular) {
        out["singular_step"] = o.singular_step;
        out["singular_message"] = o.singular_message;
    }
    return out;
}

std::string orbit_to_csv(const OrbitRecord& o, const std::vector<std::string>& names) {
    std::ostringstream out;
    out << "step";
    for (const auto& n : names) out << ',' << n;
    out << '\n';
    for (std::size_t s = 0; s < o.points.size(); ++s) {
        out << s;
        for (const auto& q : o.points[s]) out << ',' << rational_string(q);
        out << '\n';
    }
    return out.str();
}

OrbitRecord orbit_from_csv(const std::string& text, std::vector<std::string>* names) {
    std::istringstream in(text);
    std::string line;
    auto cells = [](const std::string& l) {
        std::vector<std::string> out;
        std::string cur;
        for (char c : l) {
            if (c == ',') {
                out.push_back(cur);
                cur.clear();
            } else if (c != '\r') {
                cur.push_back(c);
            }
        }
        out.push_back(cur);
        return out;
    };
    if (!std::getline(in, line)) throw ParseError("orbit CSV: missing header");
    auto header = cells(line);
    if (header.empty() || header[0] != "step") throw ParseError("orbit CSV: header must start with 'step'");
    if (names) names->assign(header.begin() + 1, header.end());
    OrbitRecord o;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto row = cells(line);
        if (row.size() != header.size()) throw ParseError("orbit CSV: ragged row '" + line + "'");
        if (parse_integer(row[0]) != static_cast<long>(o.points.size()))
            throw ParseError("orbit CSV: steps must be consecutive from 0");
        std::vector<Rational> p;
        for (std::size_t i = 1; i < row.size(); ++i) p.push_back(parse_rational(row[i]));
        o.points.push_back(std::move(p));
    }
    return o;
}

std::string format_factored(const FactoredRational& f) {
    if (f.sign == 0) return "0";
    std::vector<std::string> num, den;
    for (const auto& [p, e] : f.factors) {
        std::string base = to_string(p);
        int a = e > 0 ? e : -e;
        (e > 0 ? num : den).push_back(a == 1 ? base : base + "^" + std::to_string(a));
    }
    if (f.cofactor.get_num() != 1) num.push_back("[" + to_string(f.cofactor.get_num()) + "]");
    if (f.cofactor.get_den() != 1) den.push_back("[" + to_string(f.cofactor.get_den()) + "]");
    auto join = [](const std::vector<std::string>& v) {
        std::string s;
        for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "*" : "") + v[i];
        return s;
    };
    std::string out = f.sign < 0 ? "-" : "";
    out += num.empty() ? "1" : join(num);
    if (!den.empty()) out += "/" + (den.size() > 1 ? "(" + join(den) + ")" : join(den));
    return out;
}

Json factored_to_json(const FactoredRational& f) {
    Json factors = Json::object();
    for (const auto& [p, e] : f.factors) factors[to_string(p)] = e;
    Json out = Json::object();
    out["value"] = rational_string(f.value());
    out["sign"] = f.sign;
    out["factors"] = std::move(factors);
    out["cofactor"] = rational_string(f.cofactor);
    out["text"] = format_factored(f);
    return out;
}

std::string valuation_csv(const ValuationTable& t) {
    std::ostringstream out;
    out << "prime,variable";
    for (int s = 0; s < t.steps; ++s) out << ',' << s;
    out << '\n';
    for (const auto& [p, rows] : t.rows)
        for (std::size_t v = 0; v < rows.size(); ++v) {
            out << p.get_str() << ',' << t.variables[v];
            for (int e : rows[v]) out << ',' << e;
            out << '\n';
        }
    return out.str();
}

namespace {

Json instance_to_json(const PatternInstance& i, const std::vector<SingularityPattern>& library) {
    Json out = Json::object();
    out["pattern"] = library[i.pattern].name();
    out["start"] = i.start;
    out["end"] = i.start + library[i.pattern].width() - 1;
    out["scale"] = i.scale;
    out["clipped"] = i.clipped;
    return out;
}

}  // namespace

Json pattern_report_to_json(const PatternReport& r, const std::vector<SingularityPattern>& library) {
    Json primes = Json::array();
    for (const auto& c : r.primes) {
        Json inst = Json::array();
        for (const auto& i : c.instances) inst.push_back(instance_to_json(i, library));
        Json e = Json::object();
        e["prime"] = to_string(c.prime);
        e["class"] = c.classification;
        e["primary"] = c.primary;
        e["instances"] = std::move(inst);
        primes.push_back(std::move(e));
    }
    Json composites = Json::array();
    for (const auto& c : r.composites) {
        Json ps = Json::array();
        for (const auto& p : c.primes) ps.push_back(to_string(p));
        Json e = Json::object();
        e["primes"] = std::move(ps);
        e["instance"] = instance_to_json(c.instance, library);
        composites.push_back(std::move(e));
    }
    Json counts = Json::object();
    for (const auto& [k, v] : r.counts) counts[k] = v;
    Json out = Json::object();
    out["primes"] = std::move(primes);
    out["composites"] = std::move(composites);
    out["counts"] = std::move(counts);
    return out;
}

Json laurent_report_to_json(const LaurentReport& r) {
    Json entries = Json::array();
    for (const auto& e : r.entries) {
        Json j = Json::object();
        j["value"] = e.seq + "[" + std::to_string(e.index) + "]";
        j["step"] = e.step;
        j["laurent"] = e.laurent;
        j["positive_coefficients"] = e.positive_terms;
        j["terms"] = e.terms;
        entries.push_back(std::move(j));
    }
    Json out = Json::object();
    out["depth_reached"] = r.depth_reached;
    out["budget_exceeded"] = r.budget_exceeded;
    out["all_laurent"] = r.all_laurent();
    out["all_positive"] = r.all_positive();
    out["first_failure_step"] = r.first_failure_step();
    out["entries"] = std::move(entries);
    return out;
}

}  // namespace defmut
