#pragma once

// Registry of named constructions loaded from JSON manifests, and the runner
// that executes their attached checks.

#include "defmut/dynamics.hpp"
#include "defmut/io.hpp"
#include "defmut/laurent.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace defmut {

/// Parameter values by name.
using NamedBindings = std::map<std::string, Rational>;

/// One map of a scenario: a cluster map, a rational map or a bilinear system.
class ScenarioMap {
  public:
    enum class Kind { cluster, rational, bilinear };

    Kind kind() const { return kind_; }
    const std::string& name() const { return name_; }
    /// Alphabet indices of the coordinates (cluster and rational maps).
    const std::vector<int>& coords() const { return coords_; }
    std::vector<std::string> coord_names() const;
    const std::vector<Rational>& seed() const { return seed_; }

    const ClusterMap& cluster() const;
    const RationalMap& rational() const;
    const BilinearSystem& bilinear() const;
    /// Value given to every initial tau value of a bilinear system.
    const Rational& initial_value() const { return initial_; }

    /// Exchange matrix for cluster maps, the attached "omega" otherwise.
    std::optional<QMatrix> form_matrix() const;

    /// Images of the coordinates; bound parameters are substituted.
    std::vector<RatFunc> symbolic(const Bindings& b = {}) const;
    OrbitRecord orbit(const std::vector<Rational>& seed, int steps, const Bindings& b) const;
    TauOrbit<Rational> tau_orbit(int steps, const Bindings& b) const;

  private:
    friend class Scenario;
    Kind kind_ = Kind::rational;
    std::string name_;
    std::vector<int> coords_;
    std::vector<std::string> names_;
    std::vector<Rational> seed_;
    std::shared_ptr<const ClusterMap> cluster_;
    std::shared_ptr<const RationalMap> rational_;
    std::shared_ptr<const BilinearSystem> bilinear_;
    std::optional<QMatrix> omega_;
    Rational initial_ = 1;
};

class Scenario {
  public:
    static Scenario from_json(const Json& manifest);

    const std::string& id() const { return id_; }
    const std::string& description() const { return description_; }
    const Alphabet& alphabet() const { return alphabet_; }
    const std::vector<std::string>& parameter_names() const { return parameters_; }
    const NamedBindings& defaults() const { return defaults_; }
    const Json& manifest() const { return manifest_; }
    const Json& checks() const { return manifest_.at("checks"); }
    int report_steps() const { return report_steps_; }

    /// The first map in the manifest when name is empty.
    const ScenarioMap& map(const std::string& name = "") const;
    std::vector<std::string> map_names() const;
    bool has_matrix(const std::string& name) const { return matrices_.count(name) > 0; }
    const ExchangeMatrix& matrix(const std::string& name) const;

    /// defaults overridden by `overrides`; unknown names are rejected.
    NamedBindings resolve(const NamedBindings& overrides) const;
    Bindings to_point(const NamedBindings& named) const;
    RatFunc parse(const std::string& expr) const { return alphabet_.parse(expr); }

  private:
    std::string id_;
    std::string description_;
    Alphabet alphabet_;
    std::vector<std::string> parameters_;
    NamedBindings defaults_;
    std::vector<ScenarioMap> maps_;
    std::map<std::string, ExchangeMatrix> matrices_;
    Json manifest_;
    int report_steps_ = 10;
};

class ScenarioRegistry {
  public:
    static ScenarioRegistry load_directory(const std::string& dir);
    /// The manifests shipped with the library.
    static const ScenarioRegistry& builtin();

    std::vector<std::string> ids() const;
    bool contains(const std::string& id) const { return scenarios_.count(id) > 0; }
    const Scenario& get(const std::string& id) const;
    void add(Scenario s);

  private:
    std::map<std::string, Scenario> scenarios_;
};

enum class CheckStatus { pass, fail, skip };
std::string status_name(CheckStatus s);

struct CheckResult {
    std::string name;
    std::string kind;
    CheckStatus status = CheckStatus::fail;
    std::string detail;
    Json data;
};

struct RunOptions {
    NamedBindings set;                          // parameter overrides
    std::optional<std::vector<Rational>> seed;  // initial point of the primary map
    std::optional<int> steps;                   // orbit length for orbit-based checks and the report orbit
    std::optional<int> depth;                   // Laurent depth override
    std::vector<std::string> only;              // check names or kinds; empty runs all
};

struct ScenarioReport {
    std::string id;
    NamedBindings parameters;
    std::vector<CheckResult> checks;
    Json orbit;  // primary-map orbit with factorizations, when numeric

    bool passed() const;  // no failed check
    int count(CheckStatus s) const;
    Json to_json() const;
};

ScenarioReport run_scenario(const ScenarioRegistry& registry, const std::string& id, const RunOptions& options = {});

/// Names of the check kinds a manifest may use.
std::vector<std::string> check_kinds();

/// Pattern library of the first p-adic check on the named map (the primary
/// map when empty), or nothing when the scenario has none.
std::optional<std::vector<SingularityPattern>> pattern_library(const Scenario& sc, const std::string& map = "");

/// x~1/x~3 = (x1/x3)^-1 and x~2/x~4 = (x2/x4)^-1 at every step of a
/// four-dimensional orbit.
bool trivial_dof_check(const OrbitRecord& orbit);
/// The same identities for symbolic images of (x1, .., x4).
bool trivial_dof_check(const std::vector<RatFunc>& images, const std::vector<int>& coords);

}  // namespace defmut
