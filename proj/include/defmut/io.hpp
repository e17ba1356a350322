#pragma once

// Serialization of exact data. Rationals are always written as "p/q" (or
// "p") strings, never as floating point.

#include "defmut/dynamics.hpp"
#include "defmut/laurent.hpp"
#include "defmut/padic.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace defmut {

using Json = nlohmann::ordered_json;

std::string rational_string(const Rational& q);
/// Accepts "p/q" strings and JSON integers.
Rational rational_from_json(const Json& j);
std::vector<Rational> rationals_from_json(const Json& j);
Json rationals_to_json(const std::vector<Rational>& v);

/// Comma- or space-separated rationals, e.g. "1,1" or "3/2 1".
std::vector<Rational> parse_rational_list(const std::string& text);

Json orbit_to_json(const OrbitRecord& o, const std::vector<std::string>& names);
/// Header "step,<names...>", one row per point.
std::string orbit_to_csv(const OrbitRecord& o, const std::vector<std::string>& names);
/// Inverse of orbit_to_csv; names receives the header.
OrbitRecord orbit_from_csv(const std::string& text, std::vector<std::string>* names = nullptr);

/// "2^6*7*137/(19*23*151)"; composite cofactors appear bracketed as [n].
std::string format_factored(const FactoredRational& f);
Json factored_to_json(const FactoredRational& f);

/// Header "prime,variable,<steps...>", one row per tracked prime and variable.
std::string valuation_csv(const ValuationTable& t);
Json pattern_report_to_json(const PatternReport& r, const std::vector<SingularityPattern>& library);

Json laurent_report_to_json(const LaurentReport& r);

}  // namespace defmut
