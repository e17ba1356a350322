#pragma once

// Named variables. Each scenario owns one Alphabet; polynomials refer to
// variables by the indices it hands out. Parameters are ordinary variables
// carrying a flag.

#include "defmut/ratfunc.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace defmut {

class Alphabet {
  public:
    Alphabet() = default;
    Alphabet(const std::vector<std::string>& variables, const std::vector<std::string>& parameters);

    /// Returns the index of name, adding it when absent.
    int add(const std::string& name, bool parameter = false);
    int index(std::string_view name) const;  // throws on unknown names
    std::optional<int> find(std::string_view name) const;
    const std::string& name(int v) const { return names_.at(static_cast<std::size_t>(v)); }
    bool is_parameter(int v) const { return parameter_.at(static_cast<std::size_t>(v)); }
    int size() const { return static_cast<int>(names_.size()); }
    std::vector<int> parameters() const;
    std::vector<int> non_parameters() const;

    std::string format(const Poly& p) const;
    std::string format(const RatFunc& f) const;
    /// Parses + - * / ^ ( ), integer literals and declared identifiers.
    RatFunc parse(std::string_view text) const;

  private:
    std::vector<std::string> names_;
    std::vector<bool> parameter_;
};

}  // namespace defmut
