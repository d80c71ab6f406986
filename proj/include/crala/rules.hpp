#pragma once

#include <span>
#include <string_view>

#include "crala/diagnostic.hpp"

namespace crala {

/// Where a rule is enforced.
enum class RuleLevel { syntax, workspace, specification, configuration, assembly, refinement };

std::string_view to_string(RuleLevel level);

struct Rule {
  std::string_view code;
  RuleLevel level;
  Severity severity;
  std::string_view description;
};

/// Every diagnostic code the toolchain can emit. Codes are unique.
std::span<const Rule> rule_catalog();

/// Returns nullptr for codes outside the catalog.
const Rule* find_rule(std::string_view code);

}  // namespace crala
