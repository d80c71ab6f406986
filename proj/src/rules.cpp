#include "crala/rules.hpp"

#include <algorithm>
#include <array>

namespace crala {

namespace {

using enum RuleLevel;
constexpr Severity E = Severity::error;
constexpr Severity W = Severity::warning;

constexpr std::array kRules{
    Rule{"E-LEX-01", syntax, E, "unexpected character or unterminated string literal"},
    Rule{"E-PARSE-01", syntax, E, "unexpected token"},
    Rule{"E-PARSE-02", syntax, E, "duplicate declaration of a name within its kind"},
    Rule{"E-PARSE-03", syntax, E, "missing or invalid attribute value"},
    Rule{"E-NAME-01", syntax, E, "connection endpoint does not resolve to exactly one element"},

    Rule{"E-WS-01", workspace, E, "two documents share a name"},
    Rule{"E-WS-02", workspace, E, "implements/deploys link targets a document of the wrong level"},
    Rule{"E-WS-03", workspace, E, "implements/deploys link names no document"},

    Rule{"E-CONN-01", specification, E,
         "connection end kinds match no allowed type (role-role, role-sensor, role-actuator, "
         "role~robot)"},
    Rule{"E-CONN-02", specification, E, "protocol given on a specification-level connection"},
    Rule{"E-ROLE-01", specification, E, "role has no interfaces and is not marked incomplete"},
    Rule{"W-SPEC-01", specification, W, "role takes part in no connection"},

    Rule{"E-CONN-03", configuration, E,
         "abstract robot connection below specification level (robots and components may not be "
         "connected directly)"},
    Rule{"E-HOST-01", configuration, E, "implementation host is not exactly one VM or robot"},
    Rule{"E-PROTO-01", configuration, E,
         "connection between implementations on different hosts has no protocol"},
    Rule{"W-OS-01", configuration, W, "virtual machine has no operating system"},

    Rule{"E-CLOUD-01", assembly, E, "cloud declares no physical machine"},
    Rule{"E-NET-01", assembly, E, "flat-network cloud hosts VMs in different subnets"},
    Rule{"E-PLACE-01", assembly, E, "virtual machine has no placement"},
    Rule{"E-PLACE-02", assembly, E, "placement names an unknown cloud or machine"},
    Rule{"E-PLACE-03", assembly, E, "virtual machine placed more than once"},
    Rule{"E-CAP-01", assembly, E, "VMs placed on a machine exceed its RAM"},
    Rule{"E-INST-01", assembly, E, "implementation has no instance"},

    Rule{"E-REF-01", refinement, E, "component role has no realizing implementation"},
    Rule{"E-REF-02", refinement, E, "implementation lacks interfaces of the role it realizes"},
    Rule{"E-REF-03", refinement, E,
         "concept robot unrealized, or robot model misses a sensor/actuator kind"},
    Rule{"E-REF-04", refinement, E, "abstract robot connection has no realization"},
    Rule{"E-REF-05", refinement, E, "role-role connection has no implementation-level connection"},
    Rule{"E-REF-06", refinement, E, "assembly references an element absent from the configuration"},
    Rule{"E-REF-07", refinement, E, "configuration element realizes an unknown abstract element"},
};

}  // namespace

std::string_view to_string(RuleLevel level) {
  switch (level) {
    case syntax: return "syntax";
    case workspace: return "workspace";
    case specification: return "specification";
    case configuration: return "configuration";
    case assembly: return "assembly";
    case refinement: return "refinement";
  }
  return "unknown";
}

std::span<const Rule> rule_catalog() { return kRules; }

const Rule* find_rule(std::string_view code) {
  auto it = std::ranges::find(kRules, code, &Rule::code);
  return it == kRules.end() ? nullptr : &*it;
}

}  // namespace crala
