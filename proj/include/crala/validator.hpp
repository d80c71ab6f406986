#pragma once

#include <vector>

#include "crala/diagnostic.hpp"
#include "crala/model.hpp"

namespace crala {

// Intra-level rule sets. Each returns diagnostics sorted by span; all are pure.

/// E-CONN-01, E-CONN-02, E-ROLE-01, W-SPEC-01.
std::vector<Diagnostic> validate_specification(const Specification& spec);

/// E-CONN-01, E-CONN-03, E-HOST-01, E-PROTO-01, W-OS-01.
std::vector<Diagnostic> validate_configuration(const Configuration& config);

/// E-CLOUD-01 for a cloud without machines.
std::vector<Diagnostic> validate_cloud(const CloudDescription& cloud);

/// E-CLOUD-01, E-NET-01, E-PLACE-01/02/03, E-CAP-01, E-INST-01. `config` is the
/// configuration the assembly deploys.
std::vector<Diagnostic> validate_assembly(const Assembly& assembly, const Configuration& config);

}  // namespace crala
