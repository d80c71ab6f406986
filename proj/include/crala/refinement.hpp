#pragma once

#include <optional>
#include <string>
#include <vector>

#include "crala/diagnostic.hpp"
#include "crala/model.hpp"
#include "crala/workspace.hpp"

namespace crala {

/// `abstract_element` is bound to `concrete_element` by a refinement.
struct Binding {
  std::string abstract_element;
  std::string concrete_element;

  friend bool operator==(const Binding&, const Binding&) = default;
};

struct RefinementReport {
  Identifier child;
  Identifier parent;
  LinkKind kind = LinkKind::implements;
  /// True iff `diagnostics` holds no error.
  bool ok = true;
  std::vector<Binding> bindings;
  std::vector<Diagnostic> diagnostics;
};

/// Checks that `config` implements `spec` (E-REF-01..05, E-REF-07).
/// Throws std::invalid_argument when `config` does not name `spec`.
RefinementReport check_config_refines_spec(const Configuration& config, const Specification& spec);

/// Checks that `assembly` deploys `config` (E-PLACE-01, E-INST-01, E-REF-06).
/// Throws std::invalid_argument when `assembly` does not name `config`.
RefinementReport check_assembly_deploys_config(const Assembly& assembly, const Configuration& config);

struct GraphNode {
  Identifier document;
  Level level = Level::specification;

  friend bool operator==(const GraphNode&, const GraphNode&) = default;
};

struct GraphEdge {
  Identifier child;
  Identifier parent;
  LinkKind kind = LinkKind::implements;

  friend bool operator==(const GraphEdge&, const GraphEdge&) = default;
};

/// Role -> realizing implementation -> instance, across linked documents. The
/// instance part is empty when no linked assembly instantiates the implementation.
struct MicroChain {
  Identifier specification;
  Identifier role;
  Identifier configuration;
  Identifier implementation;
  std::optional<Identifier> assembly;
  std::optional<Identifier> instance;

  friend bool operator==(const MicroChain&, const MicroChain&) = default;
};

struct VariabilityGraph {
  std::vector<GraphNode> nodes;
  std::vector<GraphEdge> edges;
  std::vector<MicroChain> micro_edges;
};

/// Declared relations of the workspace, whether or not the refinements pass.
VariabilityGraph build_variability_graph(const Workspace& workspace);

}  // namespace crala
