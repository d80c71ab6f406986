#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "crala/diagnostic.hpp"
#include "crala/model.hpp"

namespace crala {

enum class LinkKind { implements, deploys };

std::string_view to_string(LinkKind kind);

/// Cross-level reference: `child` (configuration or assembly) points at `parent`.
/// Indices are into Workspace::documents().
struct Link {
  std::size_t child = 0;
  std::size_t parent = 0;
  LinkKind kind = LinkKind::implements;

  friend bool operator==(const Link&, const Link&) = default;
};

enum class ElementKind {
  specification,
  configuration,
  assembly,
  role,
  concept_robot,
  sensor,
  actuator,
  robot_model,
  vm,
  implementation,
  cloud,
  machine,
  instance,
};

std::string_view to_string(ElementKind kind);

using ElementPtr =
    std::variant<const Specification*, const Configuration*, const Assembly*,
                 const ComponentRole*, const ConceptRobot*, const DeviceSpec*, const RobotModel*,
                 const VirtualMachine*, const ComponentImplementation*, const CloudDescription*,
                 const PhysicalMachine*, const ComponentInstance*>;

/// A named model element with its fully qualified path (document first).
/// The pointer refers into the owning workspace.
struct Element {
  ElementKind kind = ElementKind::specification;
  std::vector<Identifier> path;
  ElementPtr target;

  std::string dotted() const;
};

struct NotFound {};

struct Ambiguous {
  std::vector<Element> candidates;
};

using Resolution = std::variant<Element, NotFound, Ambiguous>;

/// Immutable set of documents with their implements/deploys links resolved.
class Workspace {
 public:
  Workspace() = default;

  std::span<const Document> documents() const { return documents_; }
  std::span<const Link> links() const { return links_; }
  std::span<const Diagnostic> diagnostics() const { return diagnostics_; }

  /// First document with this name.
  std::optional<std::size_t> index_of(std::string_view name) const;

  /// Parent link of a document, if its reference resolved.
  std::optional<std::size_t> parent_of(std::size_t child) const;
  std::vector<std::size_t> children_of(std::size_t parent) const;

  const Specification* specification_of(const Configuration& config) const;
  const Configuration* configuration_of(const Assembly& assembly) const;

  /// Every named element, documents first, in declaration order.
  std::vector<Element> elements() const;

  /// Suffix lookup: `path` matches every element whose qualified path ends with it.
  Resolution resolve(std::span<const Identifier> path) const;

 private:
  friend Workspace build_workspace(std::vector<Document> documents);

  std::vector<Document> documents_;
  std::vector<Link> links_;
  std::vector<Diagnostic> diagnostics_;
};

/// Resolves implements/deploys references. Duplicate names give E-WS-01, links to
/// a document of the wrong level E-WS-02, links to nothing E-WS-03.
Workspace build_workspace(std::vector<Document> documents);

}  // namespace crala
