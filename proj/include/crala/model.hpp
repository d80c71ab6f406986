#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "crala/diagnostic.hpp"

namespace crala {

/// Names follow `[A-Za-z_][A-Za-z0-9_]*`.
using Identifier = std::string;

bool is_identifier(std::string_view text);

/// Free-form key/value notes (nfp hints, `task`, `incomplete`).
using Annotations = std::map<std::string, std::string>;

enum class Direction { provided, required };

struct InterfaceRef {
  Identifier name;
  Direction direction = Direction::provided;

  friend auto operator<=>(const InterfaceRef&, const InterfaceRef&) = default;
};

/// True when every (name, direction) of `needed` appears in `offered`.
bool covers(const std::vector<InterfaceRef>& offered, const std::vector<InterfaceRef>& needed);

// ---------------------------------------------------------------------------
// Specification level

struct ComponentRole {
  Identifier name;
  std::vector<InterfaceRef> interfaces;
  Annotations annotations;
  DeclSpan span;

  bool incomplete() const;

  friend bool operator==(const ComponentRole&, const ComponentRole&) = default;
};

/// A sensor or actuator: a local name plus the device kind ("Camera", "Lidar").
struct DeviceSpec {
  Identifier name;
  std::string kind;
  DeclSpan span;

  friend bool operator==(const DeviceSpec&, const DeviceSpec&) = default;
};

struct ConceptRobot {
  Identifier name;
  std::vector<DeviceSpec> sensors;
  std::vector<DeviceSpec> actuators;
  DeclSpan span;

  friend bool operator==(const ConceptRobot&, const ConceptRobot&) = default;
};

enum class EndKind { role, robot, sensor, actuator, component, service, robot_model };

std::string_view to_string(EndKind kind);

struct ConnectionEnd {
  EndKind kind = EndKind::role;
  std::vector<Identifier> path;

  std::string dotted() const;

  friend bool operator==(const ConnectionEnd&, const ConnectionEnd&) = default;
};

/// `->` links roles/sensors/actuators; `~` is the abstract robot link.
enum class ConnectionOp { directed, abstract };

enum class ConnectionFlavor { role_role, role_sensor, role_actuator, abstract_robot };

std::string_view to_string(ConnectionFlavor flavor);

/// Flavor implied by the operator and end kinds; nullopt when no allowed type fits.
/// Orientation does not matter.
std::optional<ConnectionFlavor> classify_connection(ConnectionOp op, EndKind a, EndKind b);

struct Connection {
  ConnectionEnd from;
  ConnectionEnd to;
  ConnectionOp op = ConnectionOp::directed;
  std::optional<std::string> protocol;
  DeclSpan span;

  std::optional<ConnectionFlavor> flavor() const { return classify_connection(op, from.kind, to.kind); }

  friend bool operator==(const Connection&, const Connection&) = default;
};

struct Specification {
  Identifier name;
  std::vector<ComponentRole> roles;
  std::vector<ConceptRobot> robots;
  std::vector<Connection> connections;
  DeclSpan span;

  friend bool operator==(const Specification&, const Specification&) = default;
};

// ---------------------------------------------------------------------------
// Configuration level

struct RobotModel {
  Identifier name;
  std::string model;
  Identifier realizes;
  std::vector<DeviceSpec> sensors;
  std::vector<DeviceSpec> actuators;
  DeclSpan span;

  friend bool operator==(const RobotModel&, const RobotModel&) = default;
};

struct VirtualMachine {
  Identifier name;
  std::optional<std::string> os;
  std::int64_t cpu_cores = 1;
  std::int64_t ram_mb = 1;
  std::optional<std::string> subnet;
  DeclSpan span;

  friend bool operator==(const VirtualMachine&, const VirtualMachine&) = default;
};

enum class ImplVariant { component_class, web_service };

std::string_view to_string(ImplVariant variant);

struct ComponentImplementation {
  Identifier name;
  ImplVariant variant = ImplVariant::component_class;
  Identifier realizes;
  std::vector<InterfaceRef> interfaces;
  Identifier host;
  Annotations annotations;
  DeclSpan span;

  friend bool operator==(const ComponentImplementation&, const ComponentImplementation&) = default;
};

struct Configuration {
  Identifier name;
  Identifier implements;
  std::vector<RobotModel> robots;
  std::vector<VirtualMachine> vms;
  std::vector<ComponentImplementation> impls;
  std::vector<Connection> connections;
  DeclSpan span;

  friend bool operator==(const Configuration&, const Configuration&) = default;
};

// ---------------------------------------------------------------------------
// Assembly level

struct PhysicalMachine {
  Identifier name;
  std::int64_t ram_mb = 1;
  std::int64_t cpu_cores = 1;
  DeclSpan span;

  friend bool operator==(const PhysicalMachine&, const PhysicalMachine&) = default;
};

enum class NetworkMode { flat, sdn };
enum class SchedulingPolicy { spread, pack };

std::string_view to_string(NetworkMode mode);
std::string_view to_string(SchedulingPolicy policy);

struct CloudDescription {
  Identifier name;
  NetworkMode network = NetworkMode::flat;
  SchedulingPolicy scheduler = SchedulingPolicy::spread;
  std::vector<PhysicalMachine> machines;
  DeclSpan span;

  friend bool operator==(const CloudDescription&, const CloudDescription&) = default;
};

struct VmPlacement {
  Identifier vm;
  Identifier machine;
  Identifier cloud;
  DeclSpan span;

  friend bool operator==(const VmPlacement&, const VmPlacement&) = default;
};

enum class InstanceState { running, failed };

struct ComponentInstance {
  Identifier name;
  Identifier of;
  InstanceState state = InstanceState::running;
  DeclSpan span;

  friend bool operator==(const ComponentInstance&, const ComponentInstance&) = default;
};

struct Assembly {
  Identifier name;
  Identifier deploys;
  std::vector<CloudDescription> clouds;
  std::vector<VmPlacement> placements;
  std::vector<ComponentInstance> instances;
  DeclSpan span;

  friend bool operator==(const Assembly&, const Assembly&) = default;
};

// ---------------------------------------------------------------------------

using Document = std::variant<Specification, Configuration, Assembly>;

enum class Level { specification, configuration, assembly };

std::string_view to_string(Level level);

const Identifier& document_name(const Document& document);
Level document_level(const Document& document);
const SourceSpan& document_span(const Document& document);

/// Linear lookup by `name` member; nullptr when absent.
template <typename Range>
auto find_named(const Range& range, std::string_view name) -> decltype(&*std::begin(range)) {
  for (const auto& item : range) {
    if (item.name == name) return &item;
  }
  return nullptr;
}

/// Host of an implementation: a VM or a robot model of the same configuration.
struct HostRef {
  const VirtualMachine* vm = nullptr;
  const RobotModel* robot = nullptr;
};

/// nullopt unless `host` names exactly one VM or robot.
std::optional<HostRef> resolve_host(const Configuration& config, std::string_view host);

}  // namespace crala
