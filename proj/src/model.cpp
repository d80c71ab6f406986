#include "crala/model.hpp"

#include <algorithm>
#include <cctype>

namespace crala {

bool is_identifier(std::string_view text) {
  if (text.empty()) return false;
  auto head = static_cast<unsigned char>(text.front());
  if (!(std::isalpha(head) || head == '_')) return false;
  return std::ranges::all_of(text.substr(1), [](char c) {
    auto u = static_cast<unsigned char>(c);
    return std::isalnum(u) || u == '_';
  });
}

bool covers(const std::vector<InterfaceRef>& offered, const std::vector<InterfaceRef>& needed) {
  return std::ranges::all_of(needed, [&](const InterfaceRef& want) {
    return std::ranges::find(offered, want) != offered.end();
  });
}

bool ComponentRole::incomplete() const {
  auto it = annotations.find("incomplete");
  return it != annotations.end() && it->second == "true";
}

std::string_view to_string(EndKind kind) {
  switch (kind) {
    case EndKind::role: return "role";
    case EndKind::robot: return "robot";
    case EndKind::sensor: return "sensor";
    case EndKind::actuator: return "actuator";
    case EndKind::component: return "component";
    case EndKind::service: return "service";
    case EndKind::robot_model: return "robot_model";
  }
  return "unknown";
}

std::string ConnectionEnd::dotted() const {
  std::string out;
  for (const auto& part : path) {
    if (!out.empty()) out += '.';
    out += part;
  }
  return out;
}

std::string_view to_string(ConnectionFlavor flavor) {
  switch (flavor) {
    case ConnectionFlavor::role_role: return "role_role";
    case ConnectionFlavor::role_sensor: return "role_sensor";
    case ConnectionFlavor::role_actuator: return "role_actuator";
    case ConnectionFlavor::abstract_robot: return "abstract_robot";
  }
  return "unknown";
}

namespace {

// Roles and the implementations that fill them play the same part in a link.
bool role_like(EndKind k) {
  return k == EndKind::role || k == EndKind::component || k == EndKind::service;
}

bool robot_like(EndKind k) { return k == EndKind::robot || k == EndKind::robot_model; }

}  // namespace

std::optional<ConnectionFlavor> classify_connection(ConnectionOp op, EndKind a, EndKind b) {
  if (!role_like(a)) std::swap(a, b);
  if (!role_like(a)) return std::nullopt;
  if (op == ConnectionOp::abstract) {
    if (robot_like(b)) return ConnectionFlavor::abstract_robot;
    return std::nullopt;
  }
  if (role_like(b)) return ConnectionFlavor::role_role;
  if (b == EndKind::sensor) return ConnectionFlavor::role_sensor;
  if (b == EndKind::actuator) return ConnectionFlavor::role_actuator;
  return std::nullopt;
}

std::string_view to_string(ImplVariant variant) {
  return variant == ImplVariant::component_class ? "component_class" : "web_service";
}

std::string_view to_string(NetworkMode mode) { return mode == NetworkMode::flat ? "flat" : "sdn"; }

std::string_view to_string(SchedulingPolicy policy) {
  return policy == SchedulingPolicy::spread ? "spread" : "pack";
}

std::string_view to_string(Level level) {
  switch (level) {
    case Level::specification: return "specification";
    case Level::configuration: return "configuration";
    case Level::assembly: return "assembly";
  }
  return "unknown";
}

const Identifier& document_name(const Document& document) {
  return std::visit([](const auto& d) -> const Identifier& { return d.name; }, document);
}

Level document_level(const Document& document) { return static_cast<Level>(document.index()); }

const SourceSpan& document_span(const Document& document) {
  return std::visit([](const auto& d) -> const SourceSpan& { return d.span.value; }, document);
}

std::optional<HostRef> resolve_host(const Configuration& config, std::string_view host) {
  const auto* vm = find_named(config.vms, host);
  const auto* robot = find_named(config.robots, host);
  if ((vm == nullptr) == (robot == nullptr)) return std::nullopt;
  return HostRef{vm, robot};
}

}  // namespace crala
