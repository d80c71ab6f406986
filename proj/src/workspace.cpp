#include "crala/workspace.hpp"

#include <algorithm>
#include <fmt/format.h>
#include <unordered_map>

namespace crala {

std::string_view to_string(LinkKind kind) {
  return kind == LinkKind::implements ? "implements" : "deploys";
}

std::string_view to_string(ElementKind kind) {
  switch (kind) {
    case ElementKind::specification: return "specification";
    case ElementKind::configuration: return "configuration";
    case ElementKind::assembly: return "assembly";
    case ElementKind::role: return "role";
    case ElementKind::concept_robot: return "concept_robot";
    case ElementKind::sensor: return "sensor";
    case ElementKind::actuator: return "actuator";
    case ElementKind::robot_model: return "robot_model";
    case ElementKind::vm: return "vm";
    case ElementKind::implementation: return "implementation";
    case ElementKind::cloud: return "cloud";
    case ElementKind::machine: return "machine";
    case ElementKind::instance: return "instance";
  }
  return "unknown";
}

std::string Element::dotted() const {
  std::string out;
  for (const auto& part : path) {
    if (!out.empty()) out += '.';
    out += part;
  }
  return out;
}

Workspace build_workspace(std::vector<Document> documents) {
  Workspace ws;
  ws.documents_ = std::move(documents);

  std::unordered_map<std::string, std::size_t> first;
  for (std::size_t i = 0; i < ws.documents_.size(); ++i) {
    const auto& name = document_name(ws.documents_[i]);
    auto [it, inserted] = first.emplace(name, i);
    if (!inserted) {
      ws.diagnostics_.push_back(make_diagnostic(
          "E-WS-01", fmt::format("document name '{}' is already used", name),
          document_span(ws.documents_[i])));
    }
  }

  auto link = [&](std::size_t child, const Identifier& target, Level expected, LinkKind kind) {
    const auto& child_name = document_name(ws.documents_[child]);
    auto it = first.find(target);
    if (it == first.end()) {
      ws.diagnostics_.push_back(make_diagnostic(
          "E-WS-03",
          fmt::format("'{}' {} unknown document '{}'", child_name, to_string(kind), target),
          document_span(ws.documents_[child])));
      return;
    }
    Level actual = document_level(ws.documents_[it->second]);
    if (actual != expected) {
      ws.diagnostics_.push_back(make_diagnostic(
          "E-WS-02",
          fmt::format("'{}' {} '{}', which is a {} (expected a {})", child_name, to_string(kind),
                      target, to_string(actual), to_string(expected)),
          document_span(ws.documents_[child])));
      return;
    }
    ws.links_.push_back(Link{child, it->second, kind});
  };

  for (std::size_t i = 0; i < ws.documents_.size(); ++i) {
    const auto& doc = ws.documents_[i];
    if (const auto* config = std::get_if<Configuration>(&doc)) {
      link(i, config->implements, Level::specification, LinkKind::implements);
    } else if (const auto* assembly = std::get_if<Assembly>(&doc)) {
      link(i, assembly->deploys, Level::configuration, LinkKind::deploys);
    }
  }
  sort_diagnostics(ws.diagnostics_);
  return ws;
}

std::optional<std::size_t> Workspace::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < documents_.size(); ++i) {
    if (document_name(documents_[i]) == name) return i;
  }
  return std::nullopt;
}

std::optional<std::size_t> Workspace::parent_of(std::size_t child) const {
  auto it = std::ranges::find(links_, child, &Link::child);
  if (it == links_.end()) return std::nullopt;
  return it->parent;
}

std::vector<std::size_t> Workspace::children_of(std::size_t parent) const {
  std::vector<std::size_t> out;
  for (const auto& l : links_) {
    if (l.parent == parent) out.push_back(l.child);
  }
  return out;
}

const Specification* Workspace::specification_of(const Configuration& config) const {
  for (const auto& l : links_) {
    if (std::get_if<Configuration>(&documents_[l.child]) == &config) {
      return std::get_if<Specification>(&documents_[l.parent]);
    }
  }
  return nullptr;
}

const Configuration* Workspace::configuration_of(const Assembly& assembly) const {
  for (const auto& l : links_) {
    if (std::get_if<Assembly>(&documents_[l.child]) == &assembly) {
      return std::get_if<Configuration>(&documents_[l.parent]);
    }
  }
  return nullptr;
}

namespace {

void add_devices(std::vector<Element>& out, const std::vector<Identifier>& owner,
                 const std::vector<DeviceSpec>& devices, ElementKind kind) {
  for (const auto& d : devices) {
    auto path = owner;
    path.push_back(d.name);
    out.push_back({kind, std::move(path), &d});
  }
}

struct ElementCollector {
  std::vector<Element>& out;

  void operator()(const Specification& spec) const {
    out.push_back({ElementKind::specification, {spec.name}, &spec});
    for (const auto& role : spec.roles) out.push_back({ElementKind::role, {spec.name, role.name}, &role});
    for (const auto& robot : spec.robots) {
      std::vector<Identifier> owner{spec.name, robot.name};
      out.push_back({ElementKind::concept_robot, owner, &robot});
      add_devices(out, owner, robot.sensors, ElementKind::sensor);
      add_devices(out, owner, robot.actuators, ElementKind::actuator);
    }
  }

  void operator()(const Configuration& config) const {
    out.push_back({ElementKind::configuration, {config.name}, &config});
    for (const auto& robot : config.robots) {
      std::vector<Identifier> owner{config.name, robot.name};
      out.push_back({ElementKind::robot_model, owner, &robot});
      add_devices(out, owner, robot.sensors, ElementKind::sensor);
      add_devices(out, owner, robot.actuators, ElementKind::actuator);
    }
    for (const auto& vm : config.vms) out.push_back({ElementKind::vm, {config.name, vm.name}, &vm});
    for (const auto& impl : config.impls) {
      out.push_back({ElementKind::implementation, {config.name, impl.name}, &impl});
    }
  }

  void operator()(const Assembly& assembly) const {
    out.push_back({ElementKind::assembly, {assembly.name}, &assembly});
    for (const auto& cloud : assembly.clouds) {
      out.push_back({ElementKind::cloud, {assembly.name, cloud.name}, &cloud});
      for (const auto& pm : cloud.machines) {
        out.push_back({ElementKind::machine, {assembly.name, cloud.name, pm.name}, &pm});
      }
    }
    for (const auto& inst : assembly.instances) {
      out.push_back({ElementKind::instance, {assembly.name, inst.name}, &inst});
    }
  }
};

}  // namespace

std::vector<Element> Workspace::elements() const {
  std::vector<Element> out;
  for (const auto& doc : documents_) std::visit(ElementCollector{out}, doc);
  return out;
}

Resolution Workspace::resolve(std::span<const Identifier> path) const {
  if (path.empty()) return NotFound{};
  std::vector<Element> matches;
  for (auto& element : elements()) {
    if (element.path.size() < path.size()) continue;
    if (std::ranges::equal(path, std::span(element.path).last(path.size()))) {
      matches.push_back(std::move(element));
    }
  }
  if (matches.empty()) return NotFound{};
  if (matches.size() == 1) return std::move(matches.front());
  return Ambiguous{std::move(matches)};
}

}  // namespace crala
