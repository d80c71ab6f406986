#include "crala/refinement.hpp"

#include <algorithm>
#include <deque>
#include <fmt/format.h>
#include <fmt/ranges.h>
#include <set>
#include <stdexcept>

namespace crala {

namespace {

std::string list_interfaces(const std::vector<InterfaceRef>& refs) {
  std::string out;
  for (const auto& r : refs) {
    if (!out.empty()) out += ", ";
    out += fmt::format("{} {}", r.direction == Direction::provided ? "provides" : "requires", r.name);
  }
  return out;
}

std::set<std::string> kinds_of(const std::vector<DeviceSpec>& devices) {
  std::set<std::string> out;
  for (const auto& d : devices) out.insert(d.kind);
  return out;
}

std::vector<std::string> missing_kinds(const std::vector<DeviceSpec>& wanted,
                                       const std::vector<DeviceSpec>& offered) {
  auto have = kinds_of(offered);
  std::vector<std::string> out;
  for (const auto& kind : kinds_of(wanted)) {
    if (!have.contains(kind)) out.push_back(kind);
  }
  return out;
}

std::vector<const ComponentImplementation*> realizers(const Configuration& config, const Identifier& role) {
  std::vector<const ComponentImplementation*> out;
  for (const auto& impl : config.impls) {
    if (impl.realizes == role) out.push_back(&impl);
  }
  return out;
}

const Identifier& role_end(const Connection& c) {
  return c.from.kind == EndKind::role ? c.from.path.front() : c.to.path.front();
}

const Identifier& robot_end(const Connection& c) {
  return c.from.kind == EndKind::robot ? c.from.path.front() : c.to.path.front();
}

// An implementation reaches a robot model when it is hosted there or wired to
// one of its sensors/actuators; reachability then spreads over role-role links.
bool abstract_link_realized(const Configuration& config,
                            const std::vector<const ComponentImplementation*>& starts,
                            const std::set<Identifier>& models) {
  auto touches_model = [&](const ComponentImplementation& impl) {
    if (models.contains(impl.host) && find_named(config.robots, impl.host)) return true;
    return std::ranges::any_of(config.connections, [&](const Connection& c) {
      auto flavor = c.flavor();
      if (flavor != ConnectionFlavor::role_sensor && flavor != ConnectionFlavor::role_actuator) return false;
      const auto& device = c.from.path.size() == 2 ? c.from : c.to;
      const auto& other = c.from.path.size() == 2 ? c.to : c.from;
      return other.path.front() == impl.name && models.contains(device.path.front());
    });
  };

  std::set<Identifier> seen;
  std::deque<const ComponentImplementation*> queue(starts.begin(), starts.end());
  for (const auto* s : starts) seen.insert(s->name);
  while (!queue.empty()) {
    const auto* impl = queue.front();
    queue.pop_front();
    if (touches_model(*impl)) return true;
    for (const auto& c : config.connections) {
      if (c.flavor() != ConnectionFlavor::role_role) continue;
      const Identifier* next = nullptr;
      if (c.from.path.front() == impl->name) next = &c.to.path.front();
      if (c.to.path.front() == impl->name) next = &c.from.path.front();
      if (next == nullptr || seen.contains(*next)) continue;
      if (const auto* n = find_named(config.impls, *next)) {
        seen.insert(n->name);
        queue.push_back(n);
      }
    }
  }
  return false;
}

bool impls_connected(const Configuration& config, const std::vector<const ComponentImplementation*>& a,
                     const std::vector<const ComponentImplementation*>& b) {
  auto in = [](const std::vector<const ComponentImplementation*>& set, const Identifier& name) {
    return std::ranges::any_of(set, [&](const auto* impl) { return impl->name == name; });
  };
  return std::ranges::any_of(config.connections, [&](const Connection& c) {
    if (c.flavor() != ConnectionFlavor::role_role) return false;
    const auto& x = c.from.path.front();
    const auto& y = c.to.path.front();
    return (in(a, x) && in(b, y)) || (in(a, y) && in(b, x));
  });
}

void finish(RefinementReport& report) {
  sort_diagnostics(report.diagnostics);
  report.ok = !has_errors(report.diagnostics);
}

}  // namespace

RefinementReport check_config_refines_spec(const Configuration& config, const Specification& spec) {
  if (config.implements != spec.name) {
    throw std::invalid_argument(fmt::format("configuration '{}' implements '{}', not '{}'", config.name,
                                            config.implements, spec.name));
  }
  RefinementReport report{config.name, spec.name, LinkKind::implements, true, {}, {}};
  auto& diags = report.diagnostics;
  const SourceSpan& config_span = config.span.value;

  for (const auto& impl : config.impls) {
    if (find_named(spec.roles, impl.realizes) == nullptr) {
      diags.push_back(make_diagnostic(
          "E-REF-07",
          fmt::format("'{}' realizes '{}', which is not a role of '{}'", impl.name, impl.realizes, spec.name),
          impl.span.value));
    }
  }
  for (const auto& robot : config.robots) {
    if (find_named(spec.robots, robot.realizes) == nullptr) {
      diags.push_back(make_diagnostic(
          "E-REF-07",
          fmt::format("robot '{}' realizes '{}', which is not a concept robot of '{}'", robot.name,
                      robot.realizes, spec.name),
          robot.span.value));
    }
  }

  // R1 + R2: every role realized, with at least its interfaces.
  for (const auto& role : spec.roles) {
    auto impls = realizers(config, role.name);
    if (impls.empty()) {
      diags.push_back(make_diagnostic(
          "E-REF-01", fmt::format("role '{}' has no implementation in '{}'", role.name, config.name),
          config_span));
      continue;
    }
    for (const auto* impl : impls) {
      report.bindings.push_back({role.name, impl->name});
      std::vector<InterfaceRef> missing;
      for (const auto& want : role.interfaces) {
        if (std::ranges::find(impl->interfaces, want) == impl->interfaces.end()) missing.push_back(want);
      }
      if (!missing.empty()) {
        diags.push_back(make_diagnostic(
            "E-REF-02",
            fmt::format("'{}' realizes role '{}' but lacks: {}", impl->name, role.name,
                        list_interfaces(missing)),
            impl->span.value));
      }
    }
  }

  // R3: every concept robot realized by robot models covering its device kinds.
  for (const auto& concept_robot : spec.robots) {
    bool realized = false;
    for (const auto& robot : config.robots) {
      if (robot.realizes != concept_robot.name) continue;
      realized = true;
      report.bindings.push_back({concept_robot.name, robot.name});
      auto sensors = missing_kinds(concept_robot.sensors, robot.sensors);
      auto actuators = missing_kinds(concept_robot.actuators, robot.actuators);
      if (!sensors.empty() || !actuators.empty()) {
        diags.push_back(make_diagnostic(
            "E-REF-03",
            fmt::format("robot '{}' realizes '{}' but lacks sensor kinds [{}] and actuator kinds [{}]",
                        robot.name, concept_robot.name, fmt::join(sensors, ", "),
                        fmt::join(actuators, ", ")),
            robot.span.value));
      }
    }
    if (!realized) {
      diags.push_back(make_diagnostic(
          "E-REF-03",
          fmt::format("concept robot '{}' has no robot model in '{}'", concept_robot.name, config.name),
          config_span));
    }
  }

  for (const auto& c : spec.connections) {
    auto flavor = c.flavor();
    if (flavor == ConnectionFlavor::abstract_robot) {
      // R4. Unrealized roles/robots are already reported above.
      const auto& role = role_end(c);
      const auto& concept_robot = robot_end(c);
      auto impls = realizers(config, role);
      std::set<Identifier> models;
      for (const auto& robot : config.robots) {
        if (robot.realizes == concept_robot) models.insert(robot.name);
      }
      if (impls.empty() || models.empty()) continue;
      if (!abstract_link_realized(config, impls, models)) {
        diags.push_back(make_diagnostic(
            "E-REF-04",
            fmt::format("'{}' ~ '{}': no implementation of '{}' runs on or reaches a robot realizing '{}'",
                        role, concept_robot, role, concept_robot),
            config_span));
      }
    } else if (flavor == ConnectionFlavor::role_role) {
      // R5.
      auto a = realizers(config, c.from.path.front());
      auto b = realizers(config, c.to.path.front());
      if (a.empty() || b.empty()) continue;
      if (!impls_connected(config, a, b)) {
        diags.push_back(make_diagnostic(
            "E-REF-05",
            fmt::format("roles '{}' and '{}' are connected in '{}' but none of their implementations are",
                        c.from.dotted(), c.to.dotted(), spec.name),
            config_span));
      }
    }
  }
  finish(report);
  return report;
}

RefinementReport check_assembly_deploys_config(const Assembly& assembly, const Configuration& config) {
  if (assembly.deploys != config.name) {
    throw std::invalid_argument(fmt::format("assembly '{}' deploys '{}', not '{}'", assembly.name,
                                            assembly.deploys, config.name));
  }
  RefinementReport report{assembly.name, config.name, LinkKind::deploys, true, {}, {}};
  auto& diags = report.diagnostics;

  for (const auto& vm : config.vms) {
    const auto* p = [&]() -> const VmPlacement* {
      for (const auto& placement : assembly.placements) {
        if (placement.vm == vm.name) return &placement;
      }
      return nullptr;
    }();
    if (p == nullptr) {
      diags.push_back(make_diagnostic(
          "E-PLACE-01", fmt::format("vm '{}' of '{}' has no placement", vm.name, config.name),
          assembly.span.value));
    } else {
      report.bindings.push_back({vm.name, p->cloud + "." + p->machine});
    }
  }
  for (const auto& p : assembly.placements) {
    if (find_named(config.vms, p.vm) == nullptr) {
      diags.push_back(make_diagnostic(
          "E-REF-06", fmt::format("placement of '{}', which is not a vm of '{}'", p.vm, config.name),
          p.span.value));
    }
  }
  for (const auto& impl : config.impls) {
    bool any = false;
    for (const auto& inst : assembly.instances) {
      if (inst.of != impl.name) continue;
      any = true;
      report.bindings.push_back({impl.name, inst.name});
    }
    if (!any) {
      diags.push_back(make_diagnostic(
          "E-INST-01", fmt::format("implementation '{}' has no instance", impl.name), assembly.span.value));
    }
  }
  for (const auto& inst : assembly.instances) {
    if (find_named(config.impls, inst.of) == nullptr) {
      diags.push_back(make_diagnostic(
          "E-REF-06",
          fmt::format("instance '{}' is of '{}', which is not an implementation of '{}'", inst.name, inst.of,
                      config.name),
          inst.span.value));
    }
  }
  finish(report);
  return report;
}

VariabilityGraph build_variability_graph(const Workspace& workspace) {
  VariabilityGraph graph;
  auto docs = workspace.documents();
  for (const auto& doc : docs) graph.nodes.push_back({document_name(doc), document_level(doc)});
  for (const auto& link : workspace.links()) {
    graph.edges.push_back(
        {document_name(docs[link.child]), document_name(docs[link.parent]), link.kind});
  }

  for (std::size_t s = 0; s < docs.size(); ++s) {
    const auto* spec = std::get_if<Specification>(&docs[s]);
    if (spec == nullptr) continue;
    for (const auto& role : spec->roles) {
      for (std::size_t c : workspace.children_of(s)) {
        const auto& config = std::get<Configuration>(docs[c]);
        for (const auto& impl : config.impls) {
          if (impl.realizes != role.name) continue;
          bool instantiated = false;
          for (std::size_t a : workspace.children_of(c)) {
            const auto& assembly = std::get<Assembly>(docs[a]);
            for (const auto& inst : assembly.instances) {
              if (inst.of != impl.name) continue;
              instantiated = true;
              graph.micro_edges.push_back(
                  {spec->name, role.name, config.name, impl.name, assembly.name, inst.name});
            }
          }
          if (!instantiated) {
            graph.micro_edges.push_back({spec->name, role.name, config.name, impl.name, {}, {}});
          }
        }
      }
    }
  }
  return graph;
}

}  // namespace crala
