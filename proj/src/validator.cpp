#include "crala/validator.hpp"

#include <algorithm>
#include <fmt/format.h>
#include <map>
#include <set>

namespace crala {

namespace {

void check_connection_kinds(const Connection& c, std::vector<Diagnostic>& out) {
  if (!c.flavor()) {
    out.push_back(make_diagnostic(
        "E-CONN-01",
        fmt::format("connection {} {} {} links a {} with a {}; allowed are role-role, role-sensor, "
                    "role-actuator and role~robot",
                    c.from.dotted(), c.op == ConnectionOp::directed ? "->" : "~", c.to.dotted(),
                    to_string(c.from.kind), to_string(c.to.kind)),
        c.span.value));
  }
}

bool touches(const ConnectionEnd& end, const Identifier& name) {
  return end.path.size() == 1 && end.path.front() == name;
}

}  // namespace

std::vector<Diagnostic> validate_specification(const Specification& spec) {
  std::vector<Diagnostic> out;
  for (const auto& c : spec.connections) {
    check_connection_kinds(c, out);
    if (c.protocol) {
      out.push_back(make_diagnostic(
          "E-CONN-02",
          fmt::format("connection {} -> {} names protocol '{}'; protocols belong to configurations",
                      c.from.dotted(), c.to.dotted(), *c.protocol),
          c.span.value));
    }
  }
  for (const auto& role : spec.roles) {
    if (role.interfaces.empty() && !role.incomplete()) {
      out.push_back(make_diagnostic(
          "E-ROLE-01",
          fmt::format("role '{}' lists no interfaces; add some or annotate incomplete = \"true\"",
                      role.name),
          role.span.value));
    }
    bool connected = std::ranges::any_of(spec.connections, [&](const Connection& c) {
      return touches(c.from, role.name) || touches(c.to, role.name);
    });
    if (!connected) {
      out.push_back(make_diagnostic("W-SPEC-01", fmt::format("role '{}' is not connected", role.name),
                                    role.span.value));
    }
  }
  sort_diagnostics(out);
  return out;
}

std::vector<Diagnostic> validate_configuration(const Configuration& config) {
  std::vector<Diagnostic> out;
  for (const auto& vm : config.vms) {
    if (!vm.os) {
      out.push_back(make_diagnostic(
          "W-OS-01", fmt::format("vm '{}' does not select an operating system", vm.name), vm.span.value));
    }
  }
  for (const auto& impl : config.impls) {
    if (!resolve_host(config, impl.host)) {
      bool both = find_named(config.vms, impl.host) && find_named(config.robots, impl.host);
      out.push_back(make_diagnostic(
          "E-HOST-01",
          both ? fmt::format("host '{}' of '{}' names both a vm and a robot", impl.host, impl.name)
               : fmt::format("host '{}' of '{}' is neither a vm nor a robot of this configuration", impl.host,
                             impl.name),
          impl.span.value));
    }
  }
  for (const auto& c : config.connections) {
    check_connection_kinds(c, out);
    auto flavor = c.flavor();
    if (flavor == ConnectionFlavor::abstract_robot) {
      out.push_back(make_diagnostic(
          "E-CONN-03",
          fmt::format("connection {} ~ {} joins a robot and a component directly; only "
                      "specifications may declare abstract robot links",
                      c.from.dotted(), c.to.dotted()),
          c.span.value));
    }
    if (flavor == ConnectionFlavor::role_role && !c.protocol) {
      const auto* a = find_named(config.impls, c.from.path.front());
      const auto* b = find_named(config.impls, c.to.path.front());
      if (a && b && resolve_host(config, a->host) && resolve_host(config, b->host) && a->host != b->host) {
        out.push_back(make_diagnostic(
            "E-PROTO-01",
            fmt::format("connection {} -> {} crosses hosts ('{}' to '{}') but names no protocol",
                        a->name, b->name, a->host, b->host),
            c.span.value));
      }
    }
  }
  sort_diagnostics(out);
  return out;
}

std::vector<Diagnostic> validate_cloud(const CloudDescription& cloud) {
  std::vector<Diagnostic> out;
  if (cloud.machines.empty()) {
    out.push_back(make_diagnostic("E-CLOUD-01",
                                  fmt::format("cloud '{}' has no physical machine", cloud.name),
                                  cloud.span.value));
  }
  return out;
}

std::vector<Diagnostic> validate_assembly(const Assembly& assembly, const Configuration& config) {
  std::vector<Diagnostic> out;
  for (const auto& cloud : assembly.clouds) {
    auto cloud_diags = validate_cloud(cloud);
    out.insert(out.end(), cloud_diags.begin(), cloud_diags.end());
  }

  // Valid placements, grouped per (cloud, machine); first placement of a VM wins.
  std::map<const PhysicalMachine*, std::vector<const VirtualMachine*>> on_machine;
  std::map<const CloudDescription*, std::vector<const VirtualMachine*>> in_cloud;
  std::set<Identifier> placed;
  for (const auto& p : assembly.placements) {
    if (!placed.insert(p.vm).second) {
      out.push_back(make_diagnostic("E-PLACE-03", fmt::format("vm '{}' is placed more than once", p.vm),
                                    p.span.value));
      continue;
    }
    const auto* cloud = find_named(assembly.clouds, p.cloud);
    const auto* pm = cloud ? find_named(cloud->machines, p.machine) : nullptr;
    if (pm == nullptr) {
      out.push_back(make_diagnostic(
          "E-PLACE-02",
          cloud ? fmt::format("cloud '{}' has no machine '{}'", p.cloud, p.machine)
                : fmt::format("unknown cloud '{}' (machine '{}')", p.cloud, p.machine),
          p.span.value));
      continue;
    }
    // VMs missing from the configuration are a refinement finding (E-REF-06).
    if (const auto* vm = find_named(config.vms, p.vm)) {
      on_machine[pm].push_back(vm);
      in_cloud[cloud].push_back(vm);
    }
  }

  for (const auto& vm : config.vms) {
    if (!placed.contains(vm.name)) {
      out.push_back(make_diagnostic(
          "E-PLACE-01", fmt::format("vm '{}' of '{}' has no placement", vm.name, config.name),
          assembly.span.value));
    }
  }

  for (const auto& cloud : assembly.clouds) {
    for (const auto& pm : cloud.machines) {
      auto it = on_machine.find(&pm);
      if (it == on_machine.end()) continue;
      std::int64_t used = 0;
      for (const auto* vm : it->second) used += vm->ram_mb;
      if (used > pm.ram_mb) {
        out.push_back(make_diagnostic(
            "E-CAP-01",
            fmt::format("machine '{}.{}' holds {} MB of VM RAM but has {} MB", cloud.name, pm.name, used,
                        pm.ram_mb),
            pm.span.value));
      }
    }
    if (cloud.network != NetworkMode::flat) continue;
    auto it = in_cloud.find(&cloud);
    if (it == in_cloud.end()) continue;
    std::set<std::string> subnets;
    for (const auto* vm : it->second) {
      if (vm->subnet) subnets.insert(*vm->subnet);
    }
    if (subnets.size() > 1) {
      std::string listed;
      for (const auto& s : subnets) listed += (listed.empty() ? "" : ", ") + s;
      out.push_back(make_diagnostic(
          "E-NET-01",
          fmt::format("flat-network cloud '{}' cannot host VMs in different subnets ({})", cloud.name,
                      listed),
          cloud.span.value));
    }
  }

  for (const auto& impl : config.impls) {
    bool instantiated = std::ranges::any_of(
        assembly.instances, [&](const ComponentInstance& inst) { return inst.of == impl.name; });
    if (!instantiated) {
      out.push_back(make_diagnostic(
          "E-INST-01", fmt::format("implementation '{}' has no instance", impl.name), assembly.span.value));
    }
  }
  sort_diagnostics(out);
  return out;
}

}  // namespace crala
