#include "crala/planner.hpp"

#include <algorithm>
#include <fmt/format.h>
#include <map>
#include <set>

namespace crala {

std::string_view to_string(PlanningFailure failure) {
  switch (failure) {
    case PlanningFailure::insufficient_capacity: return "InsufficientCapacity";
    case PlanningFailure::flat_network_conflict: return "FlatNetworkConflict";
    case PlanningFailure::invalid_input: return "InvalidInput";
  }
  return "Unknown";
}

PlanningError::PlanningError(PlanningFailure failure, std::string subject, const std::string& message)
    : std::runtime_error(message), failure_(failure), subject_(std::move(subject)) {}

Assembly plan_deployment(const Configuration& config, const CloudDescription& cloud, SchedulingPolicy policy,
                         std::string assembly_name) {
  if (cloud.machines.empty()) {
    throw PlanningError(PlanningFailure::invalid_input, cloud.name,
                        fmt::format("cloud '{}' has no physical machine", cloud.name));
  }
  if (cloud.network == NetworkMode::flat) {
    std::set<std::string> subnets;
    for (const auto& vm : config.vms) {
      if (vm.subnet) subnets.insert(*vm.subnet);
    }
    if (subnets.size() > 1) {
      throw PlanningError(PlanningFailure::flat_network_conflict, cloud.name,
                          fmt::format("flat-network cloud '{}' cannot host the {} subnets of '{}'", cloud.name,
                                      subnets.size(), config.name));
    }
  }

  std::vector<const VirtualMachine*> order;
  for (const auto& vm : config.vms) order.push_back(&vm);
  std::ranges::sort(order, [](const VirtualMachine* a, const VirtualMachine* b) {
    if (a->ram_mb != b->ram_mb) return a->ram_mb > b->ram_mb;
    return a->name < b->name;
  });

  std::vector<std::int64_t> free_ram;
  for (const auto& pm : cloud.machines) free_ram.push_back(pm.ram_mb);

  Assembly assembly;
  assembly.name = assembly_name.empty() ? fmt::format("{}_{}", config.name, to_string(policy)) : assembly_name;
  assembly.deploys = config.name;
  assembly.clouds.push_back(cloud);
  assembly.clouds.back().scheduler = policy;

  std::vector<VmPlacement> placements(config.vms.size());
  for (const auto* vm : order) {
    std::optional<std::size_t> chosen;
    for (std::size_t m = 0; m < free_ram.size(); ++m) {
      if (free_ram[m] < vm->ram_mb) continue;
      if (policy == SchedulingPolicy::pack) {
        chosen = m;
        break;
      }
      if (!chosen || free_ram[m] > free_ram[*chosen]) chosen = m;
    }
    if (!chosen) {
      throw PlanningError(PlanningFailure::insufficient_capacity, vm->name,
                          fmt::format("no machine of cloud '{}' has {} MB free for vm '{}'", cloud.name,
                                      vm->ram_mb, vm->name));
    }
    free_ram[*chosen] -= vm->ram_mb;
    auto index = static_cast<std::size_t>(vm - config.vms.data());
    placements[index] = VmPlacement{vm->name, cloud.machines[*chosen].name, cloud.name, {}};
  }
  // Placements follow VM declaration order so output stays readable.
  assembly.placements = std::move(placements);

  for (const auto& impl : config.impls) {
    assembly.instances.push_back(ComponentInstance{impl.name + "_1", impl.name, InstanceState::running, {}});
  }
  return assembly;
}

namespace {

std::vector<const VmPlacement*> placements_on(const Assembly& assembly, const std::string& cloud,
                                              const std::string& machine) {
  std::vector<const VmPlacement*> out;
  for (const auto& p : assembly.placements) {
    if (p.cloud == cloud && p.machine == machine) out.push_back(&p);
  }
  return out;
}

std::set<Identifier> failed_vm_set(const Assembly& assembly, const Configuration& config,
                                   const FailureEvent& event) {
  std::set<Identifier> failed;
  if (event.target_kind == TargetKind::vm) {
    if (find_named(config.vms, event.target) == nullptr) {
      throw UnknownTargetError(fmt::format("'{}' is not a vm of '{}'", event.target, config.name));
    }
    failed.insert(event.target);
    return failed;
  }
  auto dot = event.target.find('.');
  std::string cloud_name = dot == std::string::npos ? std::string() : event.target.substr(0, dot);
  std::string machine_name = dot == std::string::npos ? event.target : event.target.substr(dot + 1);
  std::vector<std::pair<const CloudDescription*, const PhysicalMachine*>> hits;
  for (const auto& cloud : assembly.clouds) {
    if (!cloud_name.empty() && cloud.name != cloud_name) continue;
    if (const auto* pm = find_named(cloud.machines, machine_name)) hits.emplace_back(&cloud, pm);
  }
  if (hits.empty()) {
    throw UnknownTargetError(fmt::format("'{}' is not a machine of '{}'", event.target, assembly.name));
  }
  if (hits.size() > 1) {
    throw UnknownTargetError(
        fmt::format("machine '{}' exists in several clouds; qualify it as cloud.machine", event.target));
  }
  for (const auto* p : placements_on(assembly, hits.front().first->name, hits.front().second->name)) {
    failed.insert(p->vm);
  }
  return failed;
}

}  // namespace

ImpactReport simulate_failure(const Assembly& assembly, const Configuration& config, const FailureEvent& event) {
  ImpactReport report;
  report.event = event;
  const auto failed = failed_vm_set(assembly, config, event);
  for (const auto& vm : config.vms) {
    if (failed.contains(vm.name)) report.failed_vms.push_back(vm.name);
  }

  std::set<Identifier> lost_impls;
  std::map<Identifier, bool> covered_before;
  std::map<Identifier, bool> covered_after;
  for (const auto& inst : assembly.instances) {
    if (inst.state != InstanceState::running) continue;
    const auto* impl = find_named(config.impls, inst.of);
    if (impl == nullptr) continue;
    covered_before[impl->realizes] = true;
    if (failed.contains(impl->host) && find_named(config.vms, impl->host)) {
      report.lost_instances.push_back(inst.name);
      lost_impls.insert(impl->name);
    } else {
      report.surviving_instances.push_back(inst.name);
      covered_after[impl->realizes] = true;
    }
  }
  for (const auto& impl : config.impls) {
    if (lost_impls.contains(impl.name)) report.lost_implementations.push_back(impl.name);
  }
  for (const auto& [role, covered] : covered_before) {
    if (covered && !covered_after.contains(role)) report.uncovered_roles.push_back(role);
  }
  return report;
}

DeploymentMetrics evaluate_metrics(const Assembly& assembly, const Configuration& config) {
  DeploymentMetrics metrics;
  std::optional<std::int64_t> headroom;
  for (const auto& cloud : assembly.clouds) {
    for (const auto& pm : cloud.machines) {
      auto placed = placements_on(assembly, cloud.name, pm.name);
      auto n = static_cast<std::int64_t>(placed.size());
      metrics.colocated_vm_pairs += n * (n - 1) / 2;
      std::int64_t used = 0;
      for (const auto* p : placed) {
        if (const auto* vm = find_named(config.vms, p->vm)) used += vm->ram_mb;
      }
      headroom = std::min(headroom.value_or(pm.ram_mb - used), pm.ram_mb - used);

      auto impact = simulate_failure(assembly, config,
                                     {fmt::format("{}.{}", cloud.name, pm.name), TargetKind::physical_machine});
      metrics.max_single_pm_loss =
          std::max(metrics.max_single_pm_loss, static_cast<std::int64_t>(impact.lost_implementations.size()));
    }
  }
  for (const auto& vm : config.vms) {
    auto impact = simulate_failure(assembly, config, {vm.name, TargetKind::vm});
    metrics.max_single_vm_loss =
        std::max(metrics.max_single_vm_loss, static_cast<std::int64_t>(impact.lost_implementations.size()));
  }
  metrics.min_ram_headroom_mb = headroom.value_or(0);
  return metrics;
}

}  // namespace crala
