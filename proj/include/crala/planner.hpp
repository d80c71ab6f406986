#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "crala/model.hpp"

namespace crala {

enum class PlanningFailure { insufficient_capacity, flat_network_conflict, invalid_input };

std::string_view to_string(PlanningFailure failure);

class PlanningError : public std::runtime_error {
 public:
  PlanningError(PlanningFailure failure, std::string subject, const std::string& message);

  PlanningFailure failure() const { return failure_; }
  /// The unplaceable VM, or the cloud for a network conflict.
  const std::string& subject() const { return subject_; }

 private:
  PlanningFailure failure_;
  std::string subject_;
};

/// Places every VM of `config` onto `cloud` and instantiates each implementation once.
///
/// VMs are taken in descending ram_mb order (ties by name). `spread` puts each VM
/// on the fitting machine with the most free RAM (ties by declaration order);
/// `pack` uses first fit over the machines in declaration order. Components
/// hosted on robots stay on their robots. `assembly_name` defaults to
/// "<config>_<policy>". The copied cloud records `policy` as its scheduler.
///
/// Throws PlanningError: insufficient_capacity names the first VM that fits
/// nowhere; flat_network_conflict when a flat cloud would have to mix subnets;
/// invalid_input for a cloud without machines.
Assembly plan_deployment(const Configuration& config, const CloudDescription& cloud, SchedulingPolicy policy,
                         std::string assembly_name = {});

enum class TargetKind { vm, physical_machine };

struct FailureEvent {
  /// A VM name, a machine name, or `cloud.machine`.
  std::string target;
  TargetKind target_kind = TargetKind::vm;
};

class UnknownTargetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ImpactReport {
  FailureEvent event;
  std::vector<Identifier> failed_vms;
  std::vector<Identifier> lost_instances;
  std::vector<Identifier> surviving_instances;
  /// Implementations that had a running instance taken down by the event.
  std::vector<Identifier> lost_implementations;
  /// Roles that had a running realization before the event and none after.
  std::vector<Identifier> uncovered_roles;
};

/// Fails a VM, or a physical machine together with every VM placed on it, and
/// reports which instances and roles are lost. Throws UnknownTargetError.
ImpactReport simulate_failure(const Assembly& assembly, const Configuration& config, const FailureEvent& event);

struct DeploymentMetrics {
  std::int64_t colocated_vm_pairs = 0;
  std::int64_t max_single_vm_loss = 0;
  std::int64_t max_single_pm_loss = 0;
  std::int64_t min_ram_headroom_mb = 0;

  friend bool operator==(const DeploymentMetrics&, const DeploymentMetrics&) = default;
};

/// Single-failure metrics by exhaustive enumeration over VMs and machines.
/// Headroom is min over machines of capacity minus placed VM RAM (0 without machines).
DeploymentMetrics evaluate_metrics(const Assembly& assembly, const Configuration& config);

}  // namespace crala
