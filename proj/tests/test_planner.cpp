#include <gtest/gtest.h>

#include <set>

#include "crala/parser.hpp"
#include "crala/planner.hpp"
#include "crala/refinement.hpp"
#include "crala/validator.hpp"
#include "support/fixtures.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace crala;
using crala::testing::load;

namespace {

Configuration config1() { return load<Configuration>("lab/config1.crala"); }
Configuration config2() { return load<Configuration>("lab/config2.crala"); }
CloudDescription lab() { return crala::testing::load_cloud("lab/lab.crala"); }

std::vector<std::pair<std::string, std::string>> placements(const Assembly& a) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& p : a.placements) out.emplace_back(p.vm, p.machine);
  return out;
}

VirtualMachine vm(const std::string& name, std::int64_t ram) { return {name, "ROS", 1, ram, std::nullopt, {}}; }
PhysicalMachine pm(const std::string& name, std::int64_t ram) { return {name, ram, 8, {}}; }

PlanningFailure failure_of(const Configuration& c, const CloudDescription& k, SchedulingPolicy p) {
  try {
    plan_deployment(c, k, p);
  } catch (const PlanningError& e) {
    return e.failure();
  }
  ADD_FAILURE() << "planning succeeded";
  return PlanningFailure::invalid_input;
}

}  // namespace

TEST(Plan, SpreadGivesAss1Shape) {
  auto a = plan_deployment(config1(), lab(), SchedulingPolicy::spread);
  EXPECT_EQ(placements(a), (std::vector<std::pair<std::string, std::string>>{{"VM1", "PM1"}, {"VM2", "PM2"}}));
  EXPECT_EQ(a.name, "Config1_spread");
  EXPECT_EQ(a.deploys, "Config1");
  EXPECT_EQ(a.instances.size(), 3u);
}

TEST(Plan, PackGivesAss2Shape) {
  auto a = plan_deployment(config1(), lab(), SchedulingPolicy::pack, "Packed");
  EXPECT_EQ(placements(a), (std::vector<std::pair<std::string, std::string>>{{"VM1", "PM1"}, {"VM2", "PM1"}}));
  EXPECT_EQ(a.name, "Packed");
  EXPECT_EQ(a.clouds[0].scheduler, SchedulingPolicy::pack);
}

TEST(Plan, NoVms) {
  Configuration c;
  c.name = "C";
  auto a = plan_deployment(c, lab(), SchedulingPolicy::spread);
  EXPECT_TRUE(a.placements.empty());
  EXPECT_TRUE(validate_assembly(a, c).empty());
  EXPECT_TRUE(check_assembly_deploys_config(a, c).ok);
}

TEST(Plan, InsufficientCapacityNamesThirdVm) {
  Configuration c;
  c.name = "C";
  c.vms = {vm("A", 4096), vm("B", 4096), vm("C", 4096)};
  CloudDescription k{"K", NetworkMode::sdn, SchedulingPolicy::pack, {pm("PM1", 8192)}, {}};
  EXPECT_FALSE(oracle::feasible_placement_exists({4096, 4096, 4096}, {8192}));
  for (auto policy : {SchedulingPolicy::spread, SchedulingPolicy::pack}) {
    try {
      plan_deployment(c, k, policy);
      FAIL() << "expected a planning error";
    } catch (const PlanningError& e) {
      EXPECT_EQ(e.failure(), PlanningFailure::insufficient_capacity);
      EXPECT_EQ(e.subject(), "C");
    }
  }
}

TEST(Plan, FlatNetworkConflictAndInvalidInput) {
  auto c = config1();
  c.vms[0].subnet = "a";
  c.vms[1].subnet = "b";
  auto k = lab();
  k.network = NetworkMode::flat;
  EXPECT_EQ(failure_of(c, k, SchedulingPolicy::spread), PlanningFailure::flat_network_conflict);
  k.network = NetworkMode::sdn;
  EXPECT_NO_THROW(plan_deployment(c, k, SchedulingPolicy::spread));
  k.machines.clear();
  EXPECT_EQ(failure_of(config1(), k, SchedulingPolicy::pack), PlanningFailure::invalid_input);
}

TEST(Plan, LargestVmsGoFirst) {
  Configuration c;
  c.name = "C";
  c.vms = {vm("small", 1024), vm("big", 6144), vm("mid", 2048)};
  CloudDescription k{"K", NetworkMode::sdn, SchedulingPolicy::pack, {pm("P1", 7168), pm("P2", 7168)}, {}};
  // pack: big -> P1 (1024 left), mid -> P2, small -> P1.
  auto packed = plan_deployment(c, k, SchedulingPolicy::pack);
  EXPECT_EQ(placements(packed),
            (std::vector<std::pair<std::string, std::string>>{{"small", "P1"}, {"big", "P1"}, {"mid", "P2"}}));
  // spread: big -> P1, mid -> P2 (7168 free), small -> P2 (5120 > 1024).
  auto spread = plan_deployment(c, k, SchedulingPolicy::spread);
  EXPECT_EQ(placements(spread),
            (std::vector<std::pair<std::string, std::string>>{{"small", "P2"}, {"big", "P1"}, {"mid", "P2"}}));
}

TEST(Plan, OutputIsDeterministic) {
  crala::testing::Gen g(3);
  for (int i = 0; i < 100; ++i) {
    auto sys = crala::testing::random_system(g);
    auto cloud = crala::testing::random_cloud(g, 1);
    cloud.network = NetworkMode::sdn;
    try {
      auto a = format(Document{plan_deployment(sys.config, cloud, SchedulingPolicy::spread)});
      auto b = format(Document{plan_deployment(sys.config, cloud, SchedulingPolicy::spread)});
      EXPECT_EQ(a, b);
    } catch (const PlanningError&) {
    }
  }
}

TEST(Plan, SuccessfulPlansValidateOverGeneratedConfigs) {
  crala::testing::Gen g(2025);
  int planned = 0;
  for (int i = 0; i < 1000; ++i) {
    auto sys = crala::testing::random_system(g);
    auto cloud = crala::testing::random_cloud(g, 1);
    for (auto& m : cloud.machines) m.ram_mb = 1024 * g.between(1, 8);
    auto policy = g.chance(0.5) ? SchedulingPolicy::spread : SchedulingPolicy::pack;
    std::vector<std::int64_t> vm_ram;
    std::vector<std::int64_t> machine_ram;
    for (const auto& v : sys.config.vms) vm_ram.push_back(v.ram_mb);
    for (const auto& m : cloud.machines) machine_ram.push_back(m.ram_mb);
    try {
      auto a = plan_deployment(sys.config, cloud, policy);
      ++planned;
      EXPECT_TRUE(validate_assembly(a, sys.config).empty()) << format(Document{a});
      EXPECT_TRUE(check_assembly_deploys_config(a, sys.config).ok);
      EXPECT_TRUE(oracle::feasible_placement_exists(vm_ram, machine_ram));
    } catch (const PlanningError& e) {
      if (e.failure() == PlanningFailure::insufficient_capacity && vm_ram.size() <= 1) {
        EXPECT_FALSE(oracle::feasible_placement_exists(vm_ram, machine_ram));
      }
    }
  }
  EXPECT_GT(planned, 500);
}

TEST(Plan, SpreadColocatesLessThanPackOnUniformMachines) {
  crala::testing::Gen g(11);
  for (int i = 0; i < 300; ++i) {
    Configuration c;
    c.name = "C";
    auto n = g.between(2, 6);
    std::int64_t total = 0;
    for (std::int64_t k = 0; k < n; ++k) {
      c.vms.push_back(vm("V" + std::to_string(k), 256 * g.between(1, 8)));
      total += c.vms.back().ram_mb;
    }
    CloudDescription cloud{"K", NetworkMode::sdn, SchedulingPolicy::spread, {}, {}};
    auto machines = g.between(2, 4);
    for (std::int64_t k = 0; k < machines; ++k) cloud.machines.push_back(pm("P" + std::to_string(k), total));
    auto spread = evaluate_metrics(plan_deployment(c, cloud, SchedulingPolicy::spread), c);
    auto pack = evaluate_metrics(plan_deployment(c, cloud, SchedulingPolicy::pack), c);
    EXPECT_LT(spread.colocated_vm_pairs, pack.colocated_vm_pairs);
  }
}

TEST(Plan, ContrastFailsOnUnevenMachines) {
  // Both machines fit each VM, yet spread keeps choosing the roomier one.
  Configuration c;
  c.name = "C";
  c.vms = {vm("A", 1024), vm("B", 1024)};
  CloudDescription k{"K", NetworkMode::sdn, SchedulingPolicy::spread, {pm("P1", 8192), pm("P2", 1024)}, {}};
  auto spread = evaluate_metrics(plan_deployment(c, k, SchedulingPolicy::spread), c);
  auto pack = evaluate_metrics(plan_deployment(c, k, SchedulingPolicy::pack), c);
  EXPECT_EQ(spread.colocated_vm_pairs, pack.colocated_vm_pairs);
}

TEST(Simulate, Config2VmFailureLosesBothServices) {
  auto c = config2();
  auto a = plan_deployment(c, lab(), SchedulingPolicy::spread);
  auto report = simulate_failure(a, c, {"VM1", TargetKind::vm});
  EXPECT_EQ(report.lost_implementations, (std::vector<std::string>{"LocalisationService", "PathPlanningService"}));
  EXPECT_EQ(report.uncovered_roles, (std::vector<std::string>{"Localisation", "PathPlanning"}));
  EXPECT_EQ(report.surviving_instances, std::vector<std::string>{"CameraDriverImpl_1"});
}

TEST(Simulate, Config1VmFailureLosesOne) {
  auto c = config1();
  auto report = simulate_failure(load<Assembly>("lab/ass1.crala"), c, {"VM1", TargetKind::vm});
  EXPECT_EQ(report.lost_implementations, std::vector<std::string>{"LocalisationService"});
  EXPECT_EQ(report.uncovered_roles, std::vector<std::string>{"Localisation"});
  EXPECT_EQ(std::ranges::count(report.surviving_instances, "plan1"), 1);
}

TEST(Simulate, IdleVmAndMachineTargets) {
  auto c = config1();
  c.vms.push_back(vm("Idle", 512));
  auto a = load<Assembly>("lab/ass1.crala");
  a.placements.push_back({"Idle", "PM2", "Lab", {}});
  auto idle = simulate_failure(a, c, {"Idle", TargetKind::vm});
  EXPECT_TRUE(idle.lost_instances.empty());
  auto machine = simulate_failure(a, c, {"Lab.PM2", TargetKind::physical_machine});
  EXPECT_EQ(machine.failed_vms, (std::vector<std::string>{"VM2", "Idle"}));
  EXPECT_EQ(machine.lost_implementations, std::vector<std::string>{"PathPlanningService"});
  EXPECT_THROW(simulate_failure(a, c, {"VM9", TargetKind::vm}), UnknownTargetError);
  EXPECT_THROW(simulate_failure(a, c, {"PM9", TargetKind::physical_machine}), UnknownTargetError);
}

TEST(Simulate, FailedInstancesAreNotCounted) {
  auto c = config1();
  auto a = load<Assembly>("lab/ass1.crala");
  a.instances[0].state = InstanceState::failed;
  auto report = simulate_failure(a, c, {"VM1", TargetKind::vm});
  EXPECT_TRUE(report.lost_instances.empty());
  EXPECT_TRUE(report.uncovered_roles.empty());
}

TEST(Metrics, ReferenceAssemblies) {
  auto c = config1();
  auto ass1 = evaluate_metrics(load<Assembly>("lab/ass1.crala"), c);
  auto ass2 = evaluate_metrics(load<Assembly>("lab/ass2.crala"), c);
  EXPECT_EQ(ass1.colocated_vm_pairs, 0);
  EXPECT_EQ(ass2.colocated_vm_pairs, 1);
  EXPECT_EQ(ass1.min_ram_headroom_mb, 4096);
  EXPECT_GT(ass1.min_ram_headroom_mb, ass2.min_ram_headroom_mb);
  // Every VM-hosted implementation sits on PM1 in Ass2.
  std::int64_t vm_hosted = 0;
  for (const auto& impl : c.impls) vm_hosted += find_named(c.vms, impl.host) ? 1 : 0;
  EXPECT_EQ(ass2.max_single_pm_loss, vm_hosted);
  EXPECT_EQ(ass1.max_single_pm_loss, 1);
}

TEST(Metrics, EmptyAssembly) {
  Configuration c;
  c.name = "C";
  Assembly a;
  a.name = "A";
  a.deploys = "C";
  a.clouds.push_back({"K", NetworkMode::sdn, SchedulingPolicy::spread, {pm("P1", 4096), pm("P2", 2048)}, {}});
  EXPECT_EQ(evaluate_metrics(a, c), (DeploymentMetrics{0, 0, 0, 2048}));
}

TEST(Metrics, AgreeWithBruteForceEnumeration) {
  crala::testing::Gen g(555);
  for (int i = 0; i < 500; ++i) {
    auto sys = crala::testing::random_system(g);
    auto cloud = crala::testing::random_cloud(g, 1);
    cloud.network = NetworkMode::sdn;
    for (auto& m : cloud.machines) m.ram_mb = 1 << 20;
    auto a = plan_deployment(sys.config, cloud, g.chance(0.5) ? SchedulingPolicy::spread : SchedulingPolicy::pack);
    for (auto& inst : a.instances) {
      if (g.chance(0.2)) inst.state = InstanceState::failed;
    }
    auto m = evaluate_metrics(a, sys.config);
    EXPECT_EQ(m.colocated_vm_pairs, oracle::colocated_pairs(a));
    EXPECT_EQ(m.max_single_vm_loss, oracle::worst_vm_loss(a, sys.config));
    EXPECT_EQ(m.max_single_pm_loss, oracle::worst_pm_loss(a, sys.config));
    std::int64_t via_simulation = 0;
    for (const auto& v : sys.config.vms) {
      auto r = simulate_failure(a, sys.config, {v.name, TargetKind::vm});
      via_simulation = std::max<std::int64_t>(via_simulation, static_cast<std::int64_t>(r.lost_implementations.size()));
    }
    EXPECT_EQ(m.max_single_vm_loss, via_simulation);
  }
}
