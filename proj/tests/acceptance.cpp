// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <filesystem>
#include <iostream>
#include <set>
#include <sstream>

#include "crala/cli.hpp"
#include "crala/emit.hpp"
#include "crala/planner.hpp"
#include "crala/rules.hpp"
#include "crala/validator.hpp"
#include "support/fixtures.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace crala;
namespace t = crala::testing;

namespace {

class Criterion {
 public:
  Criterion(int number, std::string title) : number_(number), title_(std::move(title)) {}

  void expect(bool condition, const std::string& what) {
    if (!condition && failures_.size() < 5) failures_.push_back(what);
    ok_ = ok_ && condition;
  }

  bool report() const {
    std::cout << (ok_ ? "PASS" : "FAIL") << " criterion " << number_ << ": " << title_ << "\n";
    for (const auto& f : failures_) std::cout << "    " << f << "\n";
    return ok_;
  }

 private:
  int number_;
  std::string title_;
  bool ok_ = true;
  std::vector<std::string> failures_;
};

std::vector<std::pair<std::string, std::string>> reference_texts() {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& f : t::reference_files()) out.emplace_back(f, t::read_text(f));
  return out;
}

std::string first_quoted(const std::string& text) {
  auto a = text.find('\'');
  auto b = text.find('\'', a + 1);
  return text.substr(a + 1, b - a - 1);
}

int run_cli(const std::vector<std::string>& args, std::string& out) {
  std::ostringstream o;
  std::ostringstream e;
  int code = cli::run(args, o, e);
  out = o.str();
  return code;
}

bool reference_chain() {
  Criterion c(1, "reference chain parses, validates and refines with zero errors");
  auto result = t::check_texts(reference_texts());
  c.expect(t::error_codes(result.diagnostics).empty(), "error diagnostics on the reference fixtures");
  c.expect(result.reports.size() == 4, "expected four refinement reports");
  for (const auto& r : result.reports) c.expect(r.ok, r.child + " -> " + r.parent + " failed");
  auto spec = t::load<Specification>("lab/spec1.crala");
  c.expect(spec.roles.size() == 3 && spec.robots.size() == 1 && spec.robots[0].sensors.size() == 1 &&
               spec.robots[0].sensors[0].kind == "Camera",
           "Spec1 shape");
  auto c1 = t::load<Configuration>("lab/config1.crala");
  auto c2 = t::load<Configuration>("lab/config2.crala");
  c.expect(c1.vms.size() == 2 && c2.vms.size() == 1, "Config1 uses two VMs, Config2 one");
  std::set<std::string> a1;
  std::set<std::string> a2;
  for (const auto& p : t::load<Assembly>("lab/ass1.crala").placements) a1.insert(p.machine);
  for (const auto& p : t::load<Assembly>("lab/ass2.crala").placements) a2.insert(p.machine);
  c.expect(a1.size() == 2 && a2.size() == 1, "Ass1 uses two machines, Ass2 one");
  return c.report();
}

bool variability_graph() {
  Criterion c(2, "variability graph has 5 nodes and 4 edges, byte-identical across runs");
  std::vector<std::string> args = {"graph"};
  for (const auto& f : t::reference_files()) args.push_back(f);
  std::string first;
  std::string second;
  c.expect(run_cli(args, first) == 0, "graph exit code");
  run_cli(args, second);
  c.expect(first == second, "DOT output differs between runs");
  std::size_t nodes = 0;
  std::set<std::string> edges;
  std::istringstream lines(first);
  for (std::string line; std::getline(lines, line);) {
    if (line.find("->") != std::string::npos) {
      auto q = [&](std::size_t from) { return line.find('"', from); };
      auto a0 = q(0), a1 = q(a0 + 1), b0 = q(a1 + 1), b1 = q(b0 + 1);
      edges.insert(line.substr(a0 + 1, a1 - a0 - 1) + "->" + line.substr(b0 + 1, b1 - b0 - 1));
    } else if (line.find("[label=") != std::string::npos) {
      ++nodes;
    }
  }
  c.expect(nodes == 5, "node count " + std::to_string(nodes));
  c.expect(edges == std::set<std::string>{"Config1->Spec1", "Config2->Spec1", "Ass1->Config1", "Ass2->Config1"},
           "edge set mismatch");
  return c.report();
}

bool violation_corpus() {
  Criterion c(3, "each seeded violation triggers exactly its code and no other error");
  std::set<std::string> covered;
  for (const auto& entry : std::filesystem::directory_iterator(t::fixture_path("violations"))) {
    auto text = t::read_text(entry.path());
    auto expected = text.substr(11, text.find('\n') - 11);
    covered.insert(expected);
    auto result = t::check_texts({{entry.path().string(), text}});
    auto all = t::codes(result.diagnostics);
    auto errors = t::error_codes(result.diagnostics);
    std::set<std::string> error_set(errors.begin(), errors.end());
    bool hit = std::ranges::count(all, expected) > 0;
    bool exact = expected[0] == 'E' ? error_set == std::set<std::string>{expected} : error_set.empty();
    c.expect(hit && exact, entry.path().filename().string() + " did not produce exactly " + expected);
  }
  for (const auto& rule : rule_catalog()) {
    c.expect(covered.contains(std::string(rule.code)), "no fixture for " + std::string(rule.code));
  }
  return c.report();
}

bool refinement_rules() {
  Criterion c(4, "E-REF-01, E-REF-03 and E-CONN-03 agree with independent oracles");
  auto spec = t::load<Specification>("lab/spec1.crala");

  auto missing = t::load<Configuration>("lab/config1.crala");
  std::erase_if(missing.impls, [](const auto& i) { return i.name == "PathPlanningService"; });
  std::erase_if(missing.connections, [](const Connection& k) {
    return k.from.path[0] == "PathPlanningService" || k.to.path[0] == "PathPlanningService";
  });
  auto r1 = check_config_refines_spec(missing, spec);
  std::set<std::string> ref01;
  for (const auto& d : r1.diagnostics) {
    if (d.code == "E-REF-01") ref01.insert(first_quoted(d.message));
  }
  auto expected = oracle::unrealized_roles(spec, missing);
  c.expect(expected == std::set<std::string>{"PathPlanning"}, "set-difference oracle");
  c.expect(ref01 == expected, "E-REF-01 roles differ from the oracle");

  auto lidar = t::load<Configuration>("lab/config1.crala");
  lidar.robots[0].sensors[0].kind = "Lidar";
  auto r3 = check_config_refines_spec(lidar, spec);
  auto r3_codes = t::codes(r3.diagnostics);
  c.expect(r3_codes == std::vector<std::string>{"E-REF-03"}, "Lidar sensor should give only E-REF-03");
  c.expect(oracle::kind_coverage_gaps(spec, lidar) == std::vector<std::string>{"R1"}, "kind-coverage oracle");

  auto text = t::read_text(t::fixture_path("lab/config1.crala"));
  text.insert(text.rfind('}'), "  connect R1 ~ LocalisationService\n");
  auto result = t::check_texts({{"spec1.crala", t::read_text(t::fixture_path("lab/spec1.crala"))}, {"bad.crala", text}});
  auto errors = t::error_codes(result.diagnostics);
  auto parsed = parse(text, "bad.crala");
  c.expect(errors == std::vector<std::string>{"E-CONN-03"}, "abstract robot link should give only E-CONN-03");
  c.expect(oracle::abstract_robot_links(std::get<Configuration>(parsed.documents[0])) == 1, "abstract link scan");
  return c.report();
}

bool scheduling_contrast() {
  Criterion c(5, "spread colocates 0 and pack 1; 1000 generated plans re-validate");
  auto config = t::load<Configuration>("lab/config1.crala");
  auto cloud = t::load_cloud("lab/lab.crala");
  auto spread = plan_deployment(config, cloud, SchedulingPolicy::spread);
  auto pack = plan_deployment(config, cloud, SchedulingPolicy::pack);
  c.expect(evaluate_metrics(spread, config).colocated_vm_pairs == 0, "spread colocated_vm_pairs");
  c.expect(evaluate_metrics(pack, config).colocated_vm_pairs == 1, "pack colocated_vm_pairs");
  c.expect(oracle::colocated_pairs(spread) == 0 && oracle::colocated_pairs(pack) == 1, "pair-count oracle");

  t::Gen g(5150);
  int planned = 0;
  for (int i = 0; i < 1000; ++i) {
    auto sys = t::random_system(g);
    auto k = t::random_cloud(g, 1);
    auto policy = g.chance(0.5) ? SchedulingPolicy::spread : SchedulingPolicy::pack;
    Assembly assembly;
    try {
      assembly = plan_deployment(sys.config, k, policy);
    } catch (const PlanningError&) {
      continue;
    }
    ++planned;
    auto result = t::check_texts({{"sys", format(Document{sys.spec}) + format(Document{sys.config})},
                                  {"planned", format(Document{assembly})}});
    auto errors = t::error_codes(result.diagnostics);
    c.expect(errors.empty(), "generated plan " + std::to_string(i) + " failed check with " +
                                 (errors.empty() ? std::string() : errors[0]));
  }
  c.expect(planned >= 500, "only " + std::to_string(planned) + " of 1000 generated systems were plannable");
  return c.report();
}

bool reliability_ordering() {
  Criterion c(6, "max_single_vm_loss is 2 for Config2 and 1 for Config1");
  auto cloud = t::load_cloud("lab/lab.crala");
  auto loss = [&](const std::string& file, const Assembly* given) {
    auto config = t::load<Configuration>(file);
    auto assembly = given ? *given : plan_deployment(config, cloud, SchedulingPolicy::spread);
    auto metric = evaluate_metrics(assembly, config).max_single_vm_loss;
    std::int64_t enumerated = 0;
    for (const auto& vm : config.vms) {
      auto report = simulate_failure(assembly, config, {vm.name, TargetKind::vm});
      enumerated = std::max<std::int64_t>(enumerated, static_cast<std::int64_t>(report.lost_implementations.size()));
    }
    c.expect(metric == enumerated && metric == oracle::worst_vm_loss(assembly, config),
             file + ": metric disagrees with enumeration");
    return metric;
  };
  auto ass1 = t::load<Assembly>("lab/ass1.crala");
  auto config1 = loss("lab/config1.crala", &ass1);
  auto config2 = loss("lab/config2.crala", nullptr);
  c.expect(config1 == 1, "Config1 loss " + std::to_string(config1));
  c.expect(config2 == 2, "Config2 loss " + std::to_string(config2));
  c.expect(config2 > config1, "ordering");
  return c.report();
}

bool flat_network() {
  Criterion c(7, "flat cloud with two subnets gives E-NET-01, sdn passes");
  auto config = t::load<Configuration>("lab/config1.crala");
  config.vms[0].subnet = "tenant_a";
  config.vms[1].subnet = "tenant_b";
  auto assembly = t::load<Assembly>("lab/ass1.crala");
  assembly.clouds[0].network = NetworkMode::flat;
  c.expect(t::codes(validate_assembly(assembly, config)) == std::vector<std::string>{"E-NET-01"}, "flat rejected");
  c.expect(oracle::flat_subnet_conflict(assembly, config), "subnet grouping oracle");
  assembly.clouds[0].network = NetworkMode::sdn;
  c.expect(validate_assembly(assembly, config).empty(), "sdn accepted");
  c.expect(!oracle::flat_subnet_conflict(assembly, config), "oracle on sdn");
  return c.report();
}

bool round_trip_and_matchmaking() {
  Criterion c(8, "parse after format is identity; matchmaker is sound and monotone");
  t::Gen g(20240611);
  for (int i = 0; i < 1000; ++i) {
    auto doc = t::random_document(g);
    auto r = parse(format(doc), "gen");
    c.expect(r.diagnostics.empty() && r.documents.size() == 1 && r.documents[0] == doc,
             "round trip failed for document " + std::to_string(i));
  }
  t::Gen m(808);
  for (int i = 0; i < 1000; ++i) {
    auto pool = t::interface_pool(m);
    Repository repo(t::random_entries(m, pool));
    ComponentRole role{"R", m.interfaces(pool, 4), {}, {}};
    auto constraints = t::random_constraints(m);
    auto result = match_role(role, repo, constraints);
    for (const auto& cand : result.candidates) {
      c.expect(oracle::interfaces_subset(role.interfaces, cand.entry->interfaces), "unsound candidate");
    }
    if (role.interfaces.empty()) continue;
    auto smaller = role;
    smaller.interfaces.pop_back();
    std::set<std::string> after;
    for (const auto& cand : match_role(smaller, repo, constraints).candidates) after.insert(cand.entry->name);
    for (const auto& cand : result.candidates) c.expect(after.contains(cand.entry->name), "monotonicity");
  }
  return c.report();
}

}  // namespace

int main() {
  bool ok = true;
  for (auto check : {reference_chain, variability_graph, violation_corpus, refinement_rules, scheduling_contrast,
                     reliability_ordering, flat_network, round_trip_and_matchmaking}) {
    try {
      ok = check() && ok;
    } catch (const std::exception& e) {
      std::cout << "FAIL (exception: " << e.what() << ")\n";
      ok = false;
    }
  }
  return ok ? 0 : 1;
}
