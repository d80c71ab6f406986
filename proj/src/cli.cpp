#include "crala/cli.hpp"

#include <algorithm>
#include <fmt/format.h>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "crala/matchmaker.hpp"
#include "crala/planner.hpp"
#include "crala/validator.hpp"

namespace crala::cli {

using nlohmann::json;

namespace {

// Input or usage problem that maps to exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError(fmt::format("cannot read '{}'", path));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void print_diagnostics(std::ostream& err, const std::vector<Diagnostic>& diagnostics,
                       const SourceIndex& sources, bool color) {
  for (const auto& d : diagnostics) err << render(d, sources, color) << '\n';
}

json diagnostics_json(const std::vector<Diagnostic>& diagnostics, const SourceIndex& sources) {
  json out = json::array();
  for (const auto& d : diagnostics) out.push_back(to_json(d, sources));
  return out;
}

void write_json(std::ostream& out, const json& value) { out << value.dump(2) << '\n'; }

}  // namespace

Inputs load_inputs(const std::vector<std::string>& files) {
  Inputs inputs;
  for (const auto& file : files) {
    auto text = read_file(file);
    inputs.sources.add(file, text);
    auto parsed = parse(text, file);
    std::ranges::move(parsed.documents, std::back_inserter(inputs.documents));
    std::ranges::move(parsed.clouds, std::back_inserter(inputs.clouds));
    std::ranges::move(parsed.diagnostics, std::back_inserter(inputs.diagnostics));
  }
  return inputs;
}

namespace {

bool errors_within(const std::vector<Diagnostic>& diagnostics, const SourceSpan& span) {
  return std::ranges::any_of(diagnostics, [&](const Diagnostic& d) {
    return d.severity == Severity::error && d.span && d.span->file == span.file && d.span->start >= span.start &&
           d.span->end <= span.end;
  });
}

}  // namespace

CheckResult check_documents(Inputs inputs) {
  CheckResult result;
  auto& diags = result.diagnostics;
  diags = std::move(inputs.diagnostics);
  const auto syntax = diags;

  // Documents and clouds with syntax errors are reported as parsed and not
  // checked any further.
  for (const auto& cloud : inputs.clouds) {
    if (errors_within(syntax, cloud.span.value)) continue;
    auto found = validate_cloud(cloud);
    diags.insert(diags.end(), found.begin(), found.end());
  }
  result.workspace = build_workspace(std::move(inputs.documents));
  const auto& ws = result.workspace;
  diags.insert(diags.end(), ws.diagnostics().begin(), ws.diagnostics().end());

  const auto count = ws.documents().size();
  std::vector<bool> parsed_clean(count);
  for (std::size_t i = 0; i < count; ++i) parsed_clean[i] = !errors_within(syntax, document_span(ws.documents()[i]));

  std::vector<std::vector<Diagnostic>> own(count);
  for (std::size_t i = 0; i < count; ++i) {
    if (!parsed_clean[i]) continue;
    const auto& doc = ws.documents()[i];
    if (const auto* spec = std::get_if<Specification>(&doc)) {
      own[i] = validate_specification(*spec);
    } else if (const auto* config = std::get_if<Configuration>(&doc)) {
      own[i] = validate_configuration(*config);
    } else if (const auto* assembly = std::get_if<Assembly>(&doc)) {
      auto parent = ws.parent_of(i);
      if (parent && parsed_clean[*parent]) {
        own[i] = validate_assembly(*assembly, std::get<Configuration>(ws.documents()[*parent]));
      } else {
        for (const auto& cloud : assembly->clouds) {
          auto found = validate_cloud(cloud);
          own[i].insert(own[i].end(), found.begin(), found.end());
        }
      }
    }
  }

  // Refinement only runs between documents that are free of errors of their own.
  std::vector<bool> usable(count);
  for (std::size_t i = 0; i < count; ++i) {
    usable[i] = !has_errors(own[i]) && !errors_within(diags, document_span(ws.documents()[i]));
  }
  for (auto& found : own) diags.insert(diags.end(), found.begin(), found.end());

  for (const auto& link : ws.links()) {
    if (!usable[link.child] || !usable[link.parent]) continue;
    const auto& child = ws.documents()[link.child];
    const auto& parent = ws.documents()[link.parent];
    RefinementReport report = link.kind == LinkKind::implements
                                  ? check_config_refines_spec(std::get<Configuration>(child),
                                                              std::get<Specification>(parent))
                                  : check_assembly_deploys_config(std::get<Assembly>(child),
                                                                  std::get<Configuration>(parent));
    diags.insert(diags.end(), report.diagnostics.begin(), report.diagnostics.end());
    result.reports.push_back(std::move(report));
  }
  normalize_diagnostics(diags);
  return result;
}

namespace {

struct Context {
  std::ostream& out;
  std::ostream& err;
  bool color;
};

// Prints diagnostics; true when they contain errors, after writing the JSON error shape if requested.
bool input_errors(const Context& ctx, std::string_view command, const std::vector<Diagnostic>& diagnostics,
                  const SourceIndex& sources, bool as_json) {
  print_diagnostics(ctx.err, diagnostics, sources, ctx.color);
  if (!has_errors(diagnostics)) return false;
  if (as_json) write_json(ctx.out, json{{"command", command}, {"diagnostics", diagnostics_json(diagnostics, sources)}});
  return true;
}

int cmd_check(const Context& ctx, const std::vector<std::string>& files, bool as_json) {
  auto inputs = load_inputs(files);
  SourceIndex sources = inputs.sources;
  auto result = check_documents(std::move(inputs));
  const auto errors = count_severity(result.diagnostics, Severity::error);
  const auto warnings = count_severity(result.diagnostics, Severity::warning);
  print_diagnostics(ctx.err, result.diagnostics, sources, ctx.color);

  if (as_json) {
    json reports = json::array();
    for (const auto& r : result.reports) reports.push_back(to_json(r, sources));
    json documents = json::array();
    for (const auto& doc : result.workspace.documents()) {
      documents.push_back({{"name", document_name(doc)}, {"level", to_string(document_level(doc))}});
    }
    write_json(ctx.out, json{{"command", "check"},
                             {"ok", errors == 0},
                             {"error_count", errors},
                             {"warning_count", warnings},
                             {"documents", std::move(documents)},
                             {"diagnostics", diagnostics_json(result.diagnostics, sources)},
                             {"refinements", std::move(reports)}});
  } else {
    for (const auto& r : result.reports) {
      ctx.out << fmt::format("{} {} {}: {}\n", r.child, to_string(r.kind), r.parent, r.ok ? "ok" : "FAILED");
    }
    ctx.out << fmt::format("checked {} document(s): {} error(s), {} warning(s)\n",
                           result.workspace.documents().size(), errors, warnings);
  }
  return errors == 0 ? kExitOk : kExitFindings;
}

int cmd_graph(const Context& ctx, const std::vector<std::string>& files, const std::string& out_path, bool micro,
              bool as_json) {
  auto inputs = load_inputs(files);
  auto diags = inputs.diagnostics;
  auto ws = build_workspace(std::move(inputs.documents));
  diags.insert(diags.end(), ws.diagnostics().begin(), ws.diagnostics().end());
  normalize_diagnostics(diags);
  if (input_errors(ctx, "graph", diags, inputs.sources, as_json)) return kExitFindings;

  auto graph = build_variability_graph(ws);
  std::string payload;
  if (as_json) {
    auto doc = to_json(graph);
    doc["command"] = "graph";
    payload = doc.dump(2) + "\n";
  } else {
    payload = to_dot(graph, micro);
  }
  if (out_path.empty()) {
    ctx.out << payload;
    return kExitOk;
  }
  std::ofstream file(out_path, std::ios::binary | std::ios::trunc);
  file << payload;
  file.close();
  if (!file) throw UsageError(fmt::format("cannot write '{}'", out_path));
  return kExitOk;
}

int cmd_match(const Context& ctx, const std::string& spec_file, const std::string& repo_file,
              const std::string& role_name, const std::vector<std::string>& constraint_args, bool as_json) {
  auto inputs = load_inputs({spec_file});
  if (input_errors(ctx, "match", inputs.diagnostics, inputs.sources, as_json)) return kExitFindings;

  const ComponentRole* role = nullptr;
  for (const auto& doc : inputs.documents) {
    if (const auto* spec = std::get_if<Specification>(&doc)) {
      role = find_named(spec->roles, role_name);
      if (role) break;
    }
  }
  if (role == nullptr) throw UsageError(fmt::format("no role named '{}' in '{}'", role_name, spec_file));

  Constraints constraints;
  for (const auto& arg : constraint_args) {
    auto eq = arg.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw UsageError(fmt::format("constraint '{}' is not of the form key=value", arg));
    }
    constraints[arg.substr(0, eq)] = arg.substr(eq + 1);
  }

  Repository repo;
  try {
    repo = load_repository(repo_file);
  } catch (const RepositoryError& e) {
    if (as_json) write_json(ctx.out, json{{"command", "match"}, {"error", {{"kind", "RepositoryError"}, {"pointer", e.pointer()}, {"message", e.what()}}}});
    throw UsageError(fmt::format("{}: {}", repo_file, e.what()));
  }

  auto result = match_role(*role, repo, constraints);
  if (as_json) {
    auto doc = to_json(result);
    doc["command"] = "match";
    write_json(ctx.out, doc);
    return kExitOk;
  }
  ctx.out << fmt::format("role {}: {} candidate(s)\n", result.role, result.candidates.size());
  auto names = [](const std::vector<InterfaceRef>& refs) {
    std::string s;
    for (const auto& r : refs) {
      if (!s.empty()) s += ", ";
      s += fmt::format("{} {}", r.direction == Direction::provided ? "provides" : "requires", r.name);
    }
    return s.empty() ? std::string("-") : s;
  };
  std::size_t rank = 1;
  for (const auto& c : result.candidates) {
    ctx.out << fmt::format("  {}. {:<24} {:<16} score {} ({:.3f})  matched: {}  surplus: {}\n", rank++,
                           c.entry->name, to_string(c.entry->variant), c.score.str(), c.score.value(),
                           names(c.matched), names(c.surplus));
  }
  for (const auto& r : result.rejected) {
    std::string why = names(r.missing) == "-" ? std::string() : "missing " + names(r.missing);
    for (const auto& f : r.failed_constraints) why += (why.empty() ? "" : "; ") + f;
    ctx.out << fmt::format("  -  {:<24} rejected: {}\n", r.entry->name, why);
  }
  return kExitOk;
}

template <typename T>
const T* pick_document(const std::vector<Document>& documents, const std::string& name, const char* what) {
  std::vector<const T*> found;
  for (const auto& doc : documents) {
    if (const auto* d = std::get_if<T>(&doc); d && (name.empty() || d->name == name)) found.push_back(d);
  }
  if (found.empty()) {
    throw UsageError(name.empty() ? fmt::format("no {} in the input", what)
                                  : fmt::format("no {} named '{}'", what, name));
  }
  if (found.size() > 1) throw UsageError(fmt::format("several {}s in the input; select one by name", what));
  return found.front();
}

int cmd_plan(const Context& ctx, const std::string& config_file, const std::string& cloud_file,
             const std::string& policy_arg, const std::string& out_path, const std::string& assembly_name,
             const std::string& config_name, bool as_json) {
  auto config_inputs = load_inputs({config_file});
  const auto* config = pick_document<Configuration>(config_inputs.documents, config_name, "configuration");
  auto diags = config_inputs.diagnostics;
  auto own = validate_configuration(*config);
  diags.insert(diags.end(), own.begin(), own.end());
  normalize_diagnostics(diags);
  if (input_errors(ctx, "plan", diags, config_inputs.sources, as_json)) return kExitFindings;

  auto cloud_inputs = load_inputs({cloud_file});
  if (input_errors(ctx, "plan", cloud_inputs.diagnostics, cloud_inputs.sources, as_json)) return kExitFindings;
  const CloudDescription* cloud = nullptr;
  if (!cloud_inputs.clouds.empty()) {
    cloud = &cloud_inputs.clouds.front();
  } else {
    for (const auto& doc : cloud_inputs.documents) {
      const auto* assembly = std::get_if<Assembly>(&doc);
      if (assembly && !assembly->clouds.empty()) {
        cloud = &assembly->clouds.front();
        break;
      }
    }
  }
  if (cloud == nullptr) throw UsageError(fmt::format("no cloud description in '{}'", cloud_file));

  SchedulingPolicy policy = cloud->scheduler;
  if (policy_arg == "spread") policy = SchedulingPolicy::spread;
  if (policy_arg == "pack") policy = SchedulingPolicy::pack;

  Assembly assembly;
  try {
    assembly = plan_deployment(*config, *cloud, policy, assembly_name);
  } catch (const PlanningError& e) {
    if (as_json) {
      write_json(ctx.out, json{{"command", "plan"},
                               {"error",
                                {{"kind", to_string(e.failure())}, {"subject", e.subject()}, {"message", e.what()}}}});
    }
    ctx.err << fmt::format("error[{}]: {}\n", to_string(e.failure()), e.what());
    return kExitFindings;
  }

  auto metrics = evaluate_metrics(assembly, *config);
  std::string text = format(Document{assembly});
  if (!out_path.empty()) {
    std::ofstream file(out_path, std::ios::binary | std::ios::trunc);
    file << text;
    file.close();
    if (!file) throw UsageError(fmt::format("cannot write '{}'", out_path));
  }

  if (as_json) {
    json placements = json::array();
    for (const auto& p : assembly.placements) placements.push_back({{"vm", p.vm}, {"cloud", p.cloud}, {"machine", p.machine}});
    json instances = json::array();
    for (const auto& i : assembly.instances) instances.push_back({{"name", i.name}, {"of", i.of}});
    json payload{{"command", "plan"},
                 {"assembly", assembly.name},
                 {"deploys", assembly.deploys},
                 {"cloud", cloud->name},
                 {"policy", to_string(policy)},
                 {"placements", std::move(placements)},
                 {"instances", std::move(instances)},
                 {"metrics", to_json(metrics)},
                 {"output", out_path.empty() ? json(nullptr) : json(out_path)}};
    if (out_path.empty()) payload["text"] = text;
    write_json(ctx.out, payload);
    return kExitOk;
  }

  std::ostream& summary = out_path.empty() ? ctx.err : ctx.out;
  if (out_path.empty()) ctx.out << text;
  summary << fmt::format("planned {} ({} policy on cloud {})\n", assembly.name, to_string(policy), cloud->name);
  for (const auto& p : assembly.placements) summary << fmt::format("  {} -> {}.{}\n", p.vm, p.cloud, p.machine);
  summary << fmt::format(
      "  colocated_vm_pairs={} max_single_vm_loss={} max_single_pm_loss={} min_ram_headroom_mb={}\n",
      metrics.colocated_vm_pairs, metrics.max_single_vm_loss, metrics.max_single_pm_loss,
      metrics.min_ram_headroom_mb);
  return kExitOk;
}

FailureEvent resolve_target(const Assembly& assembly, const Configuration& config, const std::string& target) {
  if (target.starts_with("vm:")) return {target.substr(3), TargetKind::vm};
  if (target.starts_with("pm:")) return {target.substr(3), TargetKind::physical_machine};
  bool is_vm = find_named(config.vms, target) != nullptr;
  bool is_pm = false;
  auto dot = target.find('.');
  for (const auto& cloud : assembly.clouds) {
    if (dot != std::string::npos) {
      is_pm = is_pm || (cloud.name == target.substr(0, dot) && find_named(cloud.machines, target.substr(dot + 1)));
    } else {
      is_pm = is_pm || find_named(cloud.machines, target) != nullptr;
    }
  }
  if (is_vm && is_pm) {
    throw UsageError(fmt::format("'{}' names both a vm and a machine; prefix it with vm: or pm:", target));
  }
  if (!is_vm && !is_pm) {
    throw UsageError(fmt::format("'{}' is neither a vm of '{}' nor a machine of '{}'", target, config.name,
                                 assembly.name));
  }
  return {target, is_vm ? TargetKind::vm : TargetKind::physical_machine};
}

int cmd_simulate(const Context& ctx, const std::vector<std::string>& files, const std::string& target,
                 const std::string& assembly_name, bool as_json) {
  auto inputs = load_inputs(files);
  auto diags = inputs.diagnostics;
  if (input_errors(ctx, "simulate", diags, inputs.sources, as_json)) return kExitFindings;
  auto ws = build_workspace(std::move(inputs.documents));
  std::vector<Document> docs(ws.documents().begin(), ws.documents().end());
  const auto* picked = pick_document<Assembly>(docs, assembly_name, "assembly");
  const auto& assembly = std::get<Assembly>(ws.documents()[*ws.index_of(picked->name)]);
  const auto* config = ws.configuration_of(assembly);
  if (config == nullptr) {
    throw UsageError(fmt::format("configuration '{}' deployed by '{}' is not among the inputs", assembly.deploys,
                                 assembly.name));
  }

  ImpactReport report;
  try {
    report = simulate_failure(assembly, *config, resolve_target(assembly, *config, target));
  } catch (const UnknownTargetError& e) {
    throw UsageError(e.what());
  }

  if (as_json) {
    auto payload = to_json(report);
    payload["command"] = "simulate";
    payload["assembly"] = assembly.name;
    write_json(ctx.out, payload);
    return kExitOk;
  }
  auto list = [](const std::vector<Identifier>& names) {
    std::string s;
    for (const auto& n : names) s += (s.empty() ? "" : ", ") + n;
    return s.empty() ? std::string("-") : s;
  };
  ctx.out << fmt::format("failing {} {} in {}\n",
                         report.event.target_kind == TargetKind::vm ? "vm" : "machine", report.event.target,
                         assembly.name);
  ctx.out << fmt::format("  failed vms:           {}\n", list(report.failed_vms));
  ctx.out << fmt::format("  lost instances:       {} ({})\n", report.lost_instances.size(), list(report.lost_instances));
  ctx.out << fmt::format("  surviving instances:  {} ({})\n", report.surviving_instances.size(),
                         list(report.surviving_instances));
  ctx.out << fmt::format("  uncovered roles:      {}\n", list(report.uncovered_roles));
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, bool color) {
  CLI::App app{"Toolchain for three-level cloud robotic architecture models", "crala"};
  app.require_subcommand(1);
  bool as_json = false;

  std::vector<std::string> files;
  auto* check = app.add_subcommand("check", "Parse, validate and refinement-check model files");
  check->add_option("files", files, "Input .crala files")->required();
  check->add_flag("--json", as_json, "Machine-readable output on stdout");

  std::string out_path;
  bool micro = false;
  auto* graph = app.add_subcommand("graph", "Emit the variability graph as Graphviz DOT");
  graph->add_option("files", files, "Input .crala files")->required();
  graph->add_option("--out", out_path, "Write to this file instead of stdout");
  graph->add_flag("--micro", micro, "Include role -> implementation -> instance chains");
  graph->add_flag("--json", as_json, "Emit the graph as JSON instead of DOT");

  std::string spec_file, repo_file, role_name;
  std::vector<std::string> constraint_args;
  auto* match = app.add_subcommand("match", "Rank repository entries that can fill a component role");
  match->add_option("spec_file", spec_file, "File holding the specification")->required();
  match->add_option("repo_file", repo_file, "Repository JSON file")->required();
  match->add_option("--role", role_name, "Role to match")->required();
  match->add_option("--constraint", constraint_args, "key=value filter (repeatable)");
  match->add_flag("--json", as_json, "Machine-readable output on stdout");

  std::string config_file, cloud_file, policy_arg, assembly_name, config_name;
  auto* plan = app.add_subcommand("plan", "Derive an assembly from a configuration and a cloud");
  plan->add_option("config_file", config_file, "File holding the configuration")->required();
  plan->add_option("cloud_file", cloud_file, "File holding a cloud block (or an assembly with one)")->required();
  plan->add_option("--policy", policy_arg, "spread | pack (default: the cloud's scheduler)")
      ->check(CLI::IsMember({"spread", "pack"}));
  plan->add_option("--out", out_path, "Write the assembly here instead of stdout");
  plan->add_option("--name", assembly_name, "Assembly name (default <config>_<policy>)");
  plan->add_option("--config", config_name, "Configuration to plan when the file holds several");
  plan->add_flag("--json", as_json, "Machine-readable output on stdout");

  std::string target;
  auto* simulate = app.add_subcommand("simulate", "Report the impact of a VM or machine failure");
  simulate->add_option("files", files, "Assembly file plus the files it links to")->required();
  simulate->add_option("--fail", target, "VM, machine, cloud.machine, vm:NAME or pm:NAME")->required();
  simulate->add_option("--assembly", assembly_name, "Assembly to use when several are given");
  simulate->add_flag("--json", as_json, "Machine-readable output on stdout");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "crala: " << e.what() << '\n';
    const CLI::App* sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
    err << sub->help();
    return kExitUsage;
  }

  const Context ctx{out, err, color};
  try {
    if (check->parsed()) return cmd_check(ctx, files, as_json);
    if (graph->parsed()) return cmd_graph(ctx, files, out_path, micro, as_json);
    if (match->parsed()) return cmd_match(ctx, spec_file, repo_file, role_name, constraint_args, as_json);
    if (plan->parsed()) {
      return cmd_plan(ctx, config_file, cloud_file, policy_arg, out_path, assembly_name, config_name, as_json);
    }
    if (simulate->parsed()) return cmd_simulate(ctx, files, target, assembly_name, as_json);
  } catch (const UsageError& e) {
    err << "crala: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace crala::cli
