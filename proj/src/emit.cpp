#include "crala/emit.hpp"

#include <cctype>
#include <fmt/format.h>
#include <set>

namespace crala {

using nlohmann::json;

void SourceIndex::add(const std::string& file, std::string_view text) {
  maps_.insert_or_assign(file, LineMap(text));
}

std::optional<LineMap::Position> SourceIndex::position(const SourceSpan& span) const {
  auto it = maps_.find(span.file);
  if (it == maps_.end()) return std::nullopt;
  return it->second.position(span.start);
}

std::string render(const Diagnostic& diagnostic, const SourceIndex& sources, bool color) {
  std::string where;
  if (diagnostic.span) {
    where = diagnostic.span->file;
    if (auto pos = sources.position(*diagnostic.span)) {
      where += fmt::format(":{}:{}", pos->line, pos->column);
    }
    where += ": ";
  }
  const bool error = diagnostic.severity == Severity::error;
  std::string label = fmt::format("{}[{}]", to_string(diagnostic.severity), diagnostic.code);
  if (color) label = fmt::format("{}{}\x1b[0m", error ? "\x1b[1;31m" : "\x1b[1;33m", label);
  return fmt::format("{}{}: {}", where, label, diagnostic.message);
}

namespace {

std::string dot_id(std::string_view text) {
  std::string out = "\"";
  for (char c : text) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

constexpr const char* kLevelLabels[] = {"Specification", "Configuration", "Assembly"};

}  // namespace

std::string to_dot(const VariabilityGraph& graph, bool micro) {
  std::string out = "digraph crala {\n  rankdir=BT;\n  node [shape=box];\n";

  std::vector<std::vector<std::string>> members(3);
  for (const auto& node : graph.nodes) {
    members[static_cast<std::size_t>(node.level)].push_back(
        fmt::format("{} [label={}]", dot_id(node.document), dot_id(node.document)));
  }

  std::vector<std::string> micro_edges;
  if (micro) {
    std::set<std::string> seen;
    auto add = [&](std::size_t level, const std::string& id, const std::string& label, const char* shape) {
      if (seen.insert(id).second) {
        members[level].push_back(fmt::format("{} [label={}, shape={}]", dot_id(id), dot_id(label), shape));
      }
    };
    std::set<std::string> seen_edges;
    auto edge = [&](const std::string& from, const std::string& to) {
      auto text = fmt::format("{} -> {};", dot_id(from), dot_id(to));
      if (seen_edges.insert(text).second) micro_edges.push_back(std::move(text));
    };
    for (const auto& chain : graph.micro_edges) {
      auto role_id = chain.specification + "." + chain.role;
      auto impl_id = chain.configuration + "." + chain.implementation;
      add(0, role_id, chain.role, "ellipse");
      add(1, impl_id, chain.implementation, "ellipse");
      edge(role_id, impl_id);
      if (chain.assembly && chain.instance) {
        auto inst_id = *chain.assembly + "." + *chain.instance;
        add(2, inst_id, *chain.instance, "ellipse");
        edge(impl_id, inst_id);
      }
    }
  }

  for (std::size_t level = 0; level < members.size(); ++level) {
    std::string name = kLevelLabels[level];
    std::string lower = name;
    for (auto& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    out += fmt::format("  subgraph cluster_{} {{\n    label={};\n", lower, dot_id(name));
    for (const auto& m : members[level]) out += fmt::format("    {};\n", m);
    out += "  }\n";
  }
  for (const auto& e : graph.edges) {
    out += fmt::format("  {} -> {} [style=dashed, label={}];\n", dot_id(e.child), dot_id(e.parent),
                       dot_id(to_string(e.kind)));
  }
  for (const auto& e : micro_edges) out += fmt::format("  {}\n", e);
  out += "}\n";
  return out;
}

json to_json(const Diagnostic& diagnostic, const SourceIndex& sources) {
  json out{{"severity", to_string(diagnostic.severity)},
           {"code", diagnostic.code},
           {"message", diagnostic.message}};
  if (diagnostic.span) {
    json span{{"file", diagnostic.span->file}, {"start", diagnostic.span->start}, {"end", diagnostic.span->end}};
    if (auto pos = sources.position(*diagnostic.span)) {
      span["line"] = pos->line;
      span["column"] = pos->column;
    }
    out["span"] = std::move(span);
  } else {
    out["span"] = nullptr;
  }
  return out;
}

json to_json(const RefinementReport& report, const SourceIndex& sources) {
  json bindings = json::array();
  for (const auto& b : report.bindings) bindings.push_back({{"abstract", b.abstract_element}, {"concrete", b.concrete_element}});
  json diags = json::array();
  for (const auto& d : report.diagnostics) diags.push_back(to_json(d, sources));
  return json{{"child", report.child},         {"parent", report.parent},   {"kind", to_string(report.kind)},
              {"ok", report.ok},               {"bindings", std::move(bindings)},
              {"diagnostics", std::move(diags)}};
}

namespace {

json interfaces_json(const std::vector<InterfaceRef>& refs) {
  json out = json::array();
  for (const auto& r : refs) {
    out.push_back({{"name", r.name}, {"direction", r.direction == Direction::provided ? "provided" : "required"}});
  }
  return out;
}

json names_json(const std::vector<Identifier>& names) { return json(names); }

}  // namespace

json to_json(const MatchResult& result) {
  json candidates = json::array();
  for (const auto& c : result.candidates) {
    candidates.push_back({{"name", c.entry->name},
                          {"variant", to_string(c.entry->variant)},
                          {"score", {{"numerator", c.score.numerator()}, {"denominator", c.score.denominator()}}},
                          {"score_value", c.score.value()},
                          {"matched", interfaces_json(c.matched)},
                          {"surplus", interfaces_json(c.surplus)}});
  }
  json rejected = json::array();
  for (const auto& r : result.rejected) {
    rejected.push_back({{"name", r.entry->name},
                        {"missing", interfaces_json(r.missing)},
                        {"failed_constraints", r.failed_constraints}});
  }
  return json{{"role", result.role}, {"candidates", std::move(candidates)}, {"rejected", std::move(rejected)}};
}

json to_json(const DeploymentMetrics& metrics) {
  return json{{"colocated_vm_pairs", metrics.colocated_vm_pairs},
              {"max_single_vm_loss", metrics.max_single_vm_loss},
              {"max_single_pm_loss", metrics.max_single_pm_loss},
              {"min_ram_headroom_mb", metrics.min_ram_headroom_mb}};
}

json to_json(const ImpactReport& report) {
  return json{{"target", report.event.target},
              {"target_kind", report.event.target_kind == TargetKind::vm ? "vm" : "physical_machine"},
              {"failed_vms", names_json(report.failed_vms)},
              {"lost_instances", names_json(report.lost_instances)},
              {"surviving_instances", names_json(report.surviving_instances)},
              {"lost_implementations", names_json(report.lost_implementations)},
              {"uncovered_roles", names_json(report.uncovered_roles)}};
}

json to_json(const VariabilityGraph& graph) {
  json nodes = json::array();
  for (const auto& n : graph.nodes) nodes.push_back({{"document", n.document}, {"level", to_string(n.level)}});
  json edges = json::array();
  for (const auto& e : graph.edges) {
    edges.push_back({{"child", e.child}, {"parent", e.parent}, {"kind", to_string(e.kind)}});
  }
  json micro = json::array();
  for (const auto& c : graph.micro_edges) {
    micro.push_back({{"specification", c.specification},
                     {"role", c.role},
                     {"configuration", c.configuration},
                     {"implementation", c.implementation},
                     {"assembly", c.assembly ? json(*c.assembly) : json(nullptr)},
                     {"instance", c.instance ? json(*c.instance) : json(nullptr)}});
  }
  return json{{"nodes", std::move(nodes)}, {"edges", std::move(edges)}, {"micro_edges", std::move(micro)}};
}

}  // namespace crala
