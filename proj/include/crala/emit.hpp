#pragma once

#include <map>
#include <string>
#include <string_view>

#include <json.hpp>

#include "crala/diagnostic.hpp"
#include "crala/matchmaker.hpp"
#include "crala/planner.hpp"
#include "crala/refinement.hpp"

namespace crala {

/// Source texts by file name, for line/column rendering.
class SourceIndex {
 public:
  void add(const std::string& file, std::string_view text);
  std::optional<LineMap::Position> position(const SourceSpan& span) const;

 private:
  std::map<std::string, LineMap, std::less<>> maps_;
};

/// `file:line:col: error[CODE]: message`, optionally with ANSI colors.
std::string render(const Diagnostic& diagnostic, const SourceIndex& sources, bool color = false);

/// Graphviz text: one cluster per level, dashed implements/deploys edges. With
/// `micro`, roles, implementations and instances are added with solid
/// role -> implementation -> instance edges. Output is deterministic.
std::string to_dot(const VariabilityGraph& graph, bool micro = false);

nlohmann::json to_json(const Diagnostic& diagnostic, const SourceIndex& sources);
nlohmann::json to_json(const RefinementReport& report, const SourceIndex& sources);
nlohmann::json to_json(const MatchResult& result);
nlohmann::json to_json(const DeploymentMetrics& metrics);
nlohmann::json to_json(const ImpactReport& report);
nlohmann::json to_json(const VariabilityGraph& graph);

}  // namespace crala
