#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "crala/diagnostic.hpp"
#include "crala/emit.hpp"
#include "crala/parser.hpp"
#include "crala/refinement.hpp"
#include "crala/workspace.hpp"

namespace crala::cli {

/// Exit codes: 0 clean, 1 error diagnostics (or planning failure), 2 usage/IO.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFindings = 1;
inline constexpr int kExitUsage = 2;

/// Everything parsed from a set of input files.
struct Inputs {
  SourceIndex sources;
  std::vector<Document> documents;
  std::vector<CloudDescription> clouds;
  std::vector<Diagnostic> diagnostics;
};

/// Reads and parses each file. Throws std::runtime_error for unreadable files.
Inputs load_inputs(const std::vector<std::string>& files);

struct CheckResult {
  Workspace workspace;
  std::vector<RefinementReport> reports;
  /// Parse, workspace, level and refinement diagnostics, sorted and deduplicated.
  std::vector<Diagnostic> diagnostics;
};

/// Full pipeline: workspace links, per-level validation, then every declared
/// refinement whose two documents are individually free of errors.
CheckResult check_documents(Inputs inputs);

/// Runs `crala <args...>` (program name excluded). Human-readable diagnostics
/// go to `err`; `--json` puts machine-readable output on `out`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, bool color = false);

}  // namespace crala::cli
