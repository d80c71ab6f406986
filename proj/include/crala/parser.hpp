#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "crala/diagnostic.hpp"
#include "crala/model.hpp"

namespace crala {

struct ParseResult {
  std::vector<Document> documents;
  /// Standalone `cloud` blocks (planner input).
  std::vector<CloudDescription> clouds;
  std::vector<Diagnostic> diagnostics;
  /// Set when any error was reported; the documents are then a best-effort recovery.
  bool partial = false;
};

/// Parses `.crala` text. Deterministic; every element carries its declaration span.
ParseResult parse(std::string_view text, std::string_view file_name);

/// Canonical text for one document (2-space indentation, declaration order kept).
std::string format(const Document& document);
std::string format(const CloudDescription& cloud);

}  // namespace crala
