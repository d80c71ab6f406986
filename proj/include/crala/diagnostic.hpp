#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace crala {

/// Byte range inside one source file. `end` is exclusive.
struct SourceSpan {
  std::string file;
  std::size_t start = 0;
  std::size_t end = 0;

  friend bool operator==(const SourceSpan&, const SourceSpan&) = default;
};

/// Declaration location carried by model elements. Always compares equal, so
/// defaulted equality on model types is structural (spans excluded).
struct DeclSpan {
  SourceSpan value;

  friend bool operator==(const DeclSpan&, const DeclSpan&) { return true; }
};

enum class Severity { error, warning };

std::string_view to_string(Severity severity);

struct Diagnostic {
  Severity severity = Severity::error;
  std::string code;
  std::string message;
  std::optional<SourceSpan> span;

  friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

/// Builds a diagnostic whose severity is taken from the rule catalog.
Diagnostic make_diagnostic(std::string_view code, std::string message,
                           std::optional<SourceSpan> span = std::nullopt);

bool has_errors(const std::vector<Diagnostic>& diagnostics);
std::size_t count_severity(const std::vector<Diagnostic>& diagnostics, Severity severity);

/// Orders by (file, start, end, code, message); span-less diagnostics go first.
void sort_diagnostics(std::vector<Diagnostic>& diagnostics);

/// Sorts and drops exact duplicates.
void normalize_diagnostics(std::vector<Diagnostic>& diagnostics);

/// 1-based line/column lookup over a source buffer.
class LineMap {
 public:
  explicit LineMap(std::string_view text);

  struct Position {
    std::size_t line = 1;
    std::size_t column = 1;
  };

  Position position(std::size_t offset) const;

 private:
  std::vector<std::size_t> line_starts_;
};

}  // namespace crala
