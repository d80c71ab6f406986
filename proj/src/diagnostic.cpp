#include "crala/diagnostic.hpp"

#include <algorithm>
#include <stdexcept>
#include <tuple>

#include "crala/rules.hpp"

namespace crala {

std::string_view to_string(Severity severity) {
  return severity == Severity::error ? "error" : "warning";
}

Diagnostic make_diagnostic(std::string_view code, std::string message,
                           std::optional<SourceSpan> span) {
  const Rule* rule = find_rule(code);
  if (rule == nullptr) throw std::logic_error("uncatalogued diagnostic code " + std::string(code));
  return Diagnostic{rule->severity, std::string(code), std::move(message), std::move(span)};
}

bool has_errors(const std::vector<Diagnostic>& diagnostics) {
  return std::ranges::any_of(diagnostics,
                             [](const Diagnostic& d) { return d.severity == Severity::error; });
}

std::size_t count_severity(const std::vector<Diagnostic>& diagnostics, Severity severity) {
  return static_cast<std::size_t>(std::ranges::count(diagnostics, severity, &Diagnostic::severity));
}

namespace {

auto sort_key(const Diagnostic& d) {
  static const SourceSpan kNone{};
  const SourceSpan& s = d.span ? *d.span : kNone;
  return std::tie(s.file, s.start, s.end, d.code, d.message);
}

}  // namespace

void sort_diagnostics(std::vector<Diagnostic>& diagnostics) {
  std::ranges::stable_sort(diagnostics, [](const Diagnostic& a, const Diagnostic& b) {
    if (a.span.has_value() != b.span.has_value()) return !a.span.has_value();
    return sort_key(a) < sort_key(b);
  });
}

void normalize_diagnostics(std::vector<Diagnostic>& diagnostics) {
  sort_diagnostics(diagnostics);
  auto dup = std::ranges::unique(diagnostics);
  diagnostics.erase(dup.begin(), dup.end());
}

LineMap::LineMap(std::string_view text) {
  line_starts_.push_back(0);
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '\n') line_starts_.push_back(i + 1);
  }
}

LineMap::Position LineMap::position(std::size_t offset) const {
  auto it = std::ranges::upper_bound(line_starts_, offset);
  auto line = static_cast<std::size_t>(it - line_starts_.begin());
  return {line, offset - line_starts_[line - 1] + 1};
}

}  // namespace crala
