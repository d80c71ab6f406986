#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "crala/model.hpp"

namespace crala {

/// Non-negative fraction in lowest terms.
class Rational {
 public:
  Rational() = default;
  Rational(std::int64_t numerator, std::int64_t denominator);

  std::int64_t numerator() const { return num_; }
  std::int64_t denominator() const { return den_; }
  double value() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  std::string str() const;

  friend bool operator==(const Rational&, const Rational&) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

/// An implementation advertised in a component/service repository.
struct RepositoryEntry {
  Identifier name;
  ImplVariant variant = ImplVariant::component_class;
  std::vector<InterfaceRef> interfaces;
  std::optional<std::string> os_requirement;
  std::optional<std::int64_t> footprint_mb;
  std::set<std::string> tags;

  friend bool operator==(const RepositoryEntry&, const RepositoryEntry&) = default;
};

class Repository {
 public:
  Repository() = default;
  /// Throws RepositoryError on a duplicate name.
  explicit Repository(std::vector<RepositoryEntry> entries);

  const std::vector<RepositoryEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  const RepositoryEntry* find(std::string_view name) const { return find_named(entries_, name); }

 private:
  std::vector<RepositoryEntry> entries_;
};

/// Schema or content problem in a repository file. `pointer()` is a JSON
/// pointer to the offending value ("" for the document root).
class RepositoryError : public std::runtime_error {
 public:
  RepositoryError(std::string pointer, const std::string& message);
  const std::string& pointer() const { return pointer_; }

 private:
  std::string pointer_;
};

/// Parses repository JSON text (see docs/repository-schema.json).
Repository parse_repository(std::string_view json_text);
Repository load_repository(const std::filesystem::path& file);

struct Candidate {
  const RepositoryEntry* entry = nullptr;
  Rational score;
  std::vector<InterfaceRef> matched;
  /// Interfaces the entry offers beyond the role.
  std::vector<InterfaceRef> surplus;
};

struct Rejection {
  const RepositoryEntry* entry = nullptr;
  std::vector<InterfaceRef> missing;
  std::vector<std::string> failed_constraints;
};

/// Candidates sorted by descending score, then ascending name. Entries point
/// into the repository passed to match_role.
struct MatchResult {
  Identifier role;
  std::vector<Candidate> candidates;
  std::vector<Rejection> rejected;
};

using Constraints = std::map<std::string, std::string>;

/// Nominal capability matchmaking. An entry qualifies iff it offers every
/// (name, direction) of the role and satisfies every constraint:
///   os               entry has no OS requirement, or it equals the value
///   variant          component_class | web_service
///   tags             comma-separated, all present in the entry tags
///   max_footprint_mb entry footprint absent or <= value
///   prefer           comma-separated soft tags; only affects the score
///   <other key k>    entry tags contain "k=value"
/// Base score is |role| / |entry| interfaces (1 when both are empty, 0 when only
/// the role is). With n preferred tags of which m are present, score =
/// base * (n + m) / (2n).
MatchResult match_role(const ComponentRole& role, const Repository& repo,
                       const Constraints& constraints = {});

}  // namespace crala
