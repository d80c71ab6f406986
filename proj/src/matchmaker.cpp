#include "crala/matchmaker.hpp"

#include <algorithm>
#include <fmt/format.h>
#include <fstream>
#include <numeric>
#include <sstream>

#include <json.hpp>

namespace crala {

using nlohmann::json;

Rational::Rational(std::int64_t numerator, std::int64_t denominator) {
  if (denominator <= 0 || numerator < 0) throw std::invalid_argument("Rational needs num >= 0, den > 0");
  std::int64_t g = std::gcd(numerator, denominator);
  num_ = numerator / g;
  den_ = denominator / g;
}

std::string Rational::str() const { return fmt::format("{}/{}", num_, den_); }

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  return a.num_ * b.den_ <=> b.num_ * a.den_;
}

RepositoryError::RepositoryError(std::string pointer, const std::string& message)
    : std::runtime_error(pointer.empty() ? message : pointer + ": " + message), pointer_(std::move(pointer)) {}

Repository::Repository(std::vector<RepositoryEntry> entries) {
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (find_named(entries_, entries[i].name) != nullptr) {
      throw RepositoryError(fmt::format("/entries/{}/name", i),
                            fmt::format("duplicate entry name '{}'", entries[i].name));
    }
    entries_.push_back(std::move(entries[i]));
  }
}

namespace {

std::string child(const std::string& pointer, std::string_view key) {
  return fmt::format("{}/{}", pointer, key);
}

std::string child(const std::string& pointer, std::size_t index) {
  return fmt::format("{}/{}", pointer, index);
}

const json& require_key(const json& object, const std::string& pointer, const char* key) {
  auto it = object.find(key);
  if (it == object.end()) throw RepositoryError(pointer, fmt::format("missing required key '{}'", key));
  return *it;
}

std::string expect_string(const json& value, const std::string& pointer) {
  if (!value.is_string()) throw RepositoryError(pointer, "expected a string");
  return value.get<std::string>();
}

Identifier expect_identifier(const json& value, const std::string& pointer) {
  auto text = expect_string(value, pointer);
  if (!is_identifier(text)) throw RepositoryError(pointer, fmt::format("'{}' is not an identifier", text));
  return text;
}

void reject_unknown_keys(const json& object, const std::string& pointer,
                         std::initializer_list<std::string_view> allowed) {
  for (const auto& [key, value] : object.items()) {
    if (std::ranges::find(allowed, key) == allowed.end()) {
      throw RepositoryError(child(pointer, key), fmt::format("unknown key '{}'", key));
    }
  }
}

InterfaceRef parse_interface(const json& value, const std::string& pointer) {
  if (!value.is_object()) throw RepositoryError(pointer, "expected an object");
  reject_unknown_keys(value, pointer, {"name", "direction"});
  InterfaceRef ref;
  ref.name = expect_identifier(require_key(value, pointer, "name"), child(pointer, "name"));
  const auto dir_pointer = child(pointer, "direction");
  auto direction = expect_string(require_key(value, pointer, "direction"), dir_pointer);
  if (direction == "provided") {
    ref.direction = Direction::provided;
  } else if (direction == "required") {
    ref.direction = Direction::required;
  } else {
    throw RepositoryError(dir_pointer, fmt::format("direction must be 'provided' or 'required', got '{}'", direction));
  }
  return ref;
}

RepositoryEntry parse_entry(const json& value, const std::string& pointer) {
  if (!value.is_object()) throw RepositoryError(pointer, "expected an object");
  reject_unknown_keys(value, pointer,
                      {"name", "variant", "interfaces", "os_requirement", "footprint_mb", "tags"});
  RepositoryEntry entry;
  entry.name = expect_identifier(require_key(value, pointer, "name"), child(pointer, "name"));

  const auto variant_pointer = child(pointer, "variant");
  auto variant = expect_string(require_key(value, pointer, "variant"), variant_pointer);
  if (variant == "component_class") {
    entry.variant = ImplVariant::component_class;
  } else if (variant == "web_service") {
    entry.variant = ImplVariant::web_service;
  } else {
    throw RepositoryError(variant_pointer,
                          fmt::format("variant must be 'component_class' or 'web_service', got '{}'", variant));
  }

  const auto ifaces_pointer = child(pointer, "interfaces");
  const auto& ifaces = require_key(value, pointer, "interfaces");
  if (!ifaces.is_array()) throw RepositoryError(ifaces_pointer, "expected an array");
  for (std::size_t i = 0; i < ifaces.size(); ++i) {
    auto ref = parse_interface(ifaces[i], child(ifaces_pointer, i));
    if (std::ranges::find(entry.interfaces, ref) != entry.interfaces.end()) {
      throw RepositoryError(child(ifaces_pointer, i), fmt::format("duplicate interface '{}'", ref.name));
    }
    entry.interfaces.push_back(std::move(ref));
  }

  if (auto it = value.find("os_requirement"); it != value.end()) {
    entry.os_requirement = expect_string(*it, child(pointer, "os_requirement"));
  }
  if (auto it = value.find("footprint_mb"); it != value.end()) {
    if (!it->is_number_integer() || it->get<std::int64_t>() < 1) {
      throw RepositoryError(child(pointer, "footprint_mb"), "expected a positive integer");
    }
    entry.footprint_mb = it->get<std::int64_t>();
  }
  if (auto it = value.find("tags"); it != value.end()) {
    const auto tags_pointer = child(pointer, "tags");
    if (!it->is_array()) throw RepositoryError(tags_pointer, "expected an array");
    for (std::size_t i = 0; i < it->size(); ++i) {
      entry.tags.insert(expect_string((*it)[i], child(tags_pointer, i)));
    }
  }
  return entry;
}

std::vector<std::string> split_csv(std::string_view text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto comma = text.find(',', start);
    if (comma == std::string_view::npos) comma = text.size();
    auto item = text.substr(start, comma - start);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    if (!item.empty()) out.emplace_back(item);
    start = comma + 1;
  }
  return out;
}

// Empty when the constraint holds, otherwise a short reason.
std::string check_constraint(const RepositoryEntry& entry, const std::string& key, const std::string& value) {
  if (key == "prefer") return {};
  if (key == "os") {
    if (!entry.os_requirement || *entry.os_requirement == value) return {};
    return fmt::format("os: requires '{}'", *entry.os_requirement);
  }
  if (key == "variant") {
    if (to_string(entry.variant) == value) return {};
    return fmt::format("variant: is {}", to_string(entry.variant));
  }
  if (key == "tags") {
    for (const auto& tag : split_csv(value)) {
      if (!entry.tags.contains(tag)) return fmt::format("tags: lacks '{}'", tag);
    }
    return {};
  }
  if (key == "max_footprint_mb") {
    std::int64_t limit = 0;
    try {
      limit = std::stoll(value);
    } catch (const std::exception&) {
      return fmt::format("max_footprint_mb: '{}' is not a number", value);
    }
    if (!entry.footprint_mb || *entry.footprint_mb <= limit) return {};
    return fmt::format("max_footprint_mb: needs {} MB", *entry.footprint_mb);
  }
  if (entry.tags.contains(key + "=" + value)) return {};
  return fmt::format("{}: lacks tag '{}={}'", key, key, value);
}

Rational base_score(std::size_t role_size, std::size_t entry_size) {
  if (entry_size == 0) return Rational(1, 1);
  return Rational(static_cast<std::int64_t>(role_size), static_cast<std::int64_t>(entry_size));
}

}  // namespace

Repository parse_repository(std::string_view json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw RepositoryError("", fmt::format("invalid JSON: {}", e.what()));
  }
  if (!root.is_object()) throw RepositoryError("", "expected an object at the root");
  reject_unknown_keys(root, "", {"$schema", "description", "entries"});
  const auto& entries = require_key(root, "", "entries");
  if (!entries.is_array()) throw RepositoryError("/entries", "expected an array");
  std::vector<RepositoryEntry> parsed;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    parsed.push_back(parse_entry(entries[i], child("/entries", i)));
  }
  return Repository(std::move(parsed));
}

Repository load_repository(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw RepositoryError("", fmt::format("cannot read '{}'", file.string()));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_repository(buffer.str());
}

MatchResult match_role(const ComponentRole& role, const Repository& repo, const Constraints& constraints) {
  MatchResult result;
  result.role = role.name;

  std::vector<std::string> preferred;
  if (auto it = constraints.find("prefer"); it != constraints.end()) preferred = split_csv(it->second);

  for (const auto& entry : repo.entries()) {
    Rejection rejection{&entry, {}, {}};
    for (const auto& want : role.interfaces) {
      if (std::ranges::find(entry.interfaces, want) == entry.interfaces.end()) rejection.missing.push_back(want);
    }
    for (const auto& [key, value] : constraints) {
      auto reason = check_constraint(entry, key, value);
      if (!reason.empty()) rejection.failed_constraints.push_back(std::move(reason));
    }
    if (!rejection.missing.empty() || !rejection.failed_constraints.empty()) {
      result.rejected.push_back(std::move(rejection));
      continue;
    }

    Candidate candidate{&entry, base_score(role.interfaces.size(), entry.interfaces.size()), {}, {}};
    for (const auto& offered : entry.interfaces) {
      bool needed = std::ranges::find(role.interfaces, offered) != role.interfaces.end();
      (needed ? candidate.matched : candidate.surplus).push_back(offered);
    }
    if (!preferred.empty()) {
      auto n = static_cast<std::int64_t>(preferred.size());
      auto m = static_cast<std::int64_t>(
          std::ranges::count_if(preferred, [&](const std::string& tag) { return entry.tags.contains(tag); }));
      const Rational& b = candidate.score;
      candidate.score = Rational(b.numerator() * (n + m), b.denominator() * 2 * n);
    }
    result.candidates.push_back(std::move(candidate));
  }

  std::ranges::sort(result.candidates, [](const Candidate& a, const Candidate& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.entry->name < b.entry->name;
  });
  return result;
}

}  // namespace crala
