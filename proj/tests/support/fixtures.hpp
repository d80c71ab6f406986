#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "crala/cli.hpp"
#include "crala/parser.hpp"

namespace crala::testing {

inline std::filesystem::path fixture_path(const std::string& relative) {
  return std::filesystem::path(CRALA_FIXTURES_DIR) / relative;
}

inline std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

inline ParseResult parse_fixture(const std::string& relative) {
  auto path = fixture_path(relative);
  return parse(read_text(path), path.string());
}

/// First document of type T in a fixture; throws when there is none.
template <typename T>
T load(const std::string& relative) {
  for (auto& doc : parse_fixture(relative).documents) {
    if (auto* d = std::get_if<T>(&doc)) return std::move(*d);
  }
  throw std::runtime_error("no document of the requested level in " + relative);
}

inline CloudDescription load_cloud(const std::string& relative) {
  auto parsed = parse_fixture(relative);
  if (parsed.clouds.empty()) throw std::runtime_error("no cloud in " + relative);
  return parsed.clouds.front();
}

inline std::vector<std::string> reference_files() {
  std::vector<std::string> out;
  for (const char* name : {"spec1", "config1", "config2", "ass1", "ass2"}) {
    out.push_back(fixture_path(std::string("lab/") + name + ".crala").string());
  }
  return out;
}

/// Parses documents from text and runs the full check pipeline.
inline cli::CheckResult check_texts(const std::vector<std::pair<std::string, std::string>>& named_texts) {
  cli::Inputs inputs;
  for (const auto& [name, text] : named_texts) {
    inputs.sources.add(name, text);
    auto parsed = parse(text, name);
    for (auto& d : parsed.documents) inputs.documents.push_back(std::move(d));
    for (auto& c : parsed.clouds) inputs.clouds.push_back(std::move(c));
    for (auto& d : parsed.diagnostics) inputs.diagnostics.push_back(std::move(d));
  }
  return cli::check_documents(std::move(inputs));
}

inline std::vector<std::string> codes(const std::vector<Diagnostic>& diagnostics) {
  std::vector<std::string> out;
  for (const auto& d : diagnostics) out.push_back(d.code);
  return out;
}

inline std::vector<std::string> error_codes(const std::vector<Diagnostic>& diagnostics) {
  std::vector<std::string> out;
  for (const auto& d : diagnostics) {
    if (d.severity == Severity::error) out.push_back(d.code);
  }
  return out;
}

}  // namespace crala::testing
