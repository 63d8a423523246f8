#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "floquet/model.hpp"
#include "floquet/verify.hpp"

namespace floquet::cli {

inline constexpr const char* kToolName = "floquet-lab";
const char* tool_version();

struct SweepSpec {
  std::string parameter;
  double start = 0.0;
  double stop = 1.0;
  int count = 11;

  double value(int k) const;
};

struct OutputSpec {
  std::filesystem::path directory = ".";
  std::vector<std::string> formats{"csv", "json"};  // subset of csv, json, svg

  bool wants(const std::string& f) const;
};

struct RunConfig {
  ModelSpec model;
  verify::Settings settings;
  std::vector<verify::Suite> suites;  // default selection for `verify`
  OutputSpec output;
  std::optional<SweepSpec> sweep;
  int jobs = 0;

  /// "section.key=value" lines of the resolved configuration (output section excluded).
  std::string canonical() const;
  /// First 16 hex digits of the SHA-256 of canonical().
  std::string hash() const;
};

/// Flattened "section.key" -> value text.
using KeyValues = std::map<std::string, std::string>;

KeyValues read_ini(const std::string& text);
KeyValues read_json(const std::string& text);
RunConfig build_config(const KeyValues& kv);

/// Chooses the parser by extension (.json, otherwise INI).
RunConfig load_config(const std::filesystem::path& path);

}  // namespace floquet::cli
