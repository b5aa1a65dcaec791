#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include <json.hpp>

#include "wavelab/core/field.hpp"

namespace wavelab::cli {

using Json = nlohmann::json;

inline constexpr const char* kVersion = "wavelab 1.0.0";

/// Default configuration tree. Every key a run may read is listed here; a
/// user file may only override existing keys.
Json default_config();

/// Recursively overlays `overrides` on `base`. Throws ValidationError on an
/// unknown key or a value whose JSON type differs from the default.
void merge_into(Json& base, const Json& overrides, const std::string& path = "");

/// Resolved run configuration.
class RunConfig {
 public:
  RunConfig();

  /// Merges a config (or manifest) file. A top-level "manifest" block is
  /// accepted and ignored.
  void load_file(const std::filesystem::path& path);
  /// Merges `section.key = value` from a command-line flag.
  void set(const std::string& section, const std::string& key, Json value);

  const Json& tree() const noexcept { return tree_; }

  double number(const std::string& section, const std::string& key) const;
  std::int64_t integer(const std::string& section, const std::string& key) const;
  std::size_t count(const std::string& section, const std::string& key) const;
  std::string text(const std::string& section, const std::string& key) const;
  const Json& node(const std::string& section, const std::string& key) const;

  std::uint64_t seed() const;
  int threads() const;
  PhysicalConstants constants() const;

  /// WAVELAB_OUTPUT_DIR overrides output.dir.
  std::filesystem::path output_dir() const;

  /// Resolved tree plus the command and version, with sorted keys.
  Json manifest(const std::string& command, const std::string& target) const;

 private:
  Json tree_;
};

/// Writes `manifest.json` into the directory (created if needed).
std::filesystem::path emit_manifest(const std::filesystem::path& dir, const Json& manifest);

}  // namespace wavelab::cli
