#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>

#include "kppca/kernels.hpp"

namespace kppca {

/// Provenance attached to every artifact the CLI writes.
struct RunMetadata {
  std::uint64_t seed = 0;
  KernelSpec kernel;
  int q = 0;
  double sigma2 = 0.0;
  double explained_variance = 0.0;
  std::string timestamp;  // ISO 8601, UTC
  std::string tool_version = KPPCA_VERSION;
  std::map<std::string, std::string> extra;  // command-specific settings

  /// JSON text. The timestamp is left out when `with_timestamp` is false so the
  /// result can be embedded in files that must be reproducible byte for byte.
  std::string to_json(bool with_timestamp = true) const;
  static RunMetadata from_json(const std::string& text);

  void write(const std::filesystem::path& path) const;
};

std::string utc_timestamp();

}  // namespace kppca
