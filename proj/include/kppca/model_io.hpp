#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <variant>

#include "kppca/dual_ppca.hpp"
#include "kppca/primal_ppca.hpp"

namespace kppca {

inline constexpr std::uint32_t kModelFormatVersion = 1;

using AnyModel = std::variant<PrimalModel, DualModel>;

struct ModelFile {
  AnyModel model;
  std::string metadata_json;  // empty when the file carries no META section
};

/// Sectioned little-endian binary container; see docs/model-format.md.
void save_model(const std::filesystem::path& path, const PrimalModel& model,
                const std::string& metadata_json = {});
void save_model(const std::filesystem::path& path, const DualModel& model,
                const std::string& metadata_json = {});

/// Throws BadMagic for foreign files, CorruptFile for damaged ones and VersionMismatch for
/// containers written by an unknown format version.
ModelFile load_model(const std::filesystem::path& path);

DualModel load_dual_model(const std::filesystem::path& path, std::string* metadata_json = nullptr);
PrimalModel load_primal_model(const std::filesystem::path& path, std::string* metadata_json = nullptr);

}  // namespace kppca
