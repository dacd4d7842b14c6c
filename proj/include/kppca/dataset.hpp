#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <variant>
#include <vector>

namespace kppca {

struct CsvSource {
  std::filesystem::path path;
};
struct IdxSource {
  std::filesystem::path images;
  std::filesystem::path labels;
};

enum class Normalize { None, UnitRange };

/// Where a dataset comes from and how it is trimmed. `filter` applies to IDX
/// labels only; `limit` keeps the first samples in file order.
struct DatasetHandle {
  std::variant<CsvSource, IdxSource> source;
  std::optional<std::set<int>> filter;
  std::optional<std::size_t> limit;
  Normalize normalize = Normalize::None;
};

struct Dataset {
  Eigen::MatrixXd x;  // d x N
  std::vector<std::uint8_t> labels;  // empty for CSV sources
  int image_rows = 0;  // set for IDX sources
  int image_cols = 0;
};

Dataset load_dataset(const DatasetHandle& handle);

/// Per-feature min-max scaling to [0, 1]; constant features map to 0.
Eigen::MatrixXd unit_range(const Eigen::MatrixXd& x);

}  // namespace kppca
