#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <vector>

namespace kppca {

inline constexpr std::uint32_t kIdxImagesMagic = 0x00000803;
inline constexpr std::uint32_t kIdxLabelsMagic = 0x00000801;

struct MnistData {
  Eigen::MatrixXd pixels;  // (rows * cols) x N, scaled to [0, 1]
  std::vector<std::uint8_t> labels;
  int rows = 0;
  int cols = 0;
};

/// Reads a big-endian IDX image/label pair. Samples whose label is not in
/// `filter` are skipped; at most `limit` samples are kept, in file order.
MnistData load_mnist_idx(const std::filesystem::path& images, const std::filesystem::path& labels,
                         const std::optional<std::set<int>>& filter = std::nullopt,
                         const std::optional<std::size_t>& limit = std::nullopt);

/// True when the file starts with the IDX image magic number.
bool is_idx_images(const std::filesystem::path& path);

/// Writes an IDX pair; pixel values are clamped to [0, 1] and scaled to bytes.
void save_mnist_idx(const std::filesystem::path& images, const std::filesystem::path& labels,
                    const MnistData& data);

}  // namespace kppca
