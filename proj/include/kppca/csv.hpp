#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <string>
#include <vector>

namespace kppca {

/// Reads a rectangular numeric table with one sample per row and returns the
/// samples as columns (d x N). A first row with any non-numeric field is
/// treated as a header and skipped.
Eigen::MatrixXd load_csv(const std::filesystem::path& path);

/// Inverse of load_csv: one column of `samples` per output row, preceded by
/// `header`. Values use the shortest representation that round-trips exactly.
void save_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
              const Eigen::MatrixXd& samples);

/// Shortest decimal string that parses back to the same double.
std::string format_double(double value);

/// {prefix1, prefix2, ..., prefixN}
std::vector<std::string> numbered_header(const std::string& prefix, Eigen::Index count);

}  // namespace kppca
