#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>

namespace kppca {

using Rng = std::mt19937_64;

/// Independent generator for item `index` of a run seeded with `seed`. Lets
/// batched sampling be split across workers without changing its output.
Rng substream(std::uint64_t seed, std::uint64_t index);

/// Fills a rows x cols matrix with N(0, 1) draws, column by column.
Eigen::MatrixXd standard_normal(Rng& rng, Eigen::Index rows, Eigen::Index cols);

}  // namespace kppca
