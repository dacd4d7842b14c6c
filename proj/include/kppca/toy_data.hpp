#pragma once

#include <Eigen/Dense>
#include <cstdint>

namespace kppca {

/// Two interleaved noisy half-circles in the plane (2 x count), alternating
/// between the arcs. A stand-in for small 2-D demonstration sets.
Eigen::MatrixXd two_arcs(Eigen::Index count, std::uint64_t seed, double noise = 0.1);

}  // namespace kppca
