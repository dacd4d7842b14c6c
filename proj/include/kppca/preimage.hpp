#pragma once

#include <Eigen/Dense>

#include "kppca/kernels.hpp"

namespace kppca {

/// Stabilization of the kernel-smoother normalizer. The defaults reproduce the
/// plain weighted average.
struct PreimageConfig {
  double epsilon = 0.0;        // added to the sum of weights
  bool clip_negative = false;  // clamp negative weights to zero first
};

/// x_hat = sum_i w_i x_i / (sum_i w_i + epsilon).
///
/// Throws DegenerateNormalizer when |sum_i w_i + epsilon| < 1e-12.
Eigen::VectorXd kernel_smoother(const TrainingSet& ts, const Eigen::Ref<const Eigen::VectorXd>& k,
                                const PreimageConfig& cfg = {});

/// Turns a centered kernel vector back into approximate raw kernel weights by
/// adding the training row means of K. The unknown mean similarity of the new
/// point is taken to be the grand mean of K.
Eigen::VectorXd uncenter_kernel_vector(const SymMatrix& k, const Eigen::Ref<const Eigen::VectorXd>& kc);

}  // namespace kppca
