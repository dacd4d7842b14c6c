#pragma once

#include <Eigen/Dense>

namespace kppca {

/// Multivariate normal N(mean, B B^T) described by a covariance factor B.
struct GaussianSpec {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov_factor;

  Eigen::Index dim() const noexcept { return mean.size(); }
  Eigen::MatrixXd covariance() const { return cov_factor * cov_factor.transpose(); }

  /// Builds the spec from a symmetric positive definite covariance via Cholesky.
  static GaussianSpec from_covariance(Eigen::VectorXd mean, const Eigen::MatrixXd& cov);
};

}  // namespace kppca
