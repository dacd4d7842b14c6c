#pragma once

#include <Eigen/Dense>
#include <string>

#include "kppca/spectral.hpp"

namespace kppca {

enum class KernelFamily { Linear, Rbf };

/// k(x, y) = x . y for Linear, exp(-|x - y|^2 / (2 gamma^2)) for Rbf.
struct KernelSpec {
  KernelFamily family = KernelFamily::Linear;
  double gamma = 1.0;  // bandwidth, Rbf only

  static KernelSpec linear() { return {KernelFamily::Linear, 1.0}; }
  static KernelSpec rbf(double gamma);

  /// Throws InvalidArgument unless gamma > 0 for Rbf.
  void validate() const;
  std::string name() const;

  friend bool operator==(const KernelSpec&, const KernelSpec&) = default;
};

/// N input points of dimension d_in, stored one per column.
class TrainingSet {
 public:
  explicit TrainingSet(Eigen::MatrixXd points);

  const Eigen::MatrixXd& points() const noexcept { return points_; }
  Eigen::Index dim() const noexcept { return points_.rows(); }
  Eigen::Index count() const noexcept { return points_.cols(); }
  auto point(Eigen::Index i) const { return points_.col(i); }

 private:
  Eigen::MatrixXd points_;
};

double kernel_eval(const KernelSpec& spec, const Eigen::Ref<const Eigen::VectorXd>& x,
                   const Eigen::Ref<const Eigen::VectorXd>& y);

/// Uncentered Gram matrix K(i, j) = k(x_i, x_j).
SymMatrix gram(const KernelSpec& spec, const TrainingSet& ts);

/// k(x, x_i) for every training point.
Eigen::VectorXd kernel_vector(const KernelSpec& spec, const TrainingSet& ts,
                              const Eigen::Ref<const Eigen::VectorXd>& x);

/// Out-of-sample centered kernel vector:
///   k_c(x, x_i) = k(x, x_i) - mean_j k(x, x_j) - mean_j k(x_j, x_i) + mean_{j,l} k(x_j, x_l)
Eigen::VectorXd centered_kernel_vector(const KernelSpec& spec, const TrainingSet& ts,
                                       const Eigen::Ref<const Eigen::VectorXd>& x);

/// Same as above with the uncentered Gram matrix already available.
Eigen::VectorXd centered_kernel_vector(const KernelSpec& spec, const TrainingSet& ts,
                                       const SymMatrix& k,
                                       const Eigen::Ref<const Eigen::VectorXd>& x);

}  // namespace kppca
