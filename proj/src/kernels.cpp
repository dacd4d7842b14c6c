#include "kppca/kernels.hpp"

#include <cmath>
#include <sstream>

#include "kppca/errors.hpp"

namespace kppca {

KernelSpec KernelSpec::rbf(double gamma) {
  KernelSpec spec{KernelFamily::Rbf, gamma};
  spec.validate();
  return spec;
}

void KernelSpec::validate() const {
  if (family == KernelFamily::Rbf && !(gamma > 0.0 && std::isfinite(gamma))) {
    throw Error(Errc::InvalidArgument, "rbf bandwidth gamma must be positive");
  }
}

std::string KernelSpec::name() const {
  return family == KernelFamily::Linear ? "linear" : "rbf";
}

TrainingSet::TrainingSet(Eigen::MatrixXd points) : points_(std::move(points)) {
  if (points_.cols() < 1 || points_.rows() < 1) {
    throw Error(Errc::InvalidArgument, "training set needs N >= 1 points of dimension >= 1");
  }
  require_finite(points_, "training set");
}

double kernel_eval(const KernelSpec& spec, const Eigen::Ref<const Eigen::VectorXd>& x,
                   const Eigen::Ref<const Eigen::VectorXd>& y) {
  if (x.size() != y.size()) {
    std::ostringstream msg;
    msg << "kernel arguments have lengths " << x.size() << " and " << y.size();
    throw Error(Errc::DimensionMismatch, msg.str());
  }
  switch (spec.family) {
    case KernelFamily::Linear:
      return x.dot(y);
    case KernelFamily::Rbf:
      return std::exp(-(x - y).squaredNorm() / (2.0 * spec.gamma * spec.gamma));
  }
  return 0.0;
}

SymMatrix gram(const KernelSpec& spec, const TrainingSet& ts) {
  spec.validate();
  const Eigen::Index n = ts.count();
  Eigen::MatrixXd k(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i <= j; ++i) {
      k(i, j) = kernel_eval(spec, ts.point(i), ts.point(j));
      k(j, i) = k(i, j);
    }
  }
  return SymMatrix(k);
}

Eigen::VectorXd kernel_vector(const KernelSpec& spec, const TrainingSet& ts,
                              const Eigen::Ref<const Eigen::VectorXd>& x) {
  if (x.size() != ts.dim()) {
    std::ostringstream msg;
    msg << "input has dimension " << x.size() << ", training set has " << ts.dim();
    throw Error(Errc::DimensionMismatch, msg.str());
  }
  Eigen::VectorXd out(ts.count());
  for (Eigen::Index i = 0; i < ts.count(); ++i) out(i) = kernel_eval(spec, x, ts.point(i));
  return out;
}

Eigen::VectorXd centered_kernel_vector(const KernelSpec& spec, const TrainingSet& ts,
                                       const SymMatrix& k,
                                       const Eigen::Ref<const Eigen::VectorXd>& x) {
  if (k.size() != ts.count()) {
    throw Error(Errc::DimensionMismatch, "Gram matrix does not match the training set");
  }
  const Eigen::VectorXd kx = kernel_vector(spec, ts, x);
  const Eigen::VectorXd col_mean = k.matrix().colwise().mean().transpose();
  const double grand_mean = col_mean.mean();
  return (kx.array() - kx.mean() - col_mean.array() + grand_mean).matrix();
}

Eigen::VectorXd centered_kernel_vector(const KernelSpec& spec, const TrainingSet& ts,
                                       const Eigen::Ref<const Eigen::VectorXd>& x) {
  return centered_kernel_vector(spec, ts, gram(spec, ts), x);
}

}  // namespace kppca
