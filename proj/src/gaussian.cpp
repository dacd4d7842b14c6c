#include "kppca/gaussian.hpp"

#include "kppca/errors.hpp"

namespace kppca {

GaussianSpec GaussianSpec::from_covariance(Eigen::VectorXd mean, const Eigen::MatrixXd& cov) {
  if (cov.rows() != mean.size() || cov.cols() != mean.size()) {
    throw Error(Errc::DimensionMismatch, "covariance does not match the mean dimension");
  }
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success) {
    throw Error(Errc::NegativeEigenvalue, "covariance is not positive definite");
  }
  return GaussianSpec{std::move(mean), llt.matrixL()};
}

}  // namespace kppca
