#include <gtest/gtest.h>

#include <cmath>

#include "kppca/errors.hpp"
#include "kppca/kernels.hpp"
#include "oracles.hpp"

namespace kppca {
namespace {

using oracle::max_abs;

TEST(KernelEval, RbfAtZeroDistanceIsOne) {
  const Eigen::Vector3d x(0.3, -1.0, 2.0);
  for (double gamma : {0.1, 1.0, 7.5}) EXPECT_EQ(kernel_eval(KernelSpec::rbf(gamma), x, x), 1.0);
}

TEST(KernelEval, RbfFormula) {
  const Eigen::Vector2d x(0.0, 0.0);
  const Eigen::Vector2d y(2.0, 0.0);
  EXPECT_NEAR(kernel_eval(KernelSpec::rbf(2.0), x, y), std::exp(-0.5), 1e-15);
  EXPECT_NEAR(kernel_eval(KernelSpec::rbf(2.0), x, y), 0.60653, 1e-5);
}

TEST(KernelEval, LinearIsDotProduct) {
  EXPECT_EQ(kernel_eval(KernelSpec::linear(), Eigen::Vector2d(1, 2), Eigen::Vector2d(3, -1)), 1.0);
}

TEST(KernelEval, SymmetricAndBounded) {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 50; ++i) {
    const Eigen::VectorXd x = oracle::random_matrix(rng, 4, 1);
    const Eigen::VectorXd y = oracle::random_matrix(rng, 4, 1);
    const auto rbf = KernelSpec::rbf(0.5 + i * 0.1);
    const double k = kernel_eval(rbf, x, y);
    EXPECT_EQ(k, kernel_eval(rbf, y, x));
    EXPECT_GT(k, 0.0);
    EXPECT_LE(k, 1.0);
    EXPECT_EQ(kernel_eval(KernelSpec::linear(), x, y), kernel_eval(KernelSpec::linear(), y, x));
  }
}

TEST(KernelEval, DimensionMismatch) {
  try {
    kernel_eval(KernelSpec::linear(), Eigen::Vector2d(1, 2), Eigen::Vector3d(1, 2, 3));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::DimensionMismatch);
  }
}

TEST(KernelSpec, RejectsNonPositiveGamma) {
  EXPECT_THROW(KernelSpec::rbf(0.0), Error);
  EXPECT_THROW(KernelSpec::rbf(-1.0), Error);
}

TEST(Gram, SinglePointRbf) {
  const TrainingSet ts(Eigen::MatrixXd::Constant(3, 1, 0.7));
  const auto k = gram(KernelSpec::rbf(1.0), ts);
  EXPECT_EQ(k.size(), 1);
  EXPECT_EQ(k(0, 0), 1.0);
}

TEST(Gram, IdenticalPointsRbf) {
  const TrainingSet ts(Eigen::MatrixXd::Constant(2, 2, 1.5));
  EXPECT_EQ(gram(KernelSpec::rbf(0.3), ts).matrix(), Eigen::MatrixXd::Ones(2, 2));
}

TEST(Gram, LinearMatchesElementwiseDotProducts) {
  std::mt19937_64 rng(2);
  const Eigen::MatrixXd x = oracle::random_matrix(rng, 3, 6);
  const auto k = gram(KernelSpec::linear(), TrainingSet(x));
  for (Eigen::Index i = 0; i < 6; ++i) {
    for (Eigen::Index j = 0; j < 6; ++j) {
      double dot = 0.0;
      for (Eigen::Index r = 0; r < 3; ++r) dot += x(r, i) * x(r, j);
      EXPECT_NEAR(k(i, j), dot, 1e-12);
    }
  }
}

TEST(Gram, RbfDiagonalIsOne) {
  std::mt19937_64 rng(3);
  const auto k = gram(KernelSpec::rbf(2.0), TrainingSet(oracle::random_matrix(rng, 2, 9)));
  EXPECT_EQ(k.matrix().diagonal(), Eigen::VectorXd::Ones(9));
}

TEST(CenteredKernelVector, ReproducesCenteredGramColumns) {
  std::mt19937_64 rng(4);
  const TrainingSet ts(oracle::random_matrix(rng, 3, 7));
  for (const auto& spec : {KernelSpec::linear(), KernelSpec::rbf(1.3)}) {
    const auto kc = center_gram(gram(spec, ts));
    for (Eigen::Index m = 0; m < ts.count(); ++m) {
      const Eigen::VectorXd v = centered_kernel_vector(spec, ts, ts.point(m));
      EXPECT_LE(max_abs(v - kc.matrix().col(m)), 1e-12);
    }
  }
}

TEST(CenteredKernelVector, SinglePointIsZero) {
  const TrainingSet ts(Eigen::MatrixXd::Constant(2, 1, 3.0));
  const Eigen::VectorXd v = centered_kernel_vector(KernelSpec::linear(), ts, Eigen::Vector2d(-1, 4));
  EXPECT_EQ(v.size(), 1);
  EXPECT_NEAR(v(0), 0.0, 1e-14);
}

TEST(CenteredKernelVector, LinearMatchesExplicitFeatures) {
  std::mt19937_64 rng(5);
  const Eigen::MatrixXd x = oracle::random_matrix(rng, 4, 6);
  const Eigen::VectorXd mean = x.rowwise().mean();
  const Eigen::MatrixXd xc = x.colwise() - mean;
  for (int i = 0; i < 10; ++i) {
    const Eigen::VectorXd probe = oracle::random_matrix(rng, 4, 1);
    const Eigen::VectorXd v = centered_kernel_vector(KernelSpec::linear(), TrainingSet(x), probe);
    EXPECT_LE(max_abs(v - xc.transpose() * (probe - mean)), 1e-12);
  }
}

TEST(CenteredKernelVector, DimensionMismatch) {
  const TrainingSet ts(Eigen::MatrixXd::Ones(2, 3));
  EXPECT_THROW(centered_kernel_vector(KernelSpec::linear(), ts, Eigen::Vector3d(1, 2, 3)), Error);
}

}  // namespace
}  // namespace kppca
