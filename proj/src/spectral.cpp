#include "kppca/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "kppca/errors.hpp"

namespace kppca {

void require_finite(const Eigen::Ref<const Eigen::MatrixXd>& m, const char* what) {
  if (!m.allFinite()) {
    throw Error(Errc::NonFinite, std::string(what) + " contains NaN or Inf");
  }
}

SymMatrix::SymMatrix(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) {
    throw Error(Errc::DimensionMismatch,
                "symmetric matrix must be square, got " + std::to_string(m.rows()) + "x" +
                    std::to_string(m.cols()));
  }
  if (m.rows() < 1) {
    throw Error(Errc::InvalidArgument, "symmetric matrix must have n >= 1");
  }
  require_finite(m, "symmetric matrix");
  m_ = 0.5 * (m + m.transpose());
}

Eigen::Index EigenDecomposition::rank() const noexcept {
  return (eigenvalues.array() > 0.0).count();
}

namespace {

void normalize_sign(Eigen::Ref<Eigen::VectorXd> v) {
  const double largest = v.cwiseAbs().maxCoeff();
  if (largest == 0.0) return;
  // Entries within this relative band of the maximum count as tied, so rounding
  // noise cannot flip the choice between (1, 1)/sqrt(2)-style pairs.
  const double tie = largest * (1.0 - 1e-9);
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) >= tie) {
      if (v(i) < 0.0) v = -v;
      return;
    }
  }
}

}  // namespace

EigenDecomposition sym_eig(const SymMatrix& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m.matrix());
  if (solver.info() != Eigen::Success) {
    throw Error(Errc::NoConvergence, "symmetric eigensolver did not converge");
  }
  const Eigen::VectorXd& ascending = solver.eigenvalues();
  const Eigen::Index n = ascending.size();

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return ascending(a) > ascending(b); });

  EigenDecomposition out;
  out.eigenvalues.resize(n);
  out.eigenvectors.resize(n, n);
  for (Eigen::Index p = 0; p < n; ++p) {
    out.eigenvalues(p) = ascending(order[static_cast<std::size_t>(p)]);
    out.eigenvectors.col(p) = solver.eigenvectors().col(order[static_cast<std::size_t>(p)]);
    normalize_sign(out.eigenvectors.col(p));
  }
  out.min_raw_eigenvalue = out.eigenvalues(n - 1);
  out.clamp_floor = kClampRelative * std::max(1.0, out.eigenvalues(0));
  for (Eigen::Index p = 0; p < n; ++p) {
    if (out.eigenvalues(p) < out.clamp_floor) out.eigenvalues(p) = 0.0;
  }
  return out;
}

SymMatrix center_gram(const SymMatrix& k) {
  const Eigen::MatrixXd& km = k.matrix();
  const Eigen::VectorXd row_mean = km.rowwise().mean();
  const double grand_mean = row_mean.mean();
  Eigen::MatrixXd kc = km;
  kc.colwise() -= row_mean;
  kc.rowwise() -= row_mean.transpose();
  kc.array() += grand_mean;
  return SymMatrix(kc);
}

CenteredColumns center_columns(const Eigen::MatrixXd& x) {
  if (x.cols() < 1) throw Error(Errc::InvalidArgument, "need at least one column");
  require_finite(x, "data matrix");
  CenteredColumns out;
  out.mean = x.rowwise().mean();
  out.centered = x.colwise() - out.mean;
  return out;
}

Eigen::MatrixXd psd_sqrt_factor(const EigenDecomposition& e) {
  if (e.min_raw_eigenvalue < -e.clamp_floor) {
    throw Error(Errc::NegativeEigenvalue,
                "matrix is indefinite (eigenvalue " + std::to_string(e.min_raw_eigenvalue) + ")");
  }
  const Eigen::VectorXd root = e.eigenvalues.cwiseMax(0.0).cwiseSqrt();
  return e.eigenvectors * root.asDiagonal() * e.eigenvectors.transpose();
}

}  // namespace kppca
