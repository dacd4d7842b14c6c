#pragma once

#include <Eigen/Dense>

namespace kppca {

/// Square symmetric matrix. Symmetry is enforced on construction by averaging
/// the input with its transpose, so entries(i, j) == entries(j, i) bit for bit.
class SymMatrix {
 public:
  explicit SymMatrix(const Eigen::MatrixXd& m);

  const Eigen::MatrixXd& matrix() const noexcept { return m_; }
  Eigen::Index size() const noexcept { return m_.rows(); }
  double operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }

 private:
  Eigen::MatrixXd m_;
};

/// Eigenpairs of a symmetric PSD matrix in descending order.
///
/// Eigenvalues below `clamp_floor` are stored as exactly zero. `min_raw_eigenvalue`
/// keeps the smallest value reported by the solver before clamping so callers can
/// tell a rounding artefact from a genuinely indefinite input.
struct EigenDecomposition {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;  // column p pairs with eigenvalues(p)
  double clamp_floor = 0.0;
  double min_raw_eigenvalue = 0.0;

  Eigen::Index size() const noexcept { return eigenvalues.size(); }
  /// Number of eigenvalues strictly above zero after clamping.
  Eigen::Index rank() const noexcept;
};

/// Relative factor for the clamp floor: floor = kClampRelative * max(1, lambda_1).
inline constexpr double kClampRelative = 1e-12;

/// Full dense eigendecomposition. Each eigenvector is signed so that its entry of
/// largest magnitude is positive; near-ties go to the lowest index.
EigenDecomposition sym_eig(const SymMatrix& m);

/// K_c = J K J with J = I - (1/N) 1 1^T.
SymMatrix center_gram(const SymMatrix& k);

struct CenteredColumns {
  Eigen::MatrixXd centered;
  Eigen::VectorXd mean;
};

/// Subtracts the column average from every column of a d x N matrix.
CenteredColumns center_columns(const Eigen::MatrixXd& x);

/// S = V diag(sqrt(lambda)) V^T, the symmetric PSD square root.
Eigen::MatrixXd psd_sqrt_factor(const EigenDecomposition& e);

/// Throws Errc::NonFinite if any entry is NaN or infinite.
void require_finite(const Eigen::Ref<const Eigen::MatrixXd>& m, const char* what);

}  // namespace kppca
