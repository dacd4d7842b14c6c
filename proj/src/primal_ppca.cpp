#include "kppca/primal_ppca.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "kppca/errors.hpp"
#include "kppca/spectral.hpp"

namespace kppca {

namespace {

void require_dim(const PrimalModel& m, Eigen::Index size, const char* what) {
  if (size != m.dim()) {
    throw Error(Errc::DimensionMismatch, std::string(what) + " has length " + std::to_string(size) +
                                             ", model dimension is " + std::to_string(m.dim()));
  }
}

}  // namespace

PrimalModel fit_primal(const Eigen::MatrixXd& x, const LatentSpec& latent) {
  if (x.rows() < 1 || x.cols() < 1) throw Error(Errc::InvalidArgument, "data matrix is empty");
  const auto [xc, mean] = center_columns(x);
  const Eigen::Index d = x.rows();
  const Eigen::Index n = x.cols();
  const EigenDecomposition eig = sym_eig(SymMatrix(xc * xc.transpose()));

  PrimalModel m;
  m.mu = mean;
  m.n = static_cast<int>(n);
  m.eigenvalues = Eigen::VectorXd::Zero(n);
  const Eigen::Index shared = std::min(d, n);
  m.eigenvalues.head(shared) = eig.eigenvalues.head(shared);

  const ResolvedLatent resolved = resolve_latent(latent, m.eigenvalues, m.n,
                                                 static_cast<int>(shared), Errc::LatentTooLarge);
  m.q = resolved.q;
  m.sigma2 = resolved.sigma2;
  m.v = eig.eigenvectors.leftCols(m.q);
  m.w.resize(d, m.q);
  for (int p = 0; p < m.q; ++p) {
    const double s2 = std::max(m.eigenvalues(p) / static_cast<double>(n) - m.sigma2, 0.0);
    m.w.col(p) = std::sqrt(s2) * m.v.col(p);
  }
  return m;
}

GaussianSpec latent_posterior(const PrimalModel& m, const Eigen::Ref<const Eigen::VectorXd>& phi) {
  require_dim(m, phi.size(), "feature vector");
  if (!(m.sigma2 > 0.0)) {
    throw Error(Errc::SigmaZero, "posterior is degenerate at sigma2 = 0; use latent_map");
  }
  const Eigen::MatrixXd precision =
      m.w.transpose() * m.w + m.sigma2 * Eigen::MatrixXd::Identity(m.q, m.q);
  const Eigen::LDLT<Eigen::MatrixXd> ldlt(precision);
  Eigen::VectorXd mean = ldlt.solve(m.w.transpose() * (phi - m.mu));
  const Eigen::MatrixXd cov = m.sigma2 * ldlt.solve(Eigen::MatrixXd::Identity(m.q, m.q));
  return GaussianSpec::from_covariance(std::move(mean), 0.5 * (cov + cov.transpose()));
}

Eigen::VectorXd latent_map(const PrimalModel& m, const Eigen::Ref<const Eigen::VectorXd>& phi) {
  require_dim(m, phi.size(), "feature vector");
  require_finite(phi, "feature vector");
  const Eigen::VectorXd centered = phi - m.mu;
  if (m.sigma2 > 0.0) {
    const Eigen::MatrixXd precision =
        m.w.transpose() * m.w + m.sigma2 * Eigen::MatrixXd::Identity(m.q, m.q);
    return precision.ldlt().solve(m.w.transpose() * centered);
  }
  // Noise-free limit: Moore-Penrose pseudo-inverse.
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(m.w, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& s = svd.singularValues();
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(s.size());
  if (s.size() > 0 && s(0) > 0.0) {
    const double cutoff = 1e-10 * s(0);
    for (Eigen::Index i = 0; i < s.size(); ++i) {
      if (s(i) > cutoff) inv(i) = 1.0 / s(i);
    }
  }
  return svd.matrixV() * inv.asDiagonal() * (svd.matrixU().transpose() * centered);
}

Eigen::VectorXd feature_reconstruct(const PrimalModel& m, const Eigen::Ref<const Eigen::VectorXd>& h) {
  if (h.size() != m.q) {
    throw Error(Errc::DimensionMismatch, "latent code has length " + std::to_string(h.size()) +
                                             ", model has q=" + std::to_string(m.q));
  }
  return m.w * h + m.mu;
}

double marginal_loglik(const PrimalModel& m, const Eigen::MatrixXd& x) {
  require_dim(m, x.rows(), "data matrix");
  require_finite(x, "data matrix");
  if (!(m.sigma2 > 0.0)) {
    throw Error(Errc::SigmaZero, "marginal likelihood is degenerate at sigma2 = 0");
  }
  const double d = static_cast<double>(m.dim());
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(m.w, Eigen::ComputeThinU);
  const Eigen::VectorXd& s = svd.singularValues();
  const Eigen::Index rank = s.size();

  // Spectrum of w w^T + sigma^2 I: s_p^2 + sigma^2 along u_p, sigma^2 elsewhere.
  const Eigen::VectorXd variances = s.array().square() + m.sigma2;
  const double log_det = variances.array().log().sum() +
                         (d - static_cast<double>(rank)) * std::log(m.sigma2);

  double quad = 0.0;
  for (Eigen::Index i = 0; i < x.cols(); ++i) {
    const Eigen::VectorXd r = x.col(i) - m.mu;
    const Eigen::VectorXd c = svd.matrixU().transpose() * r;
    quad += (r.squaredNorm() - c.squaredNorm()) / m.sigma2 +
            (c.array().square() / variances.array()).sum();
  }
  const double per_sample = d * std::log(2.0 * std::numbers::pi) + log_det;
  return -0.5 * (static_cast<double>(x.cols()) * per_sample + quad);
}

Eigen::MatrixXd sample_feature(const PrimalModel& m, Rng& rng, Eigen::Index count) {
  if (count < 0) throw Error(Errc::InvalidArgument, "sample count must be non-negative");
  if (m.sigma2 < 0.0) throw Error(Errc::InvalidArgument, "sigma2 must be non-negative");
  const double sigma = std::sqrt(m.sigma2);
  Eigen::MatrixXd out(m.dim(), count);
  for (Eigen::Index j = 0; j < count; ++j) {
    const Eigen::MatrixXd z = standard_normal(rng, m.q, 1);
    const Eigen::MatrixXd zeta = standard_normal(rng, m.dim(), 1);
    out.col(j) = m.mu + m.w * z.col(0) + sigma * zeta.col(0);
  }
  return out;
}

}  // namespace kppca
