#include "kppca/dual_ppca.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "kppca/errors.hpp"
#include "kppca/random.hpp"

namespace kppca {

namespace {

void require_length(const DualModel& m, Eigen::Index size, const char* what) {
  if (size != m.n()) {
    throw Error(Errc::DimensionMismatch, std::string(what) + " has length " + std::to_string(size) +
                                             ", model has N=" + std::to_string(m.n()));
  }
}

Eigen::MatrixXd latent_precision(const DualModel& m) {
  return m.a.transpose() * m.kc.matrix() * m.a +
         m.sigma2 * Eigen::MatrixXd::Identity(m.q, m.q);
}

void require_full_latent_rank(const DualModel& m) {
  if (m.q < 1 || !(m.eigenvalues(m.q - 1) > 0.0)) {
    throw Error(Errc::RankDeficient, "lambda_q is below the clamp floor");
  }
}

}  // namespace

DualModel fit_dual(const SymMatrix& kc, const LatentSpec& latent, const KernelSpec& spec,
                   const TrainingSet& ts) {
  spec.validate();
  const Eigen::Index n = kc.size();
  if (n != ts.count()) {
    throw Error(Errc::DimensionMismatch, "Gram matrix is " + std::to_string(n) + "x" +
                                             std::to_string(n) + " but the training set has " +
                                             std::to_string(ts.count()) + " points");
  }
  const double scale = std::max(1.0, kc.matrix().cwiseAbs().maxCoeff());
  const double worst_row = kc.matrix().rowwise().sum().cwiseAbs().maxCoeff();
  if (worst_row > 1e-6 * scale) {
    throw Error(Errc::NotCentered, "row sums of K_c reach " + std::to_string(worst_row));
  }

  EigenDecomposition eig = sym_eig(kc);
  if (eig.min_raw_eigenvalue < -1e-8 * std::max(1.0, eig.eigenvalues(0))) {
    throw Error(Errc::NegativeEigenvalue, "centered Gram matrix is indefinite (eigenvalue " +
                                              std::to_string(eig.min_raw_eigenvalue) + ")");
  }
  const int rank = static_cast<int>(eig.rank());
  const ResolvedLatent resolved = resolve_latent(latent, eig.eigenvalues, static_cast<int>(n), rank,
                                                 Errc::LatentExceedsRank);

  const double nn = static_cast<double>(n);
  Eigen::MatrixXd a(n, resolved.q);
  for (int p = 0; p < resolved.q; ++p) {
    const double scale_p = std::max(1.0 / nn - resolved.sigma2 / eig.eigenvalues(p), 0.0);
    a.col(p) = std::sqrt(scale_p) * eig.eigenvectors.col(p);
  }
  return DualModel{std::move(a),
                   resolved.sigma2,
                   resolved.q,
                   std::move(eig.eigenvalues),
                   std::move(eig.eigenvectors),
                   eig.clamp_floor,
                   kc,
                   spec,
                   ts};
}

DualModel fit_dual(const KernelSpec& spec, const TrainingSet& ts, const LatentSpec& latent) {
  return fit_dual(center_gram(gram(spec, ts)), latent, spec, ts);
}

KernelSample observe(const DualModel& m, const Eigen::Ref<const Eigen::VectorXd>& x) {
  return KernelSample{centered_kernel_vector(m.spec, m.ts, gram(m.spec, m.ts), x), Observed{x}};
}

Eigen::VectorXd dual_latent_map(const DualModel& m, const KernelSample& k) {
  require_length(m, k.kc_vec.size(), "kernel vector");
  require_finite(k.kc_vec, "kernel vector");
  require_full_latent_rank(m);
  return latent_precision(m).ldlt().solve(m.a.transpose() * k.kc_vec);
}

Eigen::VectorXd dual_latent_map_closed_form(const DualModel& m, const KernelSample& k) {
  require_length(m, k.kc_vec.size(), "kernel vector");
  require_full_latent_rank(m);
  const Eigen::VectorXd projected = m.a.transpose() * k.kc_vec;
  return static_cast<double>(m.n()) *
         (projected.array() / m.eigenvalues.head(m.q).array()).matrix();
}

KernelSample dual_reconstruct(const DualModel& m, const Eigen::Ref<const Eigen::VectorXd>& h) {
  if (h.size() != m.q) {
    throw Error(Errc::DimensionMismatch, "latent code has length " + std::to_string(h.size()) +
                                             ", model has q=" + std::to_string(m.q));
  }
  return KernelSample{m.kc.matrix() * (m.a * h), Reconstructed{}};
}

Eigen::MatrixXd build_sampler(const DualModel& m) {
  const Eigen::Index n = m.n();
  const double sigma = std::sqrt(m.sigma2);
  Eigen::VectorXd d(n);
  for (Eigen::Index p = 0; p < n; ++p) {
    d(p) = p < m.q ? m.eigenvalues(p) / std::sqrt(static_cast<double>(n))
                   : sigma * std::sqrt(m.eigenvalues(p));
  }
  const Eigen::MatrixXd b = m.e * d.asDiagonal() * m.e.transpose();
  return 0.5 * (b + b.transpose());
}

Eigen::MatrixXd dual_sample_from(const DualModel& m, const Eigen::MatrixXd& u) {
  require_length(m, u.rows(), "standard-normal draw");
  return build_sampler(m) * u;
}

std::vector<KernelSample> dual_sample(const DualModel& m, std::uint64_t seed, Eigen::Index count) {
  if (count < 0) throw Error(Errc::InvalidArgument, "sample count must be non-negative");
  const Eigen::MatrixXd b = build_sampler(m);
  std::vector<KernelSample> out;
  out.reserve(static_cast<std::size_t>(count));
  for (Eigen::Index i = 0; i < count; ++i) {
    Rng rng = substream(seed, static_cast<std::uint64_t>(i));
    const Eigen::MatrixXd u = standard_normal(rng, m.n(), 1);
    out.push_back(KernelSample{b * u.col(0), Generated{seed, static_cast<std::uint64_t>(i)}});
  }
  return out;
}

double explained_variance(const DualModel& m) {
  const double total = m.eigenvalues.sum();
  if (!(total > 0.0)) throw Error(Errc::ZeroSpectrum, "all eigenvalues are zero");
  return m.eigenvalues.head(m.q).sum() / total;
}

GaussianSpec dual_latent_posterior(const DualModel& m, const KernelSample& k) {
  require_length(m, k.kc_vec.size(), "kernel vector");
  if (!(m.sigma2 > 0.0)) {
    throw Error(Errc::SigmaZero, "posterior is degenerate at sigma2 = 0; use dual_latent_map");
  }
  const Eigen::LDLT<Eigen::MatrixXd> ldlt(latent_precision(m));
  Eigen::VectorXd mean = ldlt.solve(m.a.transpose() * k.kc_vec);
  const Eigen::MatrixXd cov = m.sigma2 * ldlt.solve(Eigen::MatrixXd::Identity(m.q, m.q));
  return GaussianSpec::from_covariance(std::move(mean), 0.5 * (cov + cov.transpose()));
}

GaussianSpec dual_conditional_kernel(const DualModel& m, const Eigen::Ref<const Eigen::VectorXd>& h) {
  KernelSample mean = dual_reconstruct(m, h);
  const EigenDecomposition spectrum{m.eigenvalues, m.e, m.clamp_floor, 0.0};
  Eigen::MatrixXd factor = std::sqrt(m.sigma2) * psd_sqrt_factor(spectrum);
  return GaussianSpec{std::move(mean.kc_vec), std::move(factor)};
}

double marginal_kernel_logpdf(const DualModel& m, const KernelSample& k) {
  require_length(m, k.kc_vec.size(), "kernel vector");
  const Eigen::Index rank = (m.eigenvalues.array() > 0.0).count();
  const double nn = static_cast<double>(m.n());
  double log_det = 0.0;
  double quad = 0.0;
  for (Eigen::Index p = 0; p < rank; ++p) {
    const double lambda = m.eigenvalues(p);
    const double var = p < m.q ? lambda * lambda / nn : m.sigma2 * lambda;
    if (!(var > 0.0)) {
      throw Error(Errc::SigmaZero, "marginal kernel law is degenerate on the range of K_c");
    }
    const double c = m.e.col(p).dot(k.kc_vec);
    log_det += std::log(var);
    quad += c * c / var;
  }
  return -0.5 * (static_cast<double>(rank) * std::log(2.0 * std::numbers::pi) + log_det + quad);
}

}  // namespace kppca
