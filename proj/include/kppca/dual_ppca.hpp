#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <variant>
#include <vector>

#include "kppca/gaussian.hpp"
#include "kppca/kernels.hpp"
#include "kppca/latent.hpp"
#include "kppca/spectral.hpp"

namespace kppca {

/// Kernel-side probabilistic PCA.
///
/// Everything lives in the N-dimensional space of centered kernel vectors. The
/// model keeps the full eigendecomposition of K_c (the sampler needs every
/// eigenpair) and the training inputs (out-of-sample kernels, preimages).
struct DualModel {
  Eigen::MatrixXd a;            // N x q, column p = sqrt(1/N - sigma^2 / lambda_p) eps_p
  double sigma2 = 0.0;
  int q = 0;
  Eigen::VectorXd eigenvalues;  // N, descending, clamped
  Eigen::MatrixXd e;            // N x N eigenvectors of K_c
  double clamp_floor = 0.0;
  SymMatrix kc;                 // centered Gram matrix
  KernelSpec spec;
  TrainingSet ts;

  Eigen::Index n() const noexcept { return eigenvalues.size(); }
};

struct Observed {
  Eigen::VectorXd x;
};
struct Generated {
  std::uint64_t seed = 0;
  std::uint64_t index = 0;
};
struct Reconstructed {};

/// A centered kernel vector k_c together with where it came from.
struct KernelSample {
  Eigen::VectorXd kc_vec;
  std::variant<Observed, Generated, Reconstructed> origin;
};

/// Fits the dual model on a centered Gram matrix. Throws NotCentered when a row
/// sum exceeds 1e-6 * max(1, |K_c|_max), LatentExceedsRank when q exceeds the
/// numerical rank of K_c, SigmaTooLarge when no q accommodates sigma^2.
DualModel fit_dual(const SymMatrix& kc, const LatentSpec& latent, const KernelSpec& spec,
                   const TrainingSet& ts);

/// Builds K from the training set, centers it, and fits.
DualModel fit_dual(const KernelSpec& spec, const TrainingSet& ts, const LatentSpec& latent);

/// Centered kernel representation of an input point.
KernelSample observe(const DualModel& m, const Eigen::Ref<const Eigen::VectorXd>& x);

/// h = (A^T K_c A + sigma^2 I)^{-1} A^T k_c.
Eigen::VectorXd dual_latent_map(const DualModel& m, const KernelSample& k);

/// h = N Lambda_q^{-1} A^T k_c, the simplification valid for ML-trained loadings.
Eigen::VectorXd dual_latent_map_closed_form(const DualModel& m, const KernelSample& k);

/// (k_c)_MAP = K_c A h.
KernelSample dual_reconstruct(const DualModel& m, const Eigen::Ref<const Eigen::VectorXd>& h);

/// Symmetric square root B of the marginal kernel covariance:
///   B = E diag(d) E^T, d_p = lambda_p / sqrt(N) for p <= q, sigma sqrt(lambda_p) otherwise.
Eigen::MatrixXd build_sampler(const DualModel& m);

/// `count` samples B u with u ~ N(0, I_N). Sample i draws from substream(seed, i).
std::vector<KernelSample> dual_sample(const DualModel& m, std::uint64_t seed, Eigen::Index count);

/// Maps caller-supplied standard-normal draws (N x count) through B.
Eigen::MatrixXd dual_sample_from(const DualModel& m, const Eigen::MatrixXd& u);

/// sum_{p<=q} lambda_p / sum_p lambda_p.
double explained_variance(const DualModel& m);

/// Posterior h | k_c: mean as dual_latent_map, covariance sigma^2 (A^T K_c A + sigma^2 I)^{-1}.
GaussianSpec dual_latent_posterior(const DualModel& m, const KernelSample& k);

/// k_c | h ~ N(K_c A h, sigma^2 K_c); the factor is sigma K_c^{1/2}.
GaussianSpec dual_conditional_kernel(const DualModel& m, const Eigen::Ref<const Eigen::VectorXd>& h);

/// Log-density of k_c under the marginal N(0, B B^T), restricted to the range
/// of K_c (pseudo-determinant). Requires sigma2 > 0 unless q equals the rank.
double marginal_kernel_logpdf(const DualModel& m, const KernelSample& k);

}  // namespace kppca
