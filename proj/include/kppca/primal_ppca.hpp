#pragma once

#include <Eigen/Dense>

#include "kppca/gaussian.hpp"
#include "kppca/latent.hpp"
#include "kppca/random.hpp"

namespace kppca {

/// Probabilistic PCA over explicit d-dimensional features.
///
/// The covariance convention is the unnormalized C = X_c X_c^T; the 1/N factor
/// appears only in the loading scale sqrt(lambda_p / N - sigma^2). The latent
/// basis is the canonical one, so column p of `w` is along eigenvector v_p.
struct PrimalModel {
  Eigen::VectorXd mu;           // d, feature mean
  Eigen::MatrixXd w;            // d x q loadings
  double sigma2 = 0.0;          // isotropic noise variance
  int q = 0;
  Eigen::VectorXd eigenvalues;  // N, descending spectrum of C (zero padded)
  Eigen::MatrixXd v;            // d x q leading eigenvectors of C
  int n = 0;                    // number of training samples

  Eigen::Index dim() const noexcept { return mu.size(); }
};

/// Closed-form maximum-likelihood fit on a d x N data matrix (samples as columns).
PrimalModel fit_primal(const Eigen::MatrixXd& x, const LatentSpec& latent);

/// Posterior h | phi. Requires sigma2 > 0 (SigmaZero otherwise).
GaussianSpec latent_posterior(const PrimalModel& m, const Eigen::Ref<const Eigen::VectorXd>& phi);

/// MAP latent code (w^T w + sigma^2 I)^{-1} w^T (phi - mu). At sigma2 == 0 this
/// uses the pseudo-inverse of w with singular values below 1e-10 * s_1 dropped.
Eigen::VectorXd latent_map(const PrimalModel& m, const Eigen::Ref<const Eigen::VectorXd>& phi);

/// w h + mu.
Eigen::VectorXd feature_reconstruct(const PrimalModel& m, const Eigen::Ref<const Eigen::VectorXd>& h);

/// Sum over the columns of x of log N(x_i; mu, w w^T + sigma^2 I), evaluated from
/// the singular values of w rather than by forming and inverting the covariance.
double marginal_loglik(const PrimalModel& m, const Eigen::MatrixXd& x);

/// `count` draws of mu + w z + sigma zeta, one per column. For each column the
/// generator yields q latent normals, then d noise normals.
Eigen::MatrixXd sample_feature(const PrimalModel& m, Rng& rng, Eigen::Index count);

}  // namespace kppca
