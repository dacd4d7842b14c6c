#pragma once

#include <Eigen/Dense>
#include <optional>

#include "kppca/errors.hpp"

namespace kppca {

/// How the latent dimension and the noise variance are chosen at fit time.
///
/// - `with_q(q)`: sigma^2 takes its maximum-likelihood value for that q.
/// - `with_sigma2(s)`: q is the largest p with lambda_p / N >= s.
/// - `fixed(q, s)`: both given, e.g. s = 0 for the classical KPCA limit.
///   Requires s <= lambda_q / N.
class LatentSpec {
 public:
  static LatentSpec with_q(int q) { return LatentSpec(q, std::nullopt); }
  static LatentSpec with_sigma2(double sigma2) { return LatentSpec(std::nullopt, sigma2); }
  static LatentSpec fixed(int q, double sigma2) { return LatentSpec(q, sigma2); }

  const std::optional<int>& q() const noexcept { return q_; }
  const std::optional<double>& sigma2() const noexcept { return sigma2_; }

 private:
  LatentSpec(std::optional<int> q, std::optional<double> sigma2) : q_(q), sigma2_(sigma2) {}

  std::optional<int> q_;
  std::optional<double> sigma2_;
};

struct Sigma2Estimate {
  double value = 0.0;
  /// Set when q == N: the estimator's normalizer vanishes and 0 is returned.
  bool q_equals_n = false;
};

/// sigma^2_ML = 1 / (N (N - q)) * sum_{p > q} lambda_p.
///
/// `eigenvalues` is the descending spectrum (any length; missing trailing values
/// are zero). Throws LatentTooLarge for q < 0 or q > n.
Sigma2Estimate sigma2_ml(const Eigen::Ref<const Eigen::VectorXd>& eigenvalues, int q, int n);

struct ResolvedLatent {
  int q = 0;
  double sigma2 = 0.0;
};

/// Shared resolution of a LatentSpec against a descending, clamped spectrum.
/// `max_q` is the largest admissible latent dimension (min(d, N) in primal,
/// the numerical rank in dual); `too_large` is the error raised when q exceeds it.
ResolvedLatent resolve_latent(const LatentSpec& latent,
                              const Eigen::Ref<const Eigen::VectorXd>& eigenvalues, int n,
                              int max_q, Errc too_large);

}  // namespace kppca
