#include "kppca/latent.hpp"

#include <cmath>
#include <string>

namespace kppca {

Sigma2Estimate sigma2_ml(const Eigen::Ref<const Eigen::VectorXd>& eigenvalues, int q, int n) {
  if (n < 1 || q < 0 || q > n) {
    throw Error(Errc::LatentTooLarge,
                "sigma2_ml needs 0 <= q <= N (q=" + std::to_string(q) + ", N=" + std::to_string(n) + ")");
  }
  if (q == n) return {0.0, true};
  double discarded = 0.0;
  for (Eigen::Index p = q; p < eigenvalues.size() && p < n; ++p) discarded += eigenvalues(p);
  return {discarded / (static_cast<double>(n) * static_cast<double>(n - q)), false};
}

ResolvedLatent resolve_latent(const LatentSpec& latent,
                              const Eigen::Ref<const Eigen::VectorXd>& eigenvalues, int n,
                              int max_q, Errc too_large) {
  const auto lambda = [&](int p) {  // 1-based, zero past the stored spectrum
    return p - 1 < eigenvalues.size() ? eigenvalues(p - 1) : 0.0;
  };
  const double nn = static_cast<double>(n);

  if (latent.sigma2()) {
    const double s2 = *latent.sigma2();
    if (!(s2 >= 0.0) || !std::isfinite(s2)) {
      throw Error(Errc::InvalidArgument, "sigma2 must be a finite non-negative number");
    }
  }

  if (latent.q()) {
    const int q = *latent.q();
    if (q < 1 || q > max_q) {
      throw Error(too_large, "latent dimension q=" + std::to_string(q) + " outside [1, " +
                                 std::to_string(max_q) + "]");
    }
    if (!latent.sigma2()) return {q, sigma2_ml(eigenvalues, q, n).value};
    const double s2 = *latent.sigma2();
    if (s2 > lambda(q) / nn + 1e-12) {
      throw Error(Errc::SigmaTooLarge, "sigma2 exceeds lambda_q / N for q=" + std::to_string(q));
    }
    return {q, s2};
  }

  const double s2 = *latent.sigma2();
  if (s2 > lambda(1) / nn) {
    throw Error(Errc::SigmaTooLarge, "sigma2 exceeds lambda_1 / N; no latent dimension fits");
  }
  int q = 0;
  for (int p = 1; p <= max_q; ++p) {
    if (lambda(p) / nn >= s2) q = p;
  }
  if (q == 0) throw Error(too_large, "no admissible latent dimension");
  return {q, s2};
}

}  // namespace kppca
