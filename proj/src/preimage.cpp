#include "kppca/preimage.hpp"

#include <cmath>
#include <string>

#include "kppca/errors.hpp"

namespace kppca {

Eigen::VectorXd kernel_smoother(const TrainingSet& ts, const Eigen::Ref<const Eigen::VectorXd>& k,
                                const PreimageConfig& cfg) {
  if (k.size() != ts.count()) {
    throw Error(Errc::DimensionMismatch, "weight vector has length " + std::to_string(k.size()) +
                                             ", training set has N=" + std::to_string(ts.count()));
  }
  if (!(cfg.epsilon >= 0.0)) throw Error(Errc::InvalidArgument, "epsilon must be non-negative");
  require_finite(k, "kernel weights");
  const Eigen::VectorXd w = cfg.clip_negative ? Eigen::VectorXd(k.cwiseMax(0.0)) : Eigen::VectorXd(k);
  const double normalizer = w.sum() + cfg.epsilon;
  if (std::abs(normalizer) < 1e-12) {
    throw Error(Errc::DegenerateNormalizer,
                "kernel smoother normalizer is " + std::to_string(normalizer));
  }
  return ts.points() * w / normalizer;
}

Eigen::VectorXd uncenter_kernel_vector(const SymMatrix& k, const Eigen::Ref<const Eigen::VectorXd>& kc) {
  if (kc.size() != k.size()) {
    throw Error(Errc::DimensionMismatch, "kernel vector does not match the Gram matrix");
  }
  return kc + k.matrix().rowwise().mean();
}

}  // namespace kppca
