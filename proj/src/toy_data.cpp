#include "kppca/toy_data.hpp"

#include <cmath>
#include <numbers>

#include "kppca/errors.hpp"
#include "kppca/random.hpp"

namespace kppca {

Eigen::MatrixXd two_arcs(Eigen::Index count, std::uint64_t seed, double noise) {
  if (count < 1) throw Error(Errc::InvalidArgument, "two_arcs needs count >= 1");
  Rng rng(seed);
  std::uniform_real_distribution<double> angle(0.0, std::numbers::pi);
  std::normal_distribution<double> jitter(0.0, noise);
  Eigen::MatrixXd out(2, count);
  for (Eigen::Index i = 0; i < count; ++i) {
    const double t = angle(rng);
    if (i % 2 == 0) {
      out(0, i) = std::cos(t);
      out(1, i) = std::sin(t);
    } else {
      out(0, i) = 1.0 - std::cos(t);
      out(1, i) = 0.5 - std::sin(t);
    }
    out(0, i) += jitter(rng);
    out(1, i) += jitter(rng);
  }
  return out;
}

}  // namespace kppca
