#include <gtest/gtest.h>

#include <cmath>

#include "kppca/dual_ppca.hpp"
#include "kppca/errors.hpp"
#include "kppca/primal_ppca.hpp"
#include "oracles.hpp"

namespace kppca {
namespace {

using oracle::max_abs;

Errc code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an exception";
  return Errc::InvalidArgument;
}

TrainingSet random_points(std::mt19937_64& rng, Eigen::Index d, Eigen::Index n) {
  return TrainingSet(oracle::random_matrix(rng, d, n));
}

KernelSample sample_of(const Eigen::VectorXd& kc) { return KernelSample{kc, Reconstructed{}}; }

// Sign of each latent axis of `dual` relative to the primal loadings.
Eigen::VectorXd axis_signs(const PrimalModel& primal, const DualModel& dual, const Eigen::MatrixXd& xc) {
  Eigen::VectorXd s(primal.q);
  for (int p = 0; p < primal.q; ++p) s(p) = primal.w.col(p).dot(xc * dual.a.col(p)) >= 0 ? 1.0 : -1.0;
  return s;
}

TEST(FitDual, NoiseFreeLoadingsAreScaledEigenvectors) {
  std::mt19937_64 rng(1);
  const auto m = fit_dual(KernelSpec::rbf(1.0), random_points(rng, 2, 9), LatentSpec::fixed(3, 0.0));
  EXPECT_LE(max_abs(m.a - m.e.leftCols(3) / 3.0), 1e-15);
}

TEST(FitDual, MaximalNoiseZeroesLastColumn) {
  std::mt19937_64 rng(2);
  const auto ts = random_points(rng, 2, 9);
  const auto base = fit_dual(KernelSpec::rbf(1.0), ts, LatentSpec::with_q(1));
  const double s2 = base.eigenvalues(2) / 9.0;
  const auto m = fit_dual(KernelSpec::rbf(1.0), ts, LatentSpec::fixed(3, s2));
  EXPECT_LE(m.a.col(2).norm(), 1e-7);
  EXPECT_GT(m.a.col(1).norm(), 1e-3);
}

TEST(FitDual, LoadingNorms) {
  std::mt19937_64 rng(3);
  const auto m = fit_dual(KernelSpec::rbf(0.8), random_points(rng, 3, 12), LatentSpec::with_q(4));
  for (int p = 0; p < 4; ++p) {
    EXPECT_NEAR(m.a.col(p).squaredNorm(), 1.0 / 12.0 - m.sigma2 / m.eigenvalues(p), 1e-13);
  }
  EXPECT_NEAR(m.sigma2, m.eigenvalues.tail(8).sum() / (12.0 * 8.0), 1e-14);
}

TEST(FitDual, LinearKernelRecoversPrimalLoadings) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::Index d = 2 + trial % 4;
    const Eigen::Index n = d + 2 + trial % 5;
    const int q = 1 + trial % static_cast<int>(d);
    const Eigen::MatrixXd x = oracle::random_matrix(rng, d, n);
    const auto primal = fit_primal(x, LatentSpec::with_q(q));
    const auto dual = fit_dual(KernelSpec::linear(), TrainingSet(x), LatentSpec::with_q(q));
    const Eigen::MatrixXd xc = x.colwise() - primal.mu;
    EXPECT_NEAR(primal.sigma2, dual.sigma2, 1e-12);
    const Eigen::MatrixXd w_from_dual = xc * dual.a;
    for (int p = 0; p < q; ++p) {
      const Eigen::VectorXd aligned = oracle::align_sign(w_from_dual.col(p), primal.w.col(p));
      EXPECT_LE(max_abs(aligned - primal.w.col(p)), 1e-10);
    }
  }
}

TEST(FitDual, LinearKernelMapMatchesPrimalMap) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::Index d = 3;
    const Eigen::Index n = 6 + trial % 5;
    const int q = 1 + trial % 2;
    const Eigen::MatrixXd x = oracle::random_matrix(rng, d, n);
    const auto primal = fit_primal(x, LatentSpec::with_q(q));
    const auto dual = fit_dual(KernelSpec::linear(), TrainingSet(x), LatentSpec::with_q(q));
    const Eigen::VectorXd signs = axis_signs(primal, dual, x.colwise() - primal.mu);
    for (int i = 0; i < 3; ++i) {
      const Eigen::VectorXd phi = 2.0 * oracle::random_matrix(rng, d, 1);
      const Eigen::VectorXd h_dual = dual_latent_map(dual, observe(dual, phi));
      EXPECT_LE(max_abs(signs.cwiseProduct(h_dual) - latent_map(primal, phi)), 1e-9);
    }
  }
}

TEST(FitDual, LinearKernelPosteriorCovarianceMatchesPrimal) {
  std::mt19937_64 rng(6);
  const Eigen::MatrixXd x = oracle::random_matrix(rng, 4, 11);
  const auto primal = fit_primal(x, LatentSpec::with_q(2));
  const auto dual = fit_dual(KernelSpec::linear(), TrainingSet(x), LatentSpec::with_q(2));
  const Eigen::VectorXd phi = oracle::random_matrix(rng, 4, 1);
  const Eigen::MatrixXd primal_cov = latent_posterior(primal, phi).covariance();
  const Eigen::MatrixXd dual_cov = dual_latent_posterior(dual, observe(dual, phi)).covariance();
  EXPECT_LE(max_abs(primal_cov - dual_cov), 1e-10);
  for (int p = 0; p < 2; ++p) EXPECT_NEAR(dual_cov(p, p), 11.0 * dual.sigma2 / dual.eigenvalues(p), 1e-12);
}

TEST(FitDual, ExplicitGramOverloadAgrees) {
  std::mt19937_64 rng(7);
  const auto ts = random_points(rng, 2, 7);
  const auto spec = KernelSpec::rbf(1.3);
  const auto a = fit_dual(spec, ts, LatentSpec::with_q(2));
  const auto b = fit_dual(center_gram(gram(spec, ts)), LatentSpec::with_q(2), spec, ts);
  EXPECT_EQ(a.a, b.a);
  EXPECT_EQ(a.sigma2, b.sigma2);
}

TEST(FitDual, Sigma2DeterminesQ) {
  std::mt19937_64 rng(8);
  const auto ts = random_points(rng, 2, 10);
  const auto base = fit_dual(KernelSpec::rbf(1.0), ts, LatentSpec::with_q(1));
  const double on_fourth = base.eigenvalues(3) / 10.0;
  EXPECT_EQ(fit_dual(KernelSpec::rbf(1.0), ts, LatentSpec::with_sigma2(on_fourth)).q, 4);
  EXPECT_EQ(fit_dual(KernelSpec::rbf(1.0), ts, LatentSpec::with_sigma2(on_fourth * 1.0001)).q, 3);
}

TEST(FitDual, Errors) {
  std::mt19937_64 rng(9);
  const auto ts = random_points(rng, 2, 5);
  const SymMatrix k = gram(KernelSpec::linear(), ts);
  EXPECT_EQ(code_of([&] { fit_dual(SymMatrix(k.matrix() + Eigen::MatrixXd::Ones(5, 5)), LatentSpec::with_q(1),
                                   KernelSpec::linear(), ts); }),
            Errc::NotCentered);
  // linear kernel on 2-d inputs: rank 2
  EXPECT_EQ(code_of([&] { fit_dual(KernelSpec::linear(), ts, LatentSpec::with_q(3)); }),
            Errc::LatentExceedsRank);
  const auto base = fit_dual(KernelSpec::linear(), ts, LatentSpec::with_q(1));
  EXPECT_EQ(code_of([&] {
              fit_dual(KernelSpec::linear(), ts, LatentSpec::fixed(2, base.eigenvalues(1) / 5.0 * 1.01));
            }),
            Errc::SigmaTooLarge);
  EXPECT_EQ(code_of([&] {
              fit_dual(center_gram(SymMatrix(-Eigen::MatrixXd::Identity(5, 5))), LatentSpec::with_q(1),
                       KernelSpec::linear(), ts);
            }),
            Errc::NegativeEigenvalue);
  EXPECT_EQ(code_of([&] {
              fit_dual(center_gram(k), LatentSpec::with_q(1), KernelSpec::linear(), random_points(rng, 2, 4));
            }),
            Errc::DimensionMismatch);
  EXPECT_EQ(code_of([&] { fit_dual(KernelSpec::linear(), ts, LatentSpec::with_sigma2(-1.0)); }),
            Errc::InvalidArgument);
}

TEST(DualMap, ClosedFormMatchesGeneralSolve) {
  std::mt19937_64 rng(10);
  for (int trial = 0; trial < 20; ++trial) {
    const auto m = fit_dual(KernelSpec::rbf(0.5 + 0.1 * trial), random_points(rng, 2, 15),
                            LatentSpec::with_q(1 + trial % 5));
    for (int i = 0; i < 3; ++i) {
      const auto k = observe(m, oracle::random_matrix(rng, 2, 1));
      const Eigen::VectorXd general = dual_latent_map(m, k);
      const Eigen::VectorXd closed = dual_latent_map_closed_form(m, k);
      EXPECT_LE(max_abs(general - closed), 1e-8 * std::max(1.0, closed.norm()));
    }
  }
}

TEST(DualMap, TwoPointHandExample) {
  // Two points only: K_c has a single non-zero eigenvalue.
  Eigen::MatrixXd x(1, 2);
  x << -1.0, 1.0;
  const auto m = fit_dual(KernelSpec::linear(), TrainingSet(x), LatentSpec::fixed(1, 0.0));
  // K_c = [[1,-1],[-1,1]], lambda = 2, eps = (1,-1)/sqrt2 up to sign
  EXPECT_NEAR(m.eigenvalues(0), 2.0, 1e-14);
  const auto k = observe(m, Eigen::VectorXd::Constant(1, 1.0));
  EXPECT_LE(max_abs(k.kc_vec - Eigen::Vector2d(-1.0, 1.0)), 1e-14);
  // h = sqrt(N) lambda^{-1/2} z, z = eps^T k / sqrt(lambda) = sqrt2 / sqrt2 = 1 -> |h| = 1
  EXPECT_NEAR(std::abs(dual_latent_map(m, k)(0)), 1.0, 1e-14);
}

TEST(DualMap, NoiseFreeLimitMatchesKernelPca) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    const auto ts = random_points(rng, 3, 12);
    const int q = 1 + trial % 5;
    const auto m = fit_dual(KernelSpec::rbf(1.5), ts, LatentSpec::fixed(q, 0.0));
    const auto kpca = oracle::classical_kpca(m.kc.matrix(), q);
    for (Eigen::Index i = 0; i < ts.count(); i += 3) {
      const Eigen::VectorXd kc = m.kc.matrix().col(i);
      const Eigen::VectorXd h = dual_latent_map(m, sample_of(kc));
      const Eigen::VectorXd z = oracle::kpca_project(kpca, kc);
      for (int p = 0; p < q; ++p) {
        const double sign = m.e.col(p).dot(kpca.alpha.col(p)) >= 0 ? 1.0 : -1.0;
        EXPECT_NEAR(sign * h(p), std::sqrt(12.0 / kpca.lambda(p)) * z(p), 1e-8 * std::max(1.0, std::abs(h(p))));
      }
      const Eigen::VectorXd recon = dual_reconstruct(m, h).kc_vec;
      EXPECT_LE(max_abs(recon - oracle::kpca_reconstruct(kpca, z)), 1e-8);
      EXPECT_LE(max_abs(recon - m.e.leftCols(q) * (m.e.leftCols(q).transpose() * kc)), 1e-8);
    }
  }
}

TEST(DualMap, FullRankNoiseFreeIsIdentityOnTrainingSet) {
  std::mt19937_64 rng(12);
  const auto ts = random_points(rng, 2, 8);
  const auto probe = fit_dual(KernelSpec::rbf(1.0), ts, LatentSpec::with_q(1));
  const int rank = static_cast<int>((probe.eigenvalues.array() > 0.0).count());
  ASSERT_EQ(rank, 7);
  const auto m = fit_dual(KernelSpec::rbf(1.0), ts, LatentSpec::fixed(rank, 0.0));
  for (Eigen::Index i = 0; i < 8; ++i) {
    const Eigen::VectorXd kc = m.kc.matrix().col(i);
    EXPECT_LE(max_abs(dual_reconstruct(m, dual_latent_map(m, sample_of(kc))).kc_vec - kc), 1e-9);
  }
}

TEST(DualMap, ErrorsOnBadInput) {
  std::mt19937_64 rng(13);
  const auto m = fit_dual(KernelSpec::rbf(1.0), random_points(rng, 2, 6), LatentSpec::with_q(2));
  EXPECT_EQ(code_of([&] { dual_latent_map(m, sample_of(Eigen::VectorXd::Zero(5))); }),
            Errc::DimensionMismatch);
  EXPECT_EQ(code_of([&] { dual_reconstruct(m, Eigen::VectorXd::Zero(3)); }), Errc::DimensionMismatch);
  DualModel broken = m;
  broken.eigenvalues(1) = 0.0;
  EXPECT_EQ(code_of([&] { dual_latent_map(broken, sample_of(Eigen::VectorXd::Zero(6))); }),
            Errc::RankDeficient);
}

TEST(DualPosterior, MeanIsMap) {
  std::mt19937_64 rng(14);
  const auto m = fit_dual(KernelSpec::rbf(0.7), random_points(rng, 2, 10), LatentSpec::with_q(3));
  const auto k = observe(m, oracle::random_matrix(rng, 2, 1));
  const auto post = dual_latent_posterior(m, k);
  EXPECT_LE(max_abs(post.mean - dual_latent_map(m, k)), 1e-12);
  const Eigen::MatrixXd cov = post.covariance();
  for (int p = 0; p < 3; ++p) EXPECT_NEAR(cov(p, p), 10.0 * m.sigma2 / m.eigenvalues(p), 1e-12);
}

TEST(DualPosterior, SigmaZeroRejected) {
  std::mt19937_64 rng(15);
  const auto m = fit_dual(KernelSpec::rbf(1.0), random_points(rng, 2, 6), LatentSpec::fixed(2, 0.0));
  EXPECT_EQ(code_of([&] { dual_latent_posterior(m, sample_of(Eigen::VectorXd::Zero(6))); }), Errc::SigmaZero);
}

TEST(DualConditional, MeanAndCovariance) {
  std::mt19937_64 rng(16);
  const auto m = fit_dual(KernelSpec::rbf(1.0), random_points(rng, 2, 9), LatentSpec::with_q(2));
  const Eigen::VectorXd h = oracle::random_matrix(rng, 2, 1);
  const auto cond = dual_conditional_kernel(m, h);
  EXPECT_LE(max_abs(cond.mean - m.kc.matrix() * m.a * h), 1e-13);
  EXPECT_LE(max_abs(cond.covariance() - m.sigma2 * m.kc.matrix()), 1e-12);
}

TEST(Sampler, CovarianceMatchesDenseOracle) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 10; ++trial) {
    const auto m = fit_dual(KernelSpec::rbf(0.6 + 0.2 * trial), random_points(rng, 2, 10),
                            LatentSpec::with_q(1 + trial % 4));
    const Eigen::MatrixXd b = build_sampler(m);
    const Eigen::MatrixXd kc = m.kc.matrix();
    const Eigen::MatrixXd expected =
        kc * (m.a * m.a.transpose() + m.sigma2 * oracle::pinv(kc, 1e-12)) * kc;
    EXPECT_LE(max_abs(b * b.transpose() - expected), 1e-8 * std::max(1.0, max_abs(expected)));
    EXPECT_EQ(b, b.transpose());
  }
}

TEST(Sampler, RankFollowsCenteredGram) {
  std::mt19937_64 rng(18);
  const auto m = fit_dual(KernelSpec::rbf(1.0), random_points(rng, 2, 9), LatentSpec::with_q(3));
  const auto ref = oracle::jacobi_eig(build_sampler(m));
  const Eigen::Index rank = (ref.values.cwiseAbs().array() > 1e-10 * ref.values.cwiseAbs().maxCoeff()).count();
  EXPECT_EQ(rank, 8);
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(9);
  EXPECT_LE(max_abs(build_sampler(m) * ones), 1e-10);
}

TEST(Sampler, ZeroDrawGivesZeroKernelVector) {
  std::mt19937_64 rng(19);
  const auto m = fit_dual(KernelSpec::rbf(1.0), random_points(rng, 2, 7), LatentSpec::with_q(2));
  EXPECT_EQ(max_abs(dual_sample_from(m, Eigen::MatrixXd::Zero(7, 3))), 0.0);
}

TEST(Sampler, SamplesAreCenteredAndDeterministic) {
  std::mt19937_64 rng(20);
  const auto m = fit_dual(KernelSpec::rbf(1.0), random_points(rng, 2, 7), LatentSpec::with_q(2));
  const auto a = dual_sample(m, 99, 20);
  const auto b = dual_sample(m, 99, 20);
  const auto c = dual_sample(m, 100, 20);
  ASSERT_EQ(a.size(), 20u);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].kc_vec, b[i].kc_vec);
    EXPECT_NE(a[i].kc_vec, c[i].kc_vec);
    EXPECT_NEAR(a[i].kc_vec.sum(), 0.0, 1e-10);
    const auto& origin = std::get<Generated>(a[i].origin);
    EXPECT_EQ(origin.seed, 99u);
    EXPECT_EQ(origin.index, i);
  }
  // a prefix of a longer run is the shorter run
  const auto longer = dual_sample(m, 99, 25);
  EXPECT_EQ(longer[19].kc_vec, a[19].kc_vec);
  EXPECT_TRUE(dual_sample(m, 99, 0).empty());
}

TEST(Sampler, EmpiricalCovarianceConverges) {
  std::mt19937_64 rng(21);
  const auto m = fit_dual(KernelSpec::rbf(1.0), random_points(rng, 2, 8), LatentSpec::with_q(2));
  const auto samples = dual_sample(m, 7, 200000);
  Eigen::MatrixXd s(8, static_cast<Eigen::Index>(samples.size()));
  for (std::size_t i = 0; i < samples.size(); ++i) s.col(static_cast<Eigen::Index>(i)) = samples[i].kc_vec;
  const Eigen::MatrixXd empirical = s * s.transpose() / static_cast<double>(s.cols());
  const Eigen::MatrixXd b = build_sampler(m);
  const Eigen::MatrixXd expected = b * b.transpose();
  EXPECT_LE((empirical - expected).norm() / expected.norm(), 0.05);
}

TEST(MarginalKernelLogpdf, MatchesDenseOracleOnRange) {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 10; ++trial) {
    const auto m = fit_dual(KernelSpec::rbf(1.0 + 0.1 * trial), random_points(rng, 2, 8),
                            LatentSpec::with_q(1 + trial % 3));
    const auto ref = oracle::jacobi_eig(m.kc.matrix());
    Eigen::Index rank = 0;
    while (rank < 8 && ref.values(rank) > 1e-10 * ref.values(0)) ++rank;
    const Eigen::MatrixXd basis = ref.vectors.leftCols(rank);
    const Eigen::MatrixXd b = build_sampler(m);
    const Eigen::MatrixXd cov = basis.transpose() * b * b.transpose() * basis;
    const auto k = observe(m, oracle::random_matrix(rng, 2, 1));
    const double expected =
        oracle::dense_mvn_logpdf(basis.transpose() * k.kc_vec, Eigen::VectorXd::Zero(rank), cov);
    EXPECT_NEAR(marginal_kernel_logpdf(m, k), expected, 1e-6 * std::max(1.0, std::abs(expected)));
  }
}

TEST(ExplainedVariance, HandComputed) {
  Eigen::MatrixXd x(2, 4);
  x << -1, 1, 0, 0,
        0, 0, -2, 2;
  // K_c eigenvalues 8 and 2
  const auto m = fit_dual(KernelSpec::linear(), TrainingSet(x), LatentSpec::with_q(1));
  EXPECT_NEAR(explained_variance(m), 0.8, 1e-14);
  EXPECT_NEAR(m.sigma2, 2.0 / (4.0 * 3.0), 1e-14);
  EXPECT_NEAR(explained_variance(fit_dual(KernelSpec::linear(), TrainingSet(x), LatentSpec::with_q(2))), 1.0,
              1e-14);
}

TEST(ExplainedVariance, MonotoneInQ) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    const auto ts = random_points(rng, 3, 10);
    double previous = 0.0;
    for (int q = 1; q <= 9; ++q) {
      const double ev = explained_variance(fit_dual(KernelSpec::rbf(1.0), ts, LatentSpec::with_q(q)));
      EXPECT_GE(ev, previous - 1e-15);
      EXPECT_LE(ev, 1.0 + 1e-15);
      previous = ev;
    }
    EXPECT_NEAR(previous, 1.0, 1e-12);
  }
}

TEST(ExplainedVariance, ZeroSpectrum) {
  std::mt19937_64 rng(24);
  DualModel m = fit_dual(KernelSpec::rbf(1.0), random_points(rng, 2, 4), LatentSpec::with_q(1));
  m.eigenvalues.setZero();
  EXPECT_EQ(code_of([&] { explained_variance(m); }), Errc::ZeroSpectrum);
}

TEST(ExplainedVariance, SpectrumArithmetic) {
  std::mt19937_64 rng(25);
  DualModel m = fit_dual(KernelSpec::rbf(1.0), random_points(rng, 2, 4), LatentSpec::with_q(2));
  m.eigenvalues = Eigen::Vector4d(4, 2, 1, 1);
  EXPECT_EQ(explained_variance(m), 0.75);
}

TEST(ExplainedVariance, RankOneGram) {
  Eigen::MatrixXd x(1, 3);
  x << -1.0, 0.5, 2.0;
  EXPECT_NEAR(explained_variance(fit_dual(KernelSpec::linear(), TrainingSet(x), LatentSpec::with_q(1))), 1.0, 1e-15);
}

TEST(DualMap, ZeroInputsGiveZeroOutputs) {
  std::mt19937_64 rng(26);
  const auto m = fit_dual(KernelSpec::rbf(1.0), random_points(rng, 2, 6), LatentSpec::with_q(2));
  EXPECT_EQ(dual_latent_map(m, sample_of(Eigen::VectorXd::Zero(6))), Eigen::VectorXd::Zero(2));
  EXPECT_EQ(dual_reconstruct(m, Eigen::VectorXd::Zero(2)).kc_vec, Eigen::VectorXd::Zero(6));
}

TEST(DualReconstruct, MatchesEntrywiseProduct) {
  std::mt19937_64 rng(27);
  const auto m = fit_dual(KernelSpec::rbf(1.0), random_points(rng, 2, 5), LatentSpec::with_q(3));
  const Eigen::VectorXd h = oracle::random_matrix(rng, 3, 1);
  const Eigen::VectorXd out = dual_reconstruct(m, h).kc_vec;
  for (Eigen::Index i = 0; i < 5; ++i) {
    double acc = 0.0;
    for (Eigen::Index j = 0; j < 5; ++j) {
      for (int p = 0; p < 3; ++p) acc += m.kc(i, j) * m.a(j, p) * h(p);
    }
    EXPECT_NEAR(out(i), acc, 1e-14);
  }
}

TEST(Sampler, NoiseFreeFullLatentIsFirstBlockOnly) {
  std::mt19937_64 rng(28);
  const auto ts = random_points(rng, 2, 6);
  const auto m = fit_dual(KernelSpec::rbf(1.0), ts, LatentSpec::fixed(5, 0.0));
  const Eigen::MatrixXd expected = m.e * m.eigenvalues.asDiagonal() * m.e.transpose() / std::sqrt(6.0);
  EXPECT_LE(max_abs(build_sampler(m) - expected), 1e-13);
  // K_c^2 / sqrt(N) in matrix form
  EXPECT_LE(max_abs(build_sampler(m) * build_sampler(m) - m.kc.matrix() * m.kc.matrix() / 6.0), 1e-12);
}

}  // namespace
}  // namespace kppca
