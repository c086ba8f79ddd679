#include <gtest/gtest.h>

#include <cmath>

#include "adet/error.hpp"
#include "adet/scenario.hpp"
#include "adet/statistics.hpp"
#include "oracles.hpp"

using namespace adet;

TEST(DetectorStatistic, DirectFormulas) {
  const SufficientPair pr{1.0, 0.5};
  EXPECT_DOUBLE_EQ(detector_statistic(pr, DetectorSpec::glrt()), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(detector_statistic(pr, DetectorSpec::two_step_glrt()), 0.5);
  EXPECT_DOUBLE_EQ(detector_statistic(pr, DetectorSpec::abort()), 1.0);
  EXPECT_DOUBLE_EQ(detector_statistic(pr, DetectorSpec::wabort()), 8.0 / 9.0);
  EXPECT_DOUBLE_EQ(detector_statistic(pr, DetectorSpec::aed()), 1.0);
  EXPECT_DOUBLE_EQ(detector_statistic(pr, DetectorSpec::tunable(0.5)), 2.0 / std::sqrt(1.5));
}

TEST(LossFactor, Values) {
  EXPECT_EQ(loss_factor({0.0, 0.0}), 1.0);
  EXPECT_DOUBLE_EQ(loss_factor({1.0, 0.5}), 2.0 / 3.0);
  EXPECT_EQ(loss_factor({2.5, 2.5}), 1.0);
}

TEST(DetectorSpec, LabelsAndParsing) {
  EXPECT_EQ(DetectorSpec::glrt().label(), "GLRT-I");
  EXPECT_EQ(DetectorSpec::tunable(0.8).label(), "T-W-ABORT-I(0.8)");
  EXPECT_EQ(DetectorSpec::parse("tw(2.5)"), DetectorSpec::tunable(2.5));
  EXPECT_EQ(DetectorSpec::parse("T-W-ABORT-I(0.25)"), DetectorSpec::tunable(0.25));
  EXPECT_EQ(DetectorSpec::parse("w-abort-i"), DetectorSpec::wabort());
  EXPECT_EQ(DetectorSpec::parse("2S-GLRT-I"), DetectorSpec::two_step_glrt());
  EXPECT_EQ(DetectorSpec::parse("aed"), DetectorSpec::aed());
  for (const auto& d : {DetectorSpec::glrt(), DetectorSpec::abort(), DetectorSpec::tunable(1.75)})
    EXPECT_EQ(DetectorSpec::parse(d.label()), d);
  EXPECT_THROW(DetectorSpec::parse("AMF"), Error);
  EXPECT_THROW(DetectorSpec::parse("TW(x)"), Error);
  EXPECT_THROW(DetectorSpec::tunable(-1.0), Error);
  EXPECT_FALSE(DetectorSpec::two_step_glrt().has_analytic());
  EXPECT_TRUE(DetectorSpec::aed().has_analytic());
}

namespace {

struct Random {
  CVector x;
  CMatrix training;
  CMatrix h;
  CMatrix j;
};

Random random_batch(std::uint64_t seed, int n = 8, int l = 16, int p = 2, int q = 2) {
  Rng rng = make_rng(seed);
  return {standard_complex_normal(n, rng), standard_complex_normal(n, l, rng), standard_complex_normal(n, p, rng),
          standard_complex_normal(n, q, rng)};
}

}  // namespace

TEST(SufficientPair, MatchesHermitianSquareRootPath) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto b = random_batch(seed);
    const auto a = sufficient_pair(b.x, b.training, b.h, b.j);
    const auto o = oracle::sufficient_pair_sqrt(b.x, b.training, b.h, b.j);
    EXPECT_NEAR(a.t_j, o.t_j, 1e-10 * std::max(1.0, o.t_j));
    EXPECT_NEAR(a.t_h, o.t_h, 1e-10 * std::max(1.0, o.t_h));
    EXPECT_GE(a.t_h, 0.0);
    EXPECT_LE(a.t_h, a.t_j * (1 + 1e-12));
  }
}

TEST(SufficientPair, NoInterference) {
  const auto b = random_batch(3, 6, 12, 2, 0);
  const CMatrix s = b.training * b.training.adjoint();
  const auto pr = sufficient_pair(b.x, b.training, b.h, CMatrix(6, 0));
  const double full = (b.x.adjoint() * s.inverse() * b.x)(0, 0).real();
  EXPECT_NEAR(pr.t_j, full, 1e-10 * full);
  const auto o = oracle::sufficient_pair_sqrt(b.x, b.training, b.h, CMatrix(6, 0));
  EXPECT_NEAR(pr.t_h, o.t_h, 1e-10 * std::max(1.0, o.t_h));
}

TEST(SufficientPair, TestVectorInInterferenceSubspace) {
  Rng rng = make_rng(4);
  const int n = 5;
  const CMatrix j = standard_complex_normal(n, 2, rng);
  const CMatrix h = standard_complex_normal(n, 1, rng);
  const CVector x = j * standard_complex_normal(2, rng);
  // Training with S = I exactly.
  const CMatrix training = CMatrix::Identity(n, n);
  const auto pr = sufficient_pair(x, training, h, j);
  EXPECT_NEAR(pr.t_j, 0.0, 1e-12 * x.squaredNorm());
  EXPECT_NEAR(pr.t_h, 0.0, 1e-12 * x.squaredNorm());
}

TEST(SufficientPair, SingularTrainingThrows) {
  const auto b = random_batch(5);
  const CMatrix thin = b.training.leftCols(4);
  EXPECT_THROW(sufficient_pair(b.x, thin, b.h, b.j), Error);
  EXPECT_THROW(sufficient_pair(b.x, b.training.topRows(7), b.h, b.j), Error);
}

TEST(DetectorIdentities, HoldOnRandomPairs) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto b = random_batch(seed + 1000);
    const auto pr = sufficient_pair(b.x, b.training, b.h, b.j);
    const double glrt = detector_statistic(pr, DetectorSpec::glrt());
    const double beta = loss_factor(pr);
    EXPECT_GT(beta, 0.0);
    EXPECT_LE(beta, 1.0);
    EXPECT_NEAR(detector_statistic(pr, DetectorSpec::abort()), glrt + beta, 1e-12 * (1 + glrt));
    EXPECT_NEAR(detector_statistic(pr, DetectorSpec::wabort()), (1 + glrt) * beta, 1e-12 * (1 + glrt));
    EXPECT_EQ(detector_statistic(pr, DetectorSpec::tunable(2.0)), detector_statistic(pr, DetectorSpec::wabort()));
    EXPECT_NEAR(detector_statistic(pr, DetectorSpec::tunable(1.0)), 1 + glrt, 1e-12 * (1 + glrt));
    EXPECT_EQ(detector_statistic(pr, DetectorSpec::tunable(0.0)), 1 + detector_statistic(pr, DetectorSpec::aed()));
  }
}

TEST(DetectorStatistic, ScaleInvariant) {
  const Complex c(1.7, -0.4);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto b = random_batch(seed + 50);
    const auto a = sufficient_pair(b.x, b.training, b.h, b.j);
    const auto s = sufficient_pair(c * b.x, c * b.training, b.h, b.j);
    for (const auto& d : {DetectorSpec::glrt(), DetectorSpec::two_step_glrt(), DetectorSpec::abort(),
                          DetectorSpec::wabort(), DetectorSpec::tunable(0.8), DetectorSpec::aed()}) {
      const double u = detector_statistic(a, d);
      EXPECT_NEAR(detector_statistic(s, d), u, 1e-10 * std::max(1.0, u)) << d.label();
    }
  }
}

TEST(DetectorStatistic, InvariantToSubspaceBasis) {
  Rng rng = make_rng(77);
  const auto b = random_batch(77);
  const CMatrix mix_h = standard_complex_normal(2, 2, rng);
  const CMatrix mix_j = standard_complex_normal(2, 2, rng);
  const auto a = sufficient_pair(b.x, b.training, b.h, b.j);
  const auto m = sufficient_pair(b.x, b.training, b.h * mix_h, b.j * mix_j);
  EXPECT_NEAR(a.t_j, m.t_j, 1e-10 * a.t_j);
  EXPECT_NEAR(a.t_h, m.t_h, 1e-10 * std::max(1.0, a.t_h));
}
