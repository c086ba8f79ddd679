#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numeric>

#include "adet/analytic.hpp"
#include "adet/error.hpp"
#include "adet/montecarlo.hpp"

using namespace adet;

namespace {

const Scenario& default_scenario() {
  static const Scenario sc = make_scenario(ScenarioConfig{});
  return sc;
}

TrialPlan small_plan() {
  TrialPlan plan;
  plan.scenario = default_scenario();
  plan.detectors = {DetectorSpec::glrt(), DetectorSpec::two_step_glrt(), DetectorSpec::abort(),
                    DetectorSpec::tunable(2.5)};
  plan.trials_threshold = 10000;
  plan.trials_pd = 1000;
  plan.pfa_target = 1e-2;
  plan.base_seed = 17;
  return plan;
}

}  // namespace

TEST(EmpiricalThreshold, RankConvention) {
  std::vector<double> v(1000);
  std::iota(v.begin(), v.end(), 1.0);
  // rank ceil(1000 * 0.99) = 990 -> value 990; exactly 10 values exceed it.
  EXPECT_EQ(empirical_threshold(v, 1e-2), 990.0);
  EXPECT_DOUBLE_EQ(exceedance_rate(v, 990.0), 0.01);
  std::vector<double> w(1001);
  std::iota(w.begin(), w.end(), 1.0);
  // ceil(1001 * 0.99) = ceil(990.99) = 991.
  EXPECT_EQ(empirical_threshold(w, 1e-2), 991.0);
}

TEST(EmpiricalThreshold, InsufficientTrials) {
  std::vector<double> v(99, 1.0);
  try {
    empirical_threshold(v, 1e-2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InsufficientTrials);
  }
  EXPECT_THROW(empirical_threshold(v, 0.0), Error);
}

TEST(BinomialSe, Formula) {
  EXPECT_DOUBLE_EQ(binomial_se(0.5, 100), 0.05);
  EXPECT_EQ(binomial_se(0.0, 100), 0.0);
  EXPECT_EQ(binomial_se(0.3, 0), 0.0);
}

TEST(TrialPlan, Validation) {
  TrialPlan plan = small_plan();
  plan.trials_threshold = 999;
  EXPECT_THROW(plan.validate(), Error);
  plan.trials_threshold = 1000;
  EXPECT_NO_THROW(plan.validate());
  plan.pfa_target = 1.0;
  EXPECT_THROW(plan.validate(), Error);
}

TEST(SimulatePairs, WorkerCountDoesNotChangeResults) {
  const auto a = simulate_pairs(default_scenario(), Hypothesis::H1, 503, 9, kStreamDetection, 1);
  const auto b = simulate_pairs(default_scenario(), Hypothesis::H1, 503, 9, kStreamDetection, 8);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].t_j, b[i].t_j);
    EXPECT_EQ(a[i].t_h, b[i].t_h);
  }
}

TEST(RunPlan, DeterministicAcrossWorkers) {
  TrialPlan plan = small_plan();
  const auto one = run_plan(plan);
  plan.workers = 8;
  const auto eight = run_plan(plan);
  ASSERT_EQ(one.size(), plan.detectors.size());
  for (std::size_t k = 0; k < one.size(); ++k) {
    EXPECT_EQ(one[k].detector, plan.detectors[k]);
    EXPECT_EQ(one[k].threshold, eight[k].threshold);
    EXPECT_EQ(one[k].pd_hat, eight[k].pd_hat);
    EXPECT_EQ(one[k].pfa_hat, eight[k].pfa_hat);
    EXPECT_LE(one[k].pfa_hat, plan.pfa_target);
    EXPECT_DOUBLE_EQ(one[k].pd_se, binomial_se(one[k].pd_hat, plan.trials_pd));
  }
}

TEST(RunPlan, EmptyDetectorList) {
  TrialPlan plan = small_plan();
  plan.detectors.clear();
  EXPECT_TRUE(run_plan(plan).empty());
}

TEST(RunPlan, AgreesWithCalibrateAndEstimate) {
  const TrialPlan plan = small_plan();
  const auto res = run_plan(plan);
  for (std::size_t k = 0; k < res.size(); ++k) {
    const double thr = calibrate_threshold(plan, plan.detectors[k]);
    EXPECT_EQ(thr, res[k].threshold);
    EXPECT_EQ(estimate_pd(plan, plan.detectors[k], thr).pd_hat, res[k].pd_hat);
  }
}

TEST(CalibrateThreshold, SameSeedSameThreshold) {
  const TrialPlan plan = small_plan();
  EXPECT_EQ(calibrate_threshold(plan, DetectorSpec::glrt()), calibrate_threshold(plan, DetectorSpec::glrt()));
}

TEST(CalibrateThreshold, AnalyticPfaOfEmpiricalThreshold) {
  TrialPlan plan = small_plan();
  plan.trials_threshold = 100000;
  plan.pfa_target = 1e-3;
  const double thr = calibrate_threshold(plan, DetectorSpec::glrt());
  const AnalyticParams central = esnr_params(plan.scenario).central();
  const double p = pfa(DetectorSpec::glrt(), thr, central);
  EXPECT_LT(std::abs(p - 1e-3), 3.0 * binomial_se(1e-3, plan.trials_threshold)) << p;
}

TEST(CalibrateThreshold, KappaOneAndGlrtMakeSameDecisions) {
  const TrialPlan plan = small_plan();
  const double t_glrt = calibrate_threshold(plan, DetectorSpec::glrt());
  const double t_k1 = calibrate_threshold(plan, DetectorSpec::tunable(1.0));
  EXPECT_NEAR(t_k1, 1.0 + t_glrt, 1e-12);
  const auto pairs = simulate_pairs(plan.scenario, Hypothesis::H1, 2000, 3, kStreamDetection);
  for (const auto& p : pairs)
    EXPECT_EQ(detector_statistic(p, DetectorSpec::glrt()) > t_glrt,
              detector_statistic(p, DetectorSpec::tunable(1.0)) > t_k1);
}

TEST(EstimatePd, NoSignalGivesPfa) {
  TrialPlan plan = small_plan();
  plan.scenario = default_scenario().with_snr(-std::numeric_limits<double>::infinity());
  plan.trials_pd = 20000;
  plan.base_seed = 5;
  const double thr = invert_threshold(DetectorSpec::glrt(), plan.pfa_target, esnr_params(plan.scenario).central());
  const auto r = estimate_pd(plan, DetectorSpec::glrt(), thr);
  EXPECT_LT(std::abs(r.pd_hat - plan.pfa_target), 3.0 * binomial_se(plan.pfa_target, plan.trials_pd));
}

TEST(EstimatePd, ZeroThresholdOnPositiveStatistic) {
  const TrialPlan plan = small_plan();
  const auto r = estimate_pd(plan, DetectorSpec::aed(), 0.0);
  EXPECT_EQ(r.pd_hat, 1.0);
  EXPECT_EQ(r.pd_se, 0.0);
  EXPECT_THROW(estimate_pd(plan, DetectorSpec::aed(), std::nan("")), Error);
}

TEST(EstimatePd, InterferencePowerDoesNotMatter) {
  const TrialPlan plan = small_plan();
  const double thr = 0.6;
  std::vector<double> pds;
  for (double inr : {0.0, 10.0, 30.0}) {
    TrialPlan p = plan;
    p.scenario = default_scenario().with_inr(inr);
    pds.push_back(estimate_pd(p, DetectorSpec::glrt(), thr).pd_hat);
  }
  const double se = binomial_se(pds[1], plan.trials_pd);
  EXPECT_LE(std::abs(pds[0] - pds[1]), 3 * se);
  EXPECT_LE(std::abs(pds[2] - pds[1]), 3 * se);
}

TEST(EstimatePd, CovarianceScaleDoesNotChangeStatistics) {
  const Scenario sc = default_scenario();
  const auto a = simulate_pairs(sc, Hypothesis::H1, 200, 4, kStreamDetection);
  const auto b = simulate_pairs(sc.with_covariance_scale(10.0), Hypothesis::H1, 200, 4, kStreamDetection);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_NEAR(a[i].t_j, b[i].t_j, 1e-9 * std::max(1.0, a[i].t_j));
    EXPECT_NEAR(a[i].t_h, b[i].t_h, 1e-9 * std::max(1.0, a[i].t_h));
  }
}
