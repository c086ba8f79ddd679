#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "adet/scenario.hpp"
#include "adet/statistics.hpp"

namespace adet {

/// Stream identifiers for per-trial generator derivation.
inline constexpr std::uint64_t kStreamThreshold = 0;
inline constexpr std::uint64_t kStreamDetection = 1;

struct TrialPlan {
  Scenario scenario;
  std::vector<DetectorSpec> detectors;
  std::size_t trials_threshold = 100000;
  std::size_t trials_pd = 10000;
  double pfa_target = 1e-3;
  std::uint64_t base_seed = 0;
  /// Keep the interference coordinate at the scenario's realization instead
  /// of re-drawing it every trial.
  bool fixed_interference = false;
  /// Worker threads. Affects speed only; results are identical for any value.
  unsigned workers = 1;

  /// Throws invalid-parameter unless trials_threshold >= 10 / pfa_target.
  void validate() const;
};

struct EstimateResult {
  DetectorSpec detector;
  double threshold = 0.0;
  double pd_hat = 0.0;
  double pd_se = 0.0;
  /// Exceedance rate of `threshold` on the H0 calibration trials.
  double pfa_hat = 0.0;
  double pfa_se = 0.0;
  std::size_t trials_threshold = 0;
  std::size_t trials_pd = 0;
  double seconds = 0.0;
};

/// sqrt(p (1 - p) / trials).
double binomial_se(double p, std::size_t trials);

/// Sufficient pairs for `trials` batches; trial i uses the generator derived
/// from (base_seed, stream, i). Deterministic for any worker count.
std::vector<SufficientPair> simulate_pairs(const Scenario& scenario, Hypothesis hypothesis,
                                           std::size_t trials, std::uint64_t base_seed,
                                           std::uint64_t stream, unsigned workers = 1,
                                           bool fixed_interference = false);

std::vector<double> statistics_of(std::span<const SufficientPair> pairs, const DetectorSpec& detector);

/// Order statistic of rank ceil(n (1 - pfa)) (1-based, ascending); exceedance
/// means strictly greater. Throws insufficient-trials when pfa * n < 1.
double empirical_threshold(std::span<const double> statistics, double pfa);

/// Fraction of statistics strictly above the threshold.
double exceedance_rate(std::span<const double> statistics, double threshold);

/// Empirical (1 - pfa) quantile of the detector over plan.trials_threshold H0 batches.
double calibrate_threshold(const TrialPlan& plan, const DetectorSpec& detector);

/// PD estimate over plan.trials_pd H1 batches carrying the scenario's s0.
EstimateResult estimate_pd(const TrialPlan& plan, const DetectorSpec& detector, double threshold);

/// Calibrate and estimate every detector in order, sharing the H0 and H1
/// batches across detectors.
std::vector<EstimateResult> run_plan(const TrialPlan& plan);

}  // namespace adet
