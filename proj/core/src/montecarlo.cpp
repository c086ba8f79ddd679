#include "adet/montecarlo.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <thread>

#include "adet/error.hpp"

namespace adet {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

void TrialPlan::validate() const {
  if (!(pfa_target > 0.0 && pfa_target < 1.0)) throw_invalid("pfa_target must lie in (0, 1)");
  if (static_cast<double>(trials_threshold) * pfa_target < 10.0 * (1.0 - 1e-12))
    throw_invalid("trials_threshold must be at least 10 / pfa_target");
  if (trials_pd == 0) throw_invalid("trials_pd must be positive");
}

double binomial_se(double p, std::size_t trials) {
  if (trials == 0) return 0.0;
  return std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
}

std::vector<SufficientPair> simulate_pairs(const Scenario& scenario, Hypothesis hypothesis,
                                           std::size_t trials, std::uint64_t base_seed,
                                           std::uint64_t stream, unsigned workers,
                                           bool fixed_interference) {
  std::vector<SufficientPair> out(trials);
  auto run_range = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const DataBatch batch =
          sample_batch(scenario, hypothesis, stream_seed(base_seed, stream, i), fixed_interference);
      out[i] = sufficient_pair(batch, scenario.h_mat, scenario.j_mat);
    }
  };
  const std::size_t n_workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(trials, 1));
  if (n_workers == 1) {
    run_range(0, trials);
    return out;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(n_workers);
  const std::size_t chunk = (trials + n_workers - 1) / n_workers;
  for (std::size_t w = 0; w < n_workers; ++w) {
    const std::size_t begin = std::min(trials, w * chunk);
    const std::size_t end = std::min(trials, begin + chunk);
    pool.emplace_back([&, w, begin, end] {
      try {
        run_range(begin, end);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

std::vector<double> statistics_of(std::span<const SufficientPair> pairs, const DetectorSpec& detector) {
  std::vector<double> out(pairs.size());
  std::transform(pairs.begin(), pairs.end(), out.begin(),
                 [&](const SufficientPair& p) { return detector_statistic(p, detector); });
  return out;
}

double empirical_threshold(std::span<const double> statistics, double pfa) {
  if (!(pfa > 0.0 && pfa < 1.0)) throw_invalid("empirical_threshold: pfa must lie in (0, 1)");
  const std::size_t n = statistics.size();
  if (static_cast<double>(n) * pfa < 1.0)
    throw Error(ErrorKind::InsufficientTrials,
                "empirical_threshold: " + std::to_string(n) + " trials give fewer than one expected exceedance");
  // Small slack keeps ceil() from rounding 99900.00000000001 up.
  const double exact = static_cast<double>(n) * (1.0 - pfa);
  auto rank = static_cast<std::size_t>(std::ceil(exact - 1e-9 * std::max(1.0, exact)));
  rank = std::clamp<std::size_t>(rank, 1, n);
  std::vector<double> sorted(statistics.begin(), statistics.end());
  std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(rank - 1), sorted.end());
  return sorted[rank - 1];
}

double exceedance_rate(std::span<const double> statistics, double threshold) {
  if (statistics.empty()) return 0.0;
  const auto hits = std::count_if(statistics.begin(), statistics.end(),
                                  [&](double s) { return s > threshold; });
  return static_cast<double>(hits) / static_cast<double>(statistics.size());
}

double calibrate_threshold(const TrialPlan& plan, const DetectorSpec& detector) {
  const auto pairs = simulate_pairs(plan.scenario, Hypothesis::H0, plan.trials_threshold, plan.base_seed,
                                    kStreamThreshold, plan.workers, plan.fixed_interference);
  return empirical_threshold(statistics_of(pairs, detector), plan.pfa_target);
}

EstimateResult estimate_pd(const TrialPlan& plan, const DetectorSpec& detector, double threshold) {
  if (!std::isfinite(threshold)) throw_invalid("estimate_pd: threshold must be finite");
  const auto start = Clock::now();
  const auto pairs = simulate_pairs(plan.scenario, Hypothesis::H1, plan.trials_pd, plan.base_seed,
                                    kStreamDetection, plan.workers, plan.fixed_interference);
  EstimateResult r;
  r.detector = detector;
  r.threshold = threshold;
  r.trials_pd = plan.trials_pd;
  r.pd_hat = exceedance_rate(statistics_of(pairs, detector), threshold);
  r.pd_se = binomial_se(r.pd_hat, plan.trials_pd);
  r.pfa_hat = std::nan("");
  r.pfa_se = std::nan("");
  r.seconds = seconds_since(start);
  return r;
}

std::vector<EstimateResult> run_plan(const TrialPlan& plan) {
  if (plan.detectors.empty()) return {};
  plan.validate();
  const auto start = Clock::now();
  const auto h0 = simulate_pairs(plan.scenario, Hypothesis::H0, plan.trials_threshold, plan.base_seed,
                                 kStreamThreshold, plan.workers, plan.fixed_interference);
  const auto h1 = simulate_pairs(plan.scenario, Hypothesis::H1, plan.trials_pd, plan.base_seed,
                                 kStreamDetection, plan.workers, plan.fixed_interference);
  const double shared_seconds = seconds_since(start) / static_cast<double>(plan.detectors.size());

  std::vector<EstimateResult> results;
  results.reserve(plan.detectors.size());
  for (const auto& detector : plan.detectors) {
    const auto t0 = Clock::now();
    const auto null_stats = statistics_of(h0, detector);
    EstimateResult r;
    r.detector = detector;
    r.threshold = empirical_threshold(null_stats, plan.pfa_target);
    r.pfa_hat = exceedance_rate(null_stats, r.threshold);
    r.pfa_se = binomial_se(r.pfa_hat, plan.trials_threshold);
    r.pd_hat = exceedance_rate(statistics_of(h1, detector), r.threshold);
    r.pd_se = binomial_se(r.pd_hat, plan.trials_pd);
    r.trials_threshold = plan.trials_threshold;
    r.trials_pd = plan.trials_pd;
    r.seconds = shared_seconds + seconds_since(t0);
    results.push_back(r);
  }
  return results;
}

}  // namespace adet
