#include <benchmark/benchmark.h>

#include "adet/analytic.hpp"
#include "adet/montecarlo.hpp"
#include "adet/scenario.hpp"
#include "adet/statistics.hpp"

namespace {

const adet::Scenario& default_scenario() {
  static const adet::Scenario sc = adet::make_scenario(adet::ScenarioConfig{});
  return sc;
}

adet::AnalyticParams mismatched_params() {
  return adet::nominal_params(12, 24, 1, 2, 17.0, 0.8, 0.5);
}

void BM_SampleBatch(benchmark::State& state) {
  const auto& sc = default_scenario();
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(adet::sample_batch(sc, adet::Hypothesis::H1, ++seed));
}
BENCHMARK(BM_SampleBatch);

void BM_SufficientPair(benchmark::State& state) {
  const auto& sc = default_scenario();
  const auto batch = adet::sample_batch(sc, adet::Hypothesis::H1, 7);
  for (auto _ : state) benchmark::DoNotOptimize(adet::sufficient_pair(batch, sc.h_mat, sc.j_mat));
}
BENCHMARK(BM_SufficientPair);

void BM_SimulatePairs(benchmark::State& state) {
  const auto& sc = default_scenario();
  const auto trials = static_cast<std::size_t>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(adet::simulate_pairs(sc, adet::Hypothesis::H0, trials, 1, adet::kStreamThreshold));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SimulatePairs)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_ConditionalCdf(benchmark::State& state) {
  const auto prm = mismatched_params();
  for (auto _ : state) benchmark::DoNotOptimize(adet::sf_glrt_conditional(0.6, 0.7, prm));
}
BENCHMARK(BM_ConditionalCdf);

void BM_BetaDensityH1(benchmark::State& state) {
  const auto prm = mismatched_params();
  for (auto _ : state) benchmark::DoNotOptimize(adet::pdf_beta_h1(0.7, prm.delta2, prm));
}
BENCHMARK(BM_BetaDensityH1);

void BM_Pd(benchmark::State& state) {
  const auto prm = mismatched_params();
  const adet::DetectorSpec d[] = {adet::DetectorSpec::glrt(), adet::DetectorSpec::abort(),
                                  adet::DetectorSpec::wabort(), adet::DetectorSpec::tunable(2.5)};
  const auto& det = d[state.range(0)];
  for (auto _ : state) benchmark::DoNotOptimize(adet::pd(det, 1.1, prm));
  state.SetLabel(det.label());
}
BENCHMARK(BM_Pd)->DenseRange(0, 3)->Unit(benchmark::kMicrosecond);

void BM_InvertThreshold(benchmark::State& state) {
  const auto prm = mismatched_params().central();
  const auto det = state.range(0) == 0 ? adet::DetectorSpec::glrt() : adet::DetectorSpec::tunable(0.8);
  for (auto _ : state) benchmark::DoNotOptimize(adet::invert_threshold(det, 1e-3, prm));
  state.SetLabel(det.label());
}
BENCHMARK(BM_InvertThreshold)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
