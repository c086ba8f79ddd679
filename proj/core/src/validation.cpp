#include "adet/validation.hpp"

#include <algorithm>
#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "adet/analytic.hpp"
#include "adet/error.hpp"
#include "adet/montecarlo.hpp"
#include "adet/quadrature.hpp"

namespace adet {

namespace {

// Independent of the threshold and detection streams.
constexpr std::uint64_t kStreamLossFit = 2;

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

double invert_cdf(const std::function<double(double)>& cdf, double lo, double hi, double target) {
  for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
    const double mid = 0.5 * (lo + hi);
    (cdf(mid) < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

class Suite {
 public:
  Suite(double scale, const ProgressFn& progress) : scale_(scale), progress_(progress) {}

  // measured <= limit * scale
  void at_most(const std::string& name, double measured, double limit, const std::string& detail = {}) {
    const double lim = limit * scale_;
    checks_.push_back({name, measured <= lim, measured, lim, detail});
  }

  void note(const std::string& msg) const {
    if (progress_) progress_(msg);
  }

  std::vector<Check> take() { return std::move(checks_); }

 private:
  double scale_;
  const ProgressFn& progress_;
  std::vector<Check> checks_;
};

}  // namespace

double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) throw_invalid("ks_statistic: no samples");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

double ks_critical_value(std::size_t n, double alpha) {
  if (n == 0 || !(alpha > 0.0 && alpha < 1.0)) throw_invalid("ks_critical_value: need n > 0 and alpha in (0,1)");
  return std::sqrt(-0.5 * std::log(alpha / 2.0)) / std::sqrt(static_cast<double>(n));
}

double chi_square_critical(int dof, double alpha) {
  if (dof < 1 || !(alpha > 0.0 && alpha < 1.0)) throw_invalid("chi_square_critical: bad arguments");
  boost::math::chi_squared dist(dof);
  return boost::math::quantile(boost::math::complement(dist, alpha));
}

ChiSquareResult chi_square_fit(const std::vector<double>& samples, const std::function<double(double)>& cdf,
                               double lo, double hi, int bins, double alpha) {
  if (bins < 2) throw_invalid("chi_square_fit: need at least two bins");
  if (samples.empty()) throw_invalid("chi_square_fit: no samples");
  std::vector<double> edges(static_cast<std::size_t>(bins) + 1);
  edges.front() = lo;
  edges.back() = hi;
  for (int k = 1; k < bins; ++k)
    edges[static_cast<std::size_t>(k)] = invert_cdf(cdf, lo, hi, static_cast<double>(k) / bins);
  std::vector<double> observed(static_cast<std::size_t>(bins), 0.0);
  for (double x : samples) {
    auto it = std::upper_bound(edges.begin() + 1, edges.end() - 1, x);
    observed[static_cast<std::size_t>(it - (edges.begin() + 1))] += 1.0;
  }
  const double n = static_cast<double>(samples.size());
  ChiSquareResult r;
  for (int k = 0; k < bins; ++k) {
    const auto i = static_cast<std::size_t>(k);
    const double lo_p = k == 0 ? 0.0 : cdf(edges[i]);
    const double hi_p = k + 1 == bins ? 1.0 : cdf(edges[i + 1]);
    const double expected = n * (hi_p - lo_p);
    if (!(expected > 0.0)) throw_numeric("chi_square_fit: empty expected cell");
    r.statistic += (observed[i] - expected) * (observed[i] - expected) / expected;
  }
  r.dof = bins - 1;
  r.critical = chi_square_critical(r.dof, alpha);
  return r;
}

bool ValidationReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

std::string ValidationReport::text() const {
  std::ostringstream o;
  char hash[32];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(config_hash));
  o << "# adet validate " << library_version() << " seed=" << seed << " config_hash=" << hash
    << " tolerance_scale=" << num(tolerance_scale) << "\n";
  std::size_t failed = 0;
  for (const auto& c : checks) {
    if (!c.pass) ++failed;
    o << (c.pass ? "PASS " : "FAIL ") << c.name << " measured=" << num(c.measured) << " limit=" << num(c.limit);
    if (!c.detail.empty()) o << " " << c.detail;
    o << "\n";
  }
  o << "# " << checks.size() - failed << "/" << checks.size() << " checks passed\n";
  return o.str();
}

ValidationReport run_validation(const SweepConfig& config, double tolerance_scale, const ProgressFn& progress) {
  SweepConfig cfg = config;
  cfg.axis = SweepAxis::Point;
  cfg.validate();
  if (!cfg.monte_carlo) throw ConfigError("config", 0, "validate needs [montecarlo] enabled = true");
  if (!(tolerance_scale >= 0.0)) throw_invalid("tolerance scale must be >= 0");

  ValidationReport report;
  report.seed = cfg.seed;
  report.config_hash = config_hash(cfg);
  report.tolerance_scale = tolerance_scale;
  Suite suite(tolerance_scale, progress);

  const auto& sc_cfg = cfg.scenario;
  const Scenario scenario = make_scenario(sc_cfg);
  const AnalyticParams h1 = esnr_params(scenario);
  const AnalyticParams h0 = h1.central();
  const std::vector<DetectorSpec> analytic_detectors{DetectorSpec::glrt(), DetectorSpec::abort(),
                                                     DetectorSpec::wabort(), DetectorSpec::tunable(0.8),
                                                     DetectorSpec::tunable(2.5), DetectorSpec::aed()};

  suite.note("density normalizations");
  for (double d2 : {0.0, 0.5, 5.0, 50.0}) {
    const double mass = integrate([&](double b) { return pdf_beta_h1(b, d2, h0); }, 0.0, 1.0).value;
    suite.at_most("beta_density_mass[delta2=" + num(d2) + "]", std::abs(mass - 1.0), 1e-8);
  }

  suite.note("metric identities");
  const MismatchMetrics m = mismatch_metrics(scenario.r_cov, scenario.h_mat, scenario.j_mat, scenario.s0);
  suite.at_most("rho_eff_plus_delta2", std::abs(m.rho_eff + m.delta2 - m.rho_snr * m.sin2psi), 1e-10);
  if (sc_cfg.sin2psi > 0.0)
    suite.at_most("rho_eff_product", std::abs(m.rho_eff - m.rho_snr * m.sin2psi * m.cos2theta), 1e-10);
  suite.at_most("sin2psi_target", std::abs(m.sin2psi - sc_cfg.sin2psi), 1e-8);
  if (sc_cfg.sin2psi > 0.0) suite.at_most("cos2theta_target", std::abs(m.cos2theta - sc_cfg.cos2theta), 1e-8);

  suite.note("analytic threshold inversion");
  std::vector<double> eta(analytic_detectors.size());
  for (std::size_t k = 0; k < analytic_detectors.size(); ++k) {
    eta[k] = invert_threshold(analytic_detectors[k], cfg.pfa, h0);
    const double back = pfa(analytic_detectors[k], eta[k], h0);
    suite.at_most("threshold_inversion[" + analytic_detectors[k].label() + "]", std::abs(back / cfg.pfa - 1.0), 1e-8,
                  "eta=" + num(eta[k]));
  }

  suite.note("H0 trials: " + std::to_string(cfg.trials_threshold));
  const auto null_pairs = simulate_pairs(scenario, Hypothesis::H0, cfg.trials_threshold, cfg.seed, kStreamThreshold,
                                         cfg.workers, cfg.fixed_interference);
  const double pfa_se = binomial_se(cfg.pfa, null_pairs.size());
  for (std::size_t k = 0; k < analytic_detectors.size(); ++k) {
    const double rate = exceedance_rate(statistics_of(null_pairs, analytic_detectors[k]), eta[k]);
    suite.at_most("pfa_round_trip[" + analytic_detectors[k].label() + "]", std::abs(rate - cfg.pfa), 3.0 * pfa_se,
                  "pfa_hat=" + num(rate));
  }

  {
    const auto glrt_stats = statistics_of(null_pairs, DetectorSpec::glrt());
    const double d = ks_statistic(glrt_stats, [&](double t) { return cdf_glrt_central(t, h0); });
    suite.at_most("ks_glrt_h0", d, ks_critical_value(glrt_stats.size(), 0.01));
  }
  {
    std::vector<double> betas;
    betas.reserve(null_pairs.size());
    for (const auto& p : null_pairs) betas.push_back(loss_factor(p));
    const double a = h0.beta_first_dof();
    const double b = h0.beta_second_dof();
    const auto r = chi_square_fit(betas, [&](double x) { return boost::math::ibeta(a, b, x); }, 0.0, 1.0, 20, 0.01);
    suite.at_most("chi2_beta_h0", r.statistic, r.critical);
  }

  suite.note("detector identities");
  {
    const std::size_t n = std::min<std::size_t>(1000, null_pairs.size());
    std::size_t mismatches = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double tw2 = detector_statistic(null_pairs[i], DetectorSpec::tunable(2.0));
      const double w = detector_statistic(null_pairs[i], DetectorSpec::wabort());
      if (tw2 != w) ++mismatches;
    }
    suite.at_most("kappa2_equals_wabort", static_cast<double>(mismatches), 0.0, "batches=" + std::to_string(n));
    std::vector<std::pair<double, double>> v;
    for (std::size_t i = 0; i < n; ++i)
      v.emplace_back(detector_statistic(null_pairs[i], DetectorSpec::aed()),
                     detector_statistic(null_pairs[i], DetectorSpec::tunable(0.0)));
    std::sort(v.begin(), v.end());
    std::size_t violations = 0;
    for (std::size_t i = 1; i < v.size(); ++i) {
      const bool aed_up = v[i].first > v[i - 1].first;
      const bool tw_up = v[i].second > v[i - 1].second;
      if (aed_up != tw_up) ++violations;
    }
    suite.at_most("kappa0_monotone_in_aed", static_cast<double>(violations), 0.0);
  }

  suite.note("H1 trials: " + std::to_string(cfg.trials_pd));
  const auto alt_pairs = simulate_pairs(scenario, Hypothesis::H1, cfg.trials_pd, cfg.seed, kStreamDetection,
                                        cfg.workers, cfg.fixed_interference);
  {
    const auto t_glrt = statistics_of(null_pairs, DetectorSpec::glrt());
    const auto t_k1 = statistics_of(null_pairs, DetectorSpec::tunable(1.0));
    const double thr_glrt = empirical_threshold(t_glrt, cfg.pfa);
    const double thr_k1 = empirical_threshold(t_k1, cfg.pfa);
    std::size_t differ = 0;
    for (const auto& p : alt_pairs)
      if ((detector_statistic(p, DetectorSpec::glrt()) > thr_glrt) !=
          (detector_statistic(p, DetectorSpec::tunable(1.0)) > thr_k1))
        ++differ;
    suite.at_most("kappa1_decisions_match_glrt", static_cast<double>(differ), 0.0,
                  "batches=" + std::to_string(alt_pairs.size()));
  }

  for (std::size_t k = 0; k < analytic_detectors.size(); ++k) {
    const auto& d = analytic_detectors[k];
    const double thr = empirical_threshold(statistics_of(null_pairs, d), cfg.pfa);
    const double pd_mc = exceedance_rate(statistics_of(alt_pairs, d), thr);
    const double pd_an = pd(d, eta[k], h1);
    suite.at_most("pd_analytic_vs_mc[" + d.label() + "]", std::abs(pd_an - pd_mc), 0.02,
                  "analytic=" + num(pd_an) + " mc=" + num(pd_mc));
  }

  suite.note("loss-factor fit under H1");
  {
    const auto more = simulate_pairs(scenario, Hypothesis::H1, cfg.trials_threshold, cfg.seed, kStreamLossFit,
                                     cfg.workers, cfg.fixed_interference);
    std::vector<double> betas;
    betas.reserve(more.size());
    for (const auto& p : more) betas.push_back(loss_factor(p));
    const auto r = chi_square_fit(betas, [&](double x) { return cdf_beta_h1(x, h1); }, 0.0, 1.0, 20, 0.01);
    suite.at_most("chi2_beta_h1", r.statistic, r.critical, "delta2=" + num(h1.delta2));
  }

  suite.note("interference-power and scale invariance");
  {
    const DetectorSpec d = DetectorSpec::glrt();
    const double thr = empirical_threshold(statistics_of(null_pairs, d), cfg.pfa);
    const double ref = exceedance_rate(statistics_of(alt_pairs, d), thr);
    const double se = binomial_se(ref, alt_pairs.size());
    for (double inr : {0.0, 30.0}) {
      const auto pairs = simulate_pairs(scenario.with_inr(inr), Hypothesis::H1, cfg.trials_pd, cfg.seed,
                                        kStreamDetection, cfg.workers, cfg.fixed_interference);
      const double p = exceedance_rate(statistics_of(pairs, d), thr);
      suite.at_most("pd_inr_invariance[" + num(inr) + "dB]", std::abs(p - ref), 3.0 * std::max(se, 1e-12),
                    "pd=" + num(p) + " ref=" + num(ref));
    }
    const auto scaled = simulate_pairs(scenario.with_covariance_scale(10.0), Hypothesis::H0, cfg.trials_threshold,
                                       cfg.seed + 1, kStreamThreshold, cfg.workers, cfg.fixed_interference);
    const double rate = exceedance_rate(statistics_of(scaled, d), eta[0]);
    suite.at_most("cfar_covariance_scale", std::abs(rate - cfg.pfa), 3.0 * pfa_se, "pfa_hat=" + num(rate));
  }

  report.checks = suite.take();
  return report;
}

}  // namespace adet
