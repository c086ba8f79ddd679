#include "adet/experiments.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "adet/analytic.hpp"
#include "adet/error.hpp"
#include "adet/montecarlo.hpp"

#ifndef ADET_VERSION
#define ADET_VERSION "0.0.0"
#endif

namespace adet {

namespace {

std::string fmt(const std::optional<double>& v) {
  if (!v || std::isnan(*v)) return {};
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.8e", *v);
  return buf;
}

std::string fmt(double v) { return fmt(std::optional<double>(v)); }

// Analytic thresholds keyed by detector label; they depend only on the
// dimensions and the PFA, never on the geometry or the SNR.
class ThresholdCache {
 public:
  explicit ThresholdCache(const SweepConfig& c) : config_(c) {}

  std::optional<double> get(const DetectorSpec& d) {
    if (!d.has_analytic()) return std::nullopt;
    const auto it = cache_.find(d.label());
    if (it != cache_.end()) return it->second;
    const auto& s = config_.scenario;
    const AnalyticParams central = nominal_params(s.n, s.l, s.p, s.q, 0.0, 0.0, 0.0);
    const double eta = invert_threshold(d, config_.pfa, central);
    cache_.emplace(d.label(), eta);
    return eta;
  }

 private:
  const SweepConfig& config_;
  std::map<std::string, double> cache_;
};

struct GeometryPoint {
  double sin2psi;
  double cos2theta;
};

// Evaluates every detector at every SNR for one geometry.
void evaluate_geometry(const SweepConfig& cfg, GeometryPoint g, const std::vector<double>& snrs,
                       const std::vector<DetectorSpec>& detectors, ThresholdCache& analytic,
                       const ProgressFn& progress, std::vector<CurveRow>& rows) {
  ScenarioConfig sc_cfg = cfg.scenario;
  sc_cfg.sin2psi = g.sin2psi;
  sc_cfg.cos2theta = g.cos2theta;
  sc_cfg.snr_db = snrs.front();
  const Scenario base = make_scenario(sc_cfg);

  std::vector<std::optional<double>> mc_threshold(detectors.size());
  if (cfg.monte_carlo) {
    if (progress) {
      char buf[128];
      std::snprintf(buf, sizeof buf, "H0 calibration: sin2psi=%g cos2theta=%g (%zu trials)", g.sin2psi,
                    g.cos2theta, cfg.trials_threshold);
      progress(buf);
    }
    const auto h0 = simulate_pairs(base, Hypothesis::H0, cfg.trials_threshold, cfg.seed, kStreamThreshold,
                                   cfg.workers, cfg.fixed_interference);
    for (std::size_t k = 0; k < detectors.size(); ++k)
      mc_threshold[k] = empirical_threshold(statistics_of(h0, detectors[k]), cfg.pfa);
  }

  for (double snr : snrs) {
    std::vector<SufficientPair> h1;
    if (cfg.monte_carlo) {
      if (progress) {
        char buf[128];
        std::snprintf(buf, sizeof buf, "H1 point: snr=%g dB sin2psi=%g cos2theta=%g", snr, g.sin2psi,
                      g.cos2theta);
        progress(buf);
      }
      h1 = simulate_pairs(base.with_snr(snr), Hypothesis::H1, cfg.trials_pd, cfg.seed, kStreamDetection,
                          cfg.workers, cfg.fixed_interference);
    }
    const auto& s = cfg.scenario;
    const AnalyticParams params = nominal_params(s.n, s.l, s.p, s.q, snr, g.sin2psi, g.cos2theta);
    for (std::size_t k = 0; k < detectors.size(); ++k) {
      const DetectorSpec& d = detectors[k];
      CurveRow row;
      row.snr_db = snr;
      row.sin2psi = g.sin2psi;
      row.cos2theta = g.cos2theta;
      row.detector = d;
      row.threshold_analytic = analytic.get(d);
      if (row.threshold_analytic) row.pd_analytic = pd(d, *row.threshold_analytic, params);
      if (cfg.monte_carlo) {
        row.threshold_mc = mc_threshold[k];
        const double p = exceedance_rate(statistics_of(h1, d), *mc_threshold[k]);
        row.pd_mc = p;
        row.pd_mc_se = binomial_se(p, cfg.trials_pd);
      }
      rows.push_back(std::move(row));
    }
  }
}

}  // namespace

CurveResult sweep_snr(const SweepConfig& config, const ProgressFn& progress) {
  SweepConfig c = config;
  c.axis = SweepAxis::Snr;
  c.validate();
  CurveResult out{c, {}};
  ThresholdCache analytic(c);
  evaluate_geometry(c, {c.scenario.sin2psi, c.scenario.cos2theta}, c.snr_db_grid, c.detectors, analytic, progress,
                    out.rows);
  return out;
}

CurveResult sweep_sin2psi(const SweepConfig& config, const ProgressFn& progress) {
  SweepConfig c = config;
  c.axis = SweepAxis::Sin2psi;
  c.validate();
  CurveResult out{c, {}};
  ThresholdCache analytic(c);
  for (double s2 : c.sin2psi_grid)
    evaluate_geometry(c, {s2, c.scenario.cos2theta}, {c.scenario.snr_db}, c.detectors, analytic, progress,
                      out.rows);
  return out;
}

CurveResult sweep_kappa(const SweepConfig& config, const ProgressFn& progress) {
  SweepConfig c = config;
  c.axis = SweepAxis::Kappa;
  c.validate();
  std::vector<DetectorSpec> detectors = c.detectors;
  for (double k : c.kappa_grid) {
    const DetectorSpec d = DetectorSpec::tunable(k);
    bool listed = false;
    for (const auto& e : detectors) listed = listed || e == d;
    if (!listed) detectors.push_back(d);
  }
  CurveResult out{c, {}};
  ThresholdCache analytic(c);
  for (double c2 : c.cos2theta_grid)
    evaluate_geometry(c, {c.scenario.sin2psi, c2}, {c.scenario.snr_db}, detectors, analytic, progress, out.rows);
  return out;
}

CurveResult sweep_mesa(const SweepConfig& config, const ProgressFn& progress) {
  SweepConfig c = config;
  c.axis = SweepAxis::Mesa;
  c.validate();
  CurveResult out{c, {}};
  ThresholdCache analytic(c);
  for (double c2 : c.cos2theta_grid)
    evaluate_geometry(c, {c.scenario.sin2psi, c2}, c.snr_db_grid, c.detectors, analytic, progress, out.rows);
  return out;
}

CurveResult run_sweep(const SweepConfig& config, const ProgressFn& progress) {
  switch (config.axis) {
    case SweepAxis::Snr: return sweep_snr(config, progress);
    case SweepAxis::Sin2psi: return sweep_sin2psi(config, progress);
    case SweepAxis::Kappa: return sweep_kappa(config, progress);
    case SweepAxis::Mesa: return sweep_mesa(config, progress);
    case SweepAxis::Point: break;
  }
  config.validate();
  CurveResult out{config, {}};
  ThresholdCache analytic(config);
  evaluate_geometry(config, {config.scenario.sin2psi, config.scenario.cos2theta}, {config.scenario.snr_db},
                    config.detectors, analytic, progress, out.rows);
  return out;
}

std::string curve_csv(const CurveResult& result) {
  std::ostringstream o;
  o << "snr_db,sin2psi,cos2theta,detector,kappa,pd_analytic,pd_mc,pd_mc_se,threshold_analytic,threshold_mc\n";
  for (const auto& r : result.rows) {
    const bool tunable = r.detector.kind == DetectorKind::TwAbortI;
    o << fmt(r.snr_db) << ',' << fmt(r.sin2psi) << ',' << fmt(r.cos2theta) << ',' << r.detector.name() << ','
      << (tunable ? fmt(r.detector.kappa) : std::string()) << ',' << fmt(r.pd_analytic) << ',' << fmt(r.pd_mc)
      << ',' << fmt(r.pd_mc_se) << ',' << fmt(r.threshold_analytic) << ',' << fmt(r.threshold_mc) << '\n';
  }
  return o.str();
}

std::vector<CalibrationRow> calibrate(const SweepConfig& config, const ProgressFn& progress) {
  config.validate();
  ThresholdCache analytic(config);
  std::vector<SufficientPair> h0;
  if (config.monte_carlo) {
    if (progress) progress("H0 calibration: " + std::to_string(config.trials_threshold) + " trials");
    const Scenario sc = make_scenario(config.scenario);
    h0 = simulate_pairs(sc, Hypothesis::H0, config.trials_threshold, config.seed, kStreamThreshold, config.workers,
                        config.fixed_interference);
  }
  std::vector<CalibrationRow> rows;
  for (const auto& d : config.detectors) {
    CalibrationRow r;
    r.detector = d;
    r.pfa_target = config.pfa;
    r.threshold_analytic = analytic.get(d);
    if (config.monte_carlo) {
      const auto stats = statistics_of(h0, d);
      r.threshold_mc = empirical_threshold(stats, config.pfa);
      r.trials = h0.size();
      if (r.threshold_analytic) {
        r.pfa_mc_at_analytic = exceedance_rate(stats, *r.threshold_analytic);
        r.pfa_mc_se = binomial_se(config.pfa, h0.size());
      }
    }
    rows.push_back(r);
  }
  return rows;
}

std::string calibration_csv(const std::vector<CalibrationRow>& rows) {
  std::ostringstream o;
  o << "detector,kappa,pfa_target,threshold_analytic,threshold_mc,pfa_mc_at_analytic,pfa_mc_se,trials\n";
  for (const auto& r : rows) {
    const bool tunable = r.detector.kind == DetectorKind::TwAbortI;
    o << r.detector.name() << ',' << (tunable ? fmt(r.detector.kappa) : std::string()) << ',' << fmt(r.pfa_target)
      << ',' << fmt(r.threshold_analytic) << ',' << fmt(r.threshold_mc) << ',' << fmt(r.pfa_mc_at_analytic) << ','
      << fmt(r.pfa_mc_se) << ',' << r.trials << '\n';
  }
  return o.str();
}

std::string metadata_text(const SweepConfig& config, const std::string& timestamp) {
  std::ostringstream o;
  char hash[32];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(config_hash(config)));
  o << "# adet " << library_version() << "\n";
  o << "# generated " << timestamp << "\n";
  o << "# config_hash " << hash << "\n";
  o << "# seed " << config.seed << "\n";
  o << config.to_text();
  return o.str();
}

const char* library_version() noexcept { return ADET_VERSION; }

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::Io, path + ": cannot open for writing");
  out << content;
  out.flush();
  if (!out) throw Error(ErrorKind::Io, path + ": write failed");
}

}  // namespace adet
