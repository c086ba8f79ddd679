#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "adet/config.hpp"
#include "adet/statistics.hpp"

namespace adet {

/// One (grid point, detector) result. Missing values stay empty, e.g. the
/// analytic columns of 2S-GLRT-I or the Monte Carlo columns when disabled.
struct CurveRow {
  double snr_db = 0.0;
  double sin2psi = 0.0;
  double cos2theta = 0.0;
  DetectorSpec detector;
  std::optional<double> pd_analytic;
  std::optional<double> pd_mc;
  std::optional<double> pd_mc_se;
  std::optional<double> threshold_analytic;
  std::optional<double> threshold_mc;
};

struct CurveResult {
  SweepConfig config;
  std::vector<CurveRow> rows;
};

using ProgressFn = std::function<void(const std::string&)>;

/// Each sweep simulates one set of H0 batches per geometry (sin2psi,
/// cos2theta) and one set of H1 batches per grid point, then evaluates every
/// detector on the shared batches. Analytic thresholds depend only on
/// (n, l, p, q) and are inverted once per detector.
CurveResult sweep_snr(const SweepConfig& config, const ProgressFn& progress = {});
CurveResult sweep_sin2psi(const SweepConfig& config, const ProgressFn& progress = {});
/// Rows for T-W-ABORT-I(kappa) over the kappa grid at every cos2theta in the
/// config, plus any detectors listed explicitly.
CurveResult sweep_kappa(const SweepConfig& config, const ProgressFn& progress = {});
/// Long-format grid over snr_db x cos2theta.
CurveResult sweep_mesa(const SweepConfig& config, const ProgressFn& progress = {});
/// Dispatch on config.axis (Point evaluates the scenario's own operating point).
CurveResult run_sweep(const SweepConfig& config, const ProgressFn& progress = {});

/// Header plus one line per row; numbers as %.8e, missing values empty.
std::string curve_csv(const CurveResult& result);

struct CalibrationRow {
  DetectorSpec detector;
  double pfa_target = 0.0;
  std::optional<double> threshold_analytic;
  std::optional<double> threshold_mc;
  /// Empirical exceedance rate of the analytic threshold on the H0 batches.
  std::optional<double> pfa_mc_at_analytic;
  std::optional<double> pfa_mc_se;
  std::size_t trials = 0;
};

/// Analytic and empirical thresholds at the scenario's geometry.
std::vector<CalibrationRow> calibrate(const SweepConfig& config, const ProgressFn& progress = {});
std::string calibration_csv(const std::vector<CalibrationRow>& rows);

/// Sidecar text: config echo, hash, code version and the given timestamp.
/// Kept out of the CSV so the CSV is byte-stable.
std::string metadata_text(const SweepConfig& config, const std::string& timestamp);

/// Version string compiled into the library.
const char* library_version() noexcept;

/// Writes `content` to `path`; throws an Io error when that fails.
void write_text_file(const std::string& path, const std::string& content);

}  // namespace adet
