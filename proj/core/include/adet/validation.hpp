#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "adet/config.hpp"
#include "adet/experiments.hpp"

namespace adet {

/// One-sample Kolmogorov-Smirnov distance sup |F_n - F|.
double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf);
/// Asymptotic critical value sqrt(-ln(alpha/2)/2)/sqrt(n).
double ks_critical_value(std::size_t n, double alpha);

struct ChiSquareResult {
  double statistic = 0.0;
  int dof = 0;
  double critical = 0.0;
  bool pass() const { return statistic <= critical; }
};

/// Pearson chi-square against `bins` equiprobable cells of the continuous
/// law on [lo, hi] with the given CDF. Cell edges come from inverting the CDF.
ChiSquareResult chi_square_fit(const std::vector<double>& samples, const std::function<double(double)>& cdf,
                               double lo, double hi, int bins, double alpha);

/// Upper-alpha critical value of the chi-square law with `dof` degrees of freedom.
double chi_square_critical(int dof, double alpha);

struct Check {
  std::string name;
  bool pass = false;
  double measured = 0.0;
  double limit = 0.0;
  std::string detail;
};

struct ValidationReport {
  std::uint64_t seed = 0;
  std::uint64_t config_hash = 0;
  double tolerance_scale = 1.0;
  std::vector<Check> checks;

  bool passed() const;
  /// One line per check, "PASS|FAIL name measured=... limit=... detail",
  /// preceded by a seed/hash header and followed by a summary line.
  std::string text() const;
};

/// Runs the invariant suite at the config's operating point: density
/// normalizations, metric identities, threshold round trips, KS/chi-square
/// fits, detector identities, analytic-vs-Monte-Carlo PD and the scale and
/// interference-power invariances. Every limit is multiplied by
/// `tolerance_scale` (a value < 1 tightens, 0 makes nearly everything fail).
ValidationReport run_validation(const SweepConfig& config, double tolerance_scale = 1.0,
                                const ProgressFn& progress = {});

}  // namespace adet
