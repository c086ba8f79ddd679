#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "adet/scenario.hpp"
#include "adet/statistics.hpp"

namespace adet {

enum class SweepAxis { Snr, Sin2psi, Kappa, Mesa, Point };

const char* to_string(SweepAxis axis) noexcept;

/// Parses "min:max:step" (inclusive of max up to rounding) or a comma list.
/// The result must be nonempty and strictly increasing.
std::vector<double> parse_grid(std::string_view text);

/// Everything a sweep needs. Built from per-axis defaults, then a config file,
/// then command-line overrides.
///
/// File format: `[section]` headers, `key = value` lines, `#` or `;` comments.
///   [scenario]   n l p q eps snr_db inr_db sin2psi cos2theta seed
///   [sweep]      snr_db sin2psi kappa cos2theta   (grids)
///   [detectors]  list = GLRT-I, ABORT-I, TW(0.8), ...
///   [montecarlo] enabled trials_threshold trials_pd pfa seed workers fixed_interference
///   [output]     path
/// Unknown sections and keys are errors.
struct SweepConfig {
  SweepAxis axis = SweepAxis::Snr;
  ScenarioConfig scenario;

  std::vector<double> snr_db_grid;
  std::vector<double> sin2psi_grid;
  std::vector<double> kappa_grid;
  std::vector<double> cos2theta_grid;

  std::vector<DetectorSpec> detectors;

  bool monte_carlo = true;
  std::size_t trials_threshold = 100000;
  std::size_t trials_pd = 10000;
  double pfa = 1e-3;
  std::uint64_t seed = 1;
  unsigned workers = 1;
  bool fixed_interference = false;

  std::string output;

  /// Default operating point and grids for the given axis.
  static SweepConfig defaults(SweepAxis axis);

  /// Throws ConfigError (line 0) on any violated constraint.
  void validate() const;

  /// Canonical `key = value` rendering; parsing it back yields the same config.
  std::string to_text() const;
};

/// Applies `text` on top of SweepConfig::defaults(axis). `source` names the
/// input in error messages.
SweepConfig parse_config(std::string_view text, SweepAxis axis, const std::string& source = "<config>");
SweepConfig load_config(const std::string& path, SweepAxis axis);

/// 64-bit FNV-1a of the text.
std::uint64_t fnv1a(std::string_view text);
/// Hash of the canonical rendering; identifies a config in reports.
std::uint64_t config_hash(const SweepConfig& config);

}  // namespace adet
