#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <CLI11.hpp>
#include <chrono>
#include <cstdint>
#include <ctime>
#include <iostream>
#include <optional>
#include <string>

#include "adet/config.hpp"
#include "adet/error.hpp"
#include "adet/experiments.hpp"
#include "adet/validation.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitNumeric = 2;
constexpr int kExitValidation = 3;

struct Overrides {
  std::string config_path;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> trials_threshold;
  std::optional<std::size_t> trials_pd;
  std::optional<double> pfa;
  std::optional<unsigned> workers;
  bool no_mc = false;
};

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

adet::SweepConfig build_config(adet::SweepAxis axis, const Overrides& o) {
  adet::SweepConfig c =
      o.config_path.empty() ? adet::SweepConfig::defaults(axis) : adet::load_config(o.config_path, axis);
  if (!o.out.empty()) c.output = o.out;
  if (o.seed) c.seed = *o.seed;
  if (o.trials_threshold) c.trials_threshold = *o.trials_threshold;
  if (o.trials_pd) c.trials_pd = *o.trials_pd;
  if (o.pfa) c.pfa = *o.pfa;
  if (o.workers) c.workers = *o.workers;
  if (o.no_mc) c.monte_carlo = false;
  c.validate();
  return c;
}

// CSV to the configured path (plus a .meta sidecar) or to stdout.
void emit(const adet::SweepConfig& c, const std::string& body) {
  if (c.output.empty()) {
    std::cout << body;
    return;
  }
  adet::write_text_file(c.output, body);
  adet::write_text_file(c.output + ".meta", adet::metadata_text(c, utc_timestamp()));
  spdlog::info("wrote {}", c.output);
}

void add_common(CLI::App* sub, Overrides& o) {
  sub->add_option("--config", o.config_path, "Config file (INI-style sections)")->check(CLI::ExistingFile);
  sub->add_option("--out", o.out, "Output path (default: stdout)");
  sub->add_option("--seed", o.seed, "Monte Carlo base seed");
  sub->add_option("--trials-threshold", o.trials_threshold, "H0 trials for threshold calibration");
  sub->add_option("--trials-pd", o.trials_pd, "H1 trials per grid point");
  sub->add_option("--pfa", o.pfa, "False-alarm probability");
  sub->add_option("--workers", o.workers, "Worker threads (speed only)")->check(CLI::PositiveNumber);
  sub->add_flag("--no-mc", o.no_mc, "Analytic columns only");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive subspace detectors under signal mismatch: analytic and Monte Carlo sweeps"};
  app.set_version_flag("--version", adet::library_version());
  app.require_subcommand(1);
  app.fallthrough();
  bool quiet = false;
  app.add_flag("-q,--quiet", quiet, "Only log warnings and errors");

  Overrides o;
  double tolerance_scale = 1.0;
  struct Sub {
    const char* name;
    const char* help;
    adet::SweepAxis axis;
  };
  const Sub subs[] = {
      {"sweep-snr", "PD versus SNR", adet::SweepAxis::Snr},
      {"sweep-sin2psi", "PD versus sin^2(psi)", adet::SweepAxis::Sin2psi},
      {"sweep-kappa", "PD of the tunable detector versus kappa", adet::SweepAxis::Kappa},
      {"mesa", "PD over the SNR x cos^2(theta) grid", adet::SweepAxis::Mesa},
      {"calibrate", "Analytic and empirical thresholds at the configured point", adet::SweepAxis::Point},
      {"validate", "Run the analytic-vs-Monte-Carlo invariant suite", adet::SweepAxis::Point},
  };
  for (const auto& s : subs) {
    CLI::App* sub = app.add_subcommand(s.name, s.help);
    add_common(sub, o);
    if (std::string(s.name) == "validate")
      sub->add_option("--tolerance-scale", tolerance_scale, "Multiply every check limit (testing aid)")
          ->check(CLI::NonNegativeNumber);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  auto logger = spdlog::stderr_color_mt("adet");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%H:%M:%S] %v");
  spdlog::set_level(quiet ? spdlog::level::warn : spdlog::level::info);
  const adet::ProgressFn progress = [](const std::string& msg) { spdlog::info("{}", msg); };

  try {
    for (const auto& s : subs) {
      if (!app.got_subcommand(s.name)) continue;
      const std::string name = s.name;
      const adet::SweepConfig config = build_config(s.axis, o);
      if (name == "calibrate") {
        emit(config, adet::calibration_csv(adet::calibrate(config, progress)));
      } else if (name == "validate") {
        const auto report = adet::run_validation(config, tolerance_scale, progress);
        const std::string text = report.text();
        if (config.output.empty())
          std::cout << text;
        else
          adet::write_text_file(config.output, text);
        if (!report.passed()) {
          spdlog::error("validation failed");
          return kExitValidation;
        }
      } else {
        emit(config, adet::curve_csv(adet::run_sweep(config, progress)));
      }
    }
  } catch (const adet::Error& e) {
    spdlog::error("{} error: {}", adet::to_string(e.kind()), e.what());
    switch (e.kind()) {
      case adet::ErrorKind::Config:
      case adet::ErrorKind::Io: return kExitConfig;
      default: return kExitNumeric;
    }
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return kExitNumeric;
  }
  return kExitOk;
}
