#include <gtest/gtest.h>

#include <string>

#include "adet/config.hpp"
#include "adet/error.hpp"

using namespace adet;

TEST(Grid, RangeAndList) {
  EXPECT_EQ(parse_grid("0:30:2").size(), 16u);
  const auto g = parse_grid("0:1:0.1");
  ASSERT_EQ(g.size(), 11u);
  EXPECT_EQ(g[3], 0.3);
  EXPECT_EQ(g.back(), 1.0);
  EXPECT_EQ(parse_grid("0 : 3 : 0.25").size(), 13u);
  EXPECT_EQ(parse_grid("0.3, 1.0"), (std::vector<double>{0.3, 1.0}));
  EXPECT_EQ(parse_grid("17"), (std::vector<double>{17.0}));
  EXPECT_EQ(parse_grid("5:5:1"), (std::vector<double>{5.0}));
}

TEST(Grid, Rejects) {
  EXPECT_THROW(parse_grid(""), std::exception);
  EXPECT_THROW(parse_grid("1, 1"), std::exception);
  EXPECT_THROW(parse_grid("2, 1"), std::exception);
  EXPECT_THROW(parse_grid("0:1"), std::exception);
  EXPECT_THROW(parse_grid("0:1:0"), std::exception);
  EXPECT_THROW(parse_grid("1:0:0.1"), std::exception);
  EXPECT_THROW(parse_grid("a,b"), std::exception);
}

TEST(Defaults, OperatingPoint) {
  const auto c = SweepConfig::defaults(SweepAxis::Snr);
  EXPECT_EQ(c.scenario.n, 12);
  EXPECT_EQ(c.scenario.l, 24);
  EXPECT_EQ(c.scenario.p, 1);
  EXPECT_EQ(c.scenario.q, 2);
  EXPECT_EQ(c.scenario.eps, 0.9);
  EXPECT_EQ(c.scenario.inr_db, 10.0);
  EXPECT_EQ(c.scenario.sin2psi, 0.8);
  EXPECT_EQ(c.scenario.cos2theta, 1.0);
  EXPECT_EQ(c.pfa, 1e-3);
  EXPECT_EQ(c.trials_threshold, 100000u);
  EXPECT_EQ(c.trials_pd, 10000u);
  EXPECT_EQ(c.snr_db_grid.front(), 0.0);
  EXPECT_EQ(c.snr_db_grid.back(), 30.0);
  EXPECT_EQ(c.detectors.size(), 6u);
  EXPECT_NO_THROW(c.validate());
  for (auto axis : {SweepAxis::Sin2psi, SweepAxis::Kappa, SweepAxis::Mesa, SweepAxis::Point})
    EXPECT_NO_THROW(SweepConfig::defaults(axis).validate()) << to_string(axis);
  EXPECT_EQ(SweepConfig::defaults(SweepAxis::Kappa).cos2theta_grid, (std::vector<double>{0.3, 1.0}));
  EXPECT_EQ(SweepConfig::defaults(SweepAxis::Kappa).kappa_grid.size(), 13u);
}

TEST(Parse, OverridesDefaults) {
  const std::string text = R"(
# comment
[scenario]
n = 8
l = 20   ; trailing comment
snr_db = 12.5
seed = 42

[sweep]
snr_db = 5, 10, 15

[detectors]
list = GLRT-I, TW(0.8), ABORT-I

[montecarlo]
trials_threshold = 20000
trials_pd = 500
pfa = 0.01
seed = 7
workers = 3
fixed_interference = true

[output]
path = out.csv
)";
  const auto c = parse_config(text, SweepAxis::Snr);
  EXPECT_EQ(c.scenario.n, 8);
  EXPECT_EQ(c.scenario.l, 20);
  EXPECT_EQ(c.scenario.snr_db, 12.5);
  EXPECT_EQ(c.scenario.seed, 42u);
  EXPECT_EQ(c.snr_db_grid, (std::vector<double>{5, 10, 15}));
  ASSERT_EQ(c.detectors.size(), 3u);
  EXPECT_EQ(c.detectors[1], DetectorSpec::tunable(0.8));
  EXPECT_EQ(c.trials_threshold, 20000u);
  EXPECT_EQ(c.trials_pd, 500u);
  EXPECT_EQ(c.pfa, 0.01);
  EXPECT_EQ(c.seed, 7u);
  EXPECT_EQ(c.workers, 3u);
  EXPECT_TRUE(c.fixed_interference);
  EXPECT_EQ(c.output, "out.csv");
  EXPECT_NO_THROW(c.validate());
}

namespace {

int error_line(const std::string& text) {
  try {
    parse_config(text, SweepAxis::Snr, "cfg.ini");
  } catch (const ConfigError& e) {
    EXPECT_EQ(std::string(e.what()).rfind("cfg.ini:", 0), 0u) << e.what();
    return e.line();
  }
  return -1;
}

}  // namespace

TEST(Parse, ErrorsCarryLineNumbers) {
  EXPECT_EQ(error_line("[scenario]\nn = 8\nbogus = 1\n"), 3);
  EXPECT_EQ(error_line("\n[nope]\n"), 2);
  EXPECT_EQ(error_line("n = 8\n"), 1);
  EXPECT_EQ(error_line("[scenario]\nn = eight\n"), 2);
  EXPECT_EQ(error_line("[scenario]\nn = 8\nn = 9\n"), 3);
  EXPECT_EQ(error_line("[sweep]\nsnr_db = 3, 2\n"), 2);
  EXPECT_EQ(error_line("[detectors]\nlist = GLRT-I, AMF\n"), 2);
  EXPECT_EQ(error_line("[scenario\n"), 1);
  EXPECT_EQ(error_line("[montecarlo]\nfixed_interference = maybe\n"), 2);
  EXPECT_EQ(error_line("[scenario]\njust text\n"), 2);
}

TEST(Validate, SchemaConstraints) {
  auto c = SweepConfig::defaults(SweepAxis::Snr);
  c.trials_threshold = 5000;
  EXPECT_THROW(c.validate(), ConfigError);
  c.monte_carlo = false;
  EXPECT_NO_THROW(c.validate());
  c = SweepConfig::defaults(SweepAxis::Snr);
  c.detectors.clear();
  EXPECT_THROW(c.validate(), ConfigError);
  c = SweepConfig::defaults(SweepAxis::Snr);
  c.detectors.push_back(DetectorSpec::glrt());
  EXPECT_THROW(c.validate(), ConfigError);
  c = SweepConfig::defaults(SweepAxis::Snr);
  c.scenario.l = 5;
  EXPECT_THROW(c.validate(), ConfigError);
  c = SweepConfig::defaults(SweepAxis::Sin2psi);
  c.sin2psi_grid = {0.5, 1.2};
  EXPECT_THROW(c.validate(), ConfigError);
  c = SweepConfig::defaults(SweepAxis::Mesa);
  c.cos2theta_grid.clear();
  EXPECT_THROW(c.validate(), ConfigError);
  c = SweepConfig::defaults(SweepAxis::Snr);
  c.pfa = 0.0;
  EXPECT_THROW(c.validate(), ConfigError);
}

TEST(Canonical, RoundTripAndHash) {
  auto c = SweepConfig::defaults(SweepAxis::Mesa);
  c.scenario.cos2theta = 0.123456789012345;
  c.detectors.push_back(DetectorSpec::aed());
  c.output = "x.csv";
  const std::string text = c.to_text();
  const auto back = parse_config(text, SweepAxis::Mesa);
  EXPECT_EQ(back.to_text(), text);
  EXPECT_EQ(config_hash(back), config_hash(c));
  auto d = c;
  d.seed += 1;
  EXPECT_NE(config_hash(d), config_hash(c));
  // Worker count is not part of the identity.
  d = c;
  d.workers = 4;
  EXPECT_EQ(config_hash(d), config_hash(c));
}

TEST(Canonical, Fnv1aKnownValues) {
  EXPECT_EQ(fnv1a(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(fnv1a("a"), 0xaf63dc4c8601ec8cULL);
}

TEST(Load, MissingFile) { EXPECT_THROW(load_config("/nonexistent/adet.ini", SweepAxis::Snr), Error); }
