#include "adet/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "adet/error.hpp"

namespace adet {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double parse_double(std::string_view s) {
  s = trim(s);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    throw std::invalid_argument("expected a number, got '" + std::string(s) + "'");
  return v;
}

template <class T>
T parse_unsigned(std::string_view s) {
  s = trim(s);
  T v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    throw std::invalid_argument("expected a non-negative integer, got '" + std::string(s) + "'");
  return v;
}

int parse_int(std::string_view s) {
  s = trim(s);
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    throw std::invalid_argument("expected an integer, got '" + std::string(s) + "'");
  return v;
}

bool parse_bool(std::string_view s) {
  s = trim(s);
  if (s == "true" || s == "yes" || s == "on" || s == "1") return true;
  if (s == "false" || s == "no" || s == "off" || s == "0") return false;
  throw std::invalid_argument("expected true/false, got '" + std::string(s) + "'");
}

// Grid points are snapped to 12 decimals so "0:1:0.1" yields 0.3, not 0.30000000000000004.
double snap(double v) {
  const double s = std::round(v * 1e12) / 1e12;
  return std::abs(s - v) < 1e-9 ? s : v;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_grid(const std::vector<double>& g) {
  std::string out;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (i) out += ", ";
    out += fmt(g[i]);
  }
  return out;
}

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError("config", 0, message);
}

void require_grid(const std::vector<double>& g, const char* name, double lo, double hi) {
  require(!g.empty(), std::string(name) + " grid is empty");
  for (std::size_t i = 0; i < g.size(); ++i) {
    require(std::isfinite(g[i]) && g[i] >= lo && g[i] <= hi,
            std::string(name) + " grid value " + fmt(g[i]) + " outside [" + fmt(lo) + ", " + fmt(hi) + "]");
    if (i > 0) require(g[i] > g[i - 1], std::string(name) + " grid is not strictly increasing");
  }
}

const std::vector<DetectorSpec>& default_detectors() {
  static const std::vector<DetectorSpec> d{DetectorSpec::glrt(),        DetectorSpec::two_step_glrt(),
                                           DetectorSpec::abort(),       DetectorSpec::wabort(),
                                           DetectorSpec::tunable(0.8),  DetectorSpec::tunable(2.5)};
  return d;
}

}  // namespace

const char* to_string(SweepAxis axis) noexcept {
  switch (axis) {
    case SweepAxis::Snr: return "snr";
    case SweepAxis::Sin2psi: return "sin2psi";
    case SweepAxis::Kappa: return "kappa";
    case SweepAxis::Mesa: return "mesa";
    case SweepAxis::Point: return "point";
  }
  return "?";
}

std::vector<double> parse_grid(std::string_view text) {
  text = trim(text);
  std::vector<double> out;
  if (text.find(':') != std::string_view::npos) {
    const auto parts = split(text, ':');
    if (parts.size() != 3) throw std::invalid_argument("range grid must be min:max:step");
    const double lo = parse_double(parts[0]);
    const double hi = parse_double(parts[1]);
    const double step = parse_double(parts[2]);
    if (!(step > 0.0) || !std::isfinite(lo) || !std::isfinite(hi) || hi < lo)
      throw std::invalid_argument("range grid needs finite min <= max and step > 0");
    const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
    if (count > 100000) throw std::invalid_argument("range grid has too many points");
    for (std::size_t i = 0; i < count; ++i) out.push_back(snap(lo + static_cast<double>(i) * step));
  } else {
    for (auto item : split(text, ',')) out.push_back(parse_double(item));
  }
  if (out.empty()) throw std::invalid_argument("grid is empty");
  for (std::size_t i = 1; i < out.size(); ++i)
    if (!(out[i] > out[i - 1])) throw std::invalid_argument("grid is not strictly increasing");
  return out;
}

SweepConfig SweepConfig::defaults(SweepAxis axis) {
  SweepConfig c;
  c.axis = axis;
  c.scenario.snr_db = 17.0;
  c.scenario.sin2psi = 0.8;
  c.scenario.cos2theta = 1.0;
  c.snr_db_grid = parse_grid("0:30:2");
  c.sin2psi_grid = parse_grid("0.1:0.9:0.1");
  c.kappa_grid = parse_grid("0:3:0.25");
  c.cos2theta_grid = {0.3, 1.0};
  c.detectors = default_detectors();
  switch (axis) {
    case SweepAxis::Snr:
    case SweepAxis::Sin2psi: break;
    case SweepAxis::Kappa: c.detectors.clear(); break;
    case SweepAxis::Mesa:
      c.cos2theta_grid = parse_grid("0:1:0.1");
      c.detectors = {DetectorSpec::glrt(), DetectorSpec::abort(), DetectorSpec::wabort(),
                     DetectorSpec::tunable(0.8), DetectorSpec::tunable(2.5)};
      break;
    case SweepAxis::Point: c.detectors.push_back(DetectorSpec::aed()); break;
  }
  return c;
}

void SweepConfig::validate() const {
  try {
    scenario.validate();
  } catch (const Error& e) {
    throw ConfigError("config", 0, std::string("[scenario] ") + e.what());
  }
  require(std::isfinite(scenario.snr_db), "[scenario] snr_db must be finite");
  switch (axis) {
    case SweepAxis::Snr: require_grid(snr_db_grid, "snr_db", -300.0, 300.0); break;
    case SweepAxis::Sin2psi:
      require_grid(sin2psi_grid, "sin2psi", 0.0, 1.0);
      require(scenario.q > 0 || sin2psi_grid == std::vector<double>{1.0}, "sin2psi sweep needs q > 0");
      break;
    case SweepAxis::Kappa:
      require_grid(kappa_grid, "kappa", 0.0, 1e6);
      require_grid(cos2theta_grid, "cos2theta", 0.0, 1.0);
      break;
    case SweepAxis::Mesa:
      require_grid(snr_db_grid, "snr_db", -300.0, 300.0);
      require_grid(cos2theta_grid, "cos2theta", 0.0, 1.0);
      break;
    case SweepAxis::Point: break;
  }
  if (axis != SweepAxis::Kappa) {
    require(!detectors.empty(), "[detectors] list is empty");
    std::set<std::string> seen;
    for (const auto& d : detectors) require(seen.insert(d.label()).second, "duplicate detector " + d.label());
  }
  require(pfa > 0.0 && pfa < 1.0, "[montecarlo] pfa must lie in (0, 1)");
  require(workers >= 1, "[montecarlo] workers must be >= 1");
  if (monte_carlo) {
    require(static_cast<double>(trials_threshold) * pfa >= 10.0,
            "[montecarlo] trials_threshold must be >= 10 / pfa");
    require(trials_pd >= 1, "[montecarlo] trials_pd must be >= 1");
  }
}

std::string SweepConfig::to_text() const {
  std::ostringstream o;
  o << "# axis = " << to_string(axis) << "\n";
  o << "[scenario]\n";
  o << "n = " << scenario.n << "\nl = " << scenario.l << "\np = " << scenario.p << "\nq = " << scenario.q << "\n";
  o << "eps = " << fmt(scenario.eps) << "\nsnr_db = " << fmt(scenario.snr_db) << "\ninr_db = " << fmt(scenario.inr_db)
    << "\nsin2psi = " << fmt(scenario.sin2psi) << "\ncos2theta = " << fmt(scenario.cos2theta)
    << "\nseed = " << scenario.seed << "\n";
  o << "[sweep]\n";
  o << "snr_db = " << fmt_grid(snr_db_grid) << "\nsin2psi = " << fmt_grid(sin2psi_grid)
    << "\nkappa = " << fmt_grid(kappa_grid) << "\ncos2theta = " << fmt_grid(cos2theta_grid) << "\n";
  o << "[detectors]\nlist = ";
  for (std::size_t i = 0; i < detectors.size(); ++i) o << (i ? ", " : "") << detectors[i].label();
  o << "\n[montecarlo]\n";
  o << "enabled = " << (monte_carlo ? "true" : "false") << "\ntrials_threshold = " << trials_threshold
    << "\ntrials_pd = " << trials_pd << "\npfa = " << fmt(pfa) << "\nseed = " << seed
    << "\nfixed_interference = " << (fixed_interference ? "true" : "false") << "\n";
  // workers is deliberately absent: it never changes results.
  o << "[output]\npath = " << output << "\n";
  return o.str();
}

SweepConfig parse_config(std::string_view text, SweepAxis axis, const std::string& source) {
  SweepConfig c = SweepConfig::defaults(axis);
  std::string section;
  std::set<std::string> seen;
  int line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto end = text.find('\n', start);
    std::string_view raw = text.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start);
    start = end == std::string_view::npos ? text.size() + 1 : end + 1;
    ++line_no;
    const auto comment = raw.find_first_of("#;");
    std::string_view line = trim(comment == std::string_view::npos ? raw : raw.substr(0, comment));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(source, line_no, "malformed section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (section != "scenario" && section != "sweep" && section != "detectors" && section != "montecarlo" &&
          section != "output")
        throw ConfigError(source, line_no, "unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(source, line_no, "expected key = value");
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    if (section.empty()) throw ConfigError(source, line_no, "key '" + key + "' outside any section");
    if (!seen.insert(section + "." + key).second)
      throw ConfigError(source, line_no, "duplicate key '" + key + "' in [" + section + "]");
    try {
      bool known = true;
      if (section == "scenario") {
        auto& s = c.scenario;
        if (key == "n") s.n = parse_int(value);
        else if (key == "l") s.l = parse_int(value);
        else if (key == "p") s.p = parse_int(value);
        else if (key == "q") s.q = parse_int(value);
        else if (key == "eps") s.eps = parse_double(value);
        else if (key == "snr_db") s.snr_db = parse_double(value);
        else if (key == "inr_db") s.inr_db = parse_double(value);
        else if (key == "sin2psi") s.sin2psi = parse_double(value);
        else if (key == "cos2theta") s.cos2theta = parse_double(value);
        else if (key == "seed") s.seed = parse_unsigned<std::uint64_t>(value);
        else known = false;
      } else if (section == "sweep") {
        if (key == "snr_db") c.snr_db_grid = parse_grid(value);
        else if (key == "sin2psi") c.sin2psi_grid = parse_grid(value);
        else if (key == "kappa") c.kappa_grid = parse_grid(value);
        else if (key == "cos2theta") c.cos2theta_grid = parse_grid(value);
        else known = false;
      } else if (section == "detectors") {
        if (key == "list") {
          c.detectors.clear();
          if (!value.empty())
            for (auto item : split(value, ',')) c.detectors.push_back(DetectorSpec::parse(item));
        } else {
          known = false;
        }
      } else if (section == "montecarlo") {
        if (key == "enabled") c.monte_carlo = parse_bool(value);
        else if (key == "trials_threshold") c.trials_threshold = parse_unsigned<std::size_t>(value);
        else if (key == "trials_pd") c.trials_pd = parse_unsigned<std::size_t>(value);
        else if (key == "pfa") c.pfa = parse_double(value);
        else if (key == "seed") c.seed = parse_unsigned<std::uint64_t>(value);
        else if (key == "workers") c.workers = parse_unsigned<unsigned>(value);
        else if (key == "fixed_interference") c.fixed_interference = parse_bool(value);
        else known = false;
      } else if (section == "output") {
        if (key == "path") c.output = std::string(value);
        else known = false;
      }
      if (!known) throw ConfigError(source, line_no, "unknown key '" + key + "' in [" + section + "]");
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      throw ConfigError(source, line_no, key + ": " + e.what());
    }
  }
  return c;
}

SweepConfig load_config(const std::string& path, SweepAxis axis) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Config, path + ": cannot open config file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), axis, path);
}

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t config_hash(const SweepConfig& config) { return fnv1a(config.to_text()); }

}  // namespace adet
