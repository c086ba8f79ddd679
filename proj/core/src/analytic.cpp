#include "adet/analytic.hpp"

#include <algorithm>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <limits>
#include <vector>

#include "adet/error.hpp"
#include "adet/quadrature.hpp"
#include "adet/special.hpp"

namespace adet {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double xlogy(double x, double y) { return x == 0.0 ? 0.0 : x * std::log(y); }

// Poisson(x) lower sums cdf[k] = sum_{m<=k} pmf(m) and upper tails
// tail[k] = sum_{m>k} pmf(m) for k = 0..kmax. cdf[k] is IG_{k+1}(x).
struct PoissonSums {
  std::vector<double> cdf;
  std::vector<double> tail;
};

PoissonSums poisson_sums(double x, int kmax) {
  PoissonSums out;
  out.cdf.assign(static_cast<std::size_t>(kmax + 1), 1.0);
  out.tail.assign(static_cast<std::size_t>(kmax + 1), 0.0);
  if (x <= 0.0) return out;
  if (std::isinf(x)) {
    std::fill(out.cdf.begin(), out.cdf.end(), 0.0);
    std::fill(out.tail.begin(), out.tail.end(), 1.0);
    return out;
  }
  const double log_x = std::log(x);
  std::vector<double> pmf(static_cast<std::size_t>(kmax + 1));
  double log_term = -x;
  for (int m = 0; m <= kmax; ++m) {
    if (m > 0) log_term += log_x - std::log(static_cast<double>(m));
    pmf[static_cast<std::size_t>(m)] = std::exp(log_term);
  }
  double acc = 0.0;
  for (int k = 0; k <= kmax; ++k) {
    acc += pmf[static_cast<std::size_t>(k)];
    out.cdf[static_cast<std::size_t>(k)] = std::min(1.0, acc);
  }
  if (x > kmax + 1.0) {
    for (int k = 0; k <= kmax; ++k) out.tail[static_cast<std::size_t>(k)] = 1.0 - out.cdf[static_cast<std::size_t>(k)];
  } else {
    out.tail[static_cast<std::size_t>(kmax)] = incomplete_gamma_reg_complement(kmax + 1, x);
    for (int k = kmax - 1; k >= 0; --k)
      out.tail[static_cast<std::size_t>(k)] =
          out.tail[static_cast<std::size_t>(k + 1)] + pmf[static_cast<std::size_t>(k + 1)];
  }
  return out;
}

// Shared evaluation of the conditional CDF and its complement.
//   P1(eta) = sum_{k=0}^{M-1} C(T, k+p) b^{k+p} (1-b)^{T-k-p} IG_{k+1}(x)
// with T = l-n+p+q, M = l-n+q+1, b = eta/(1+eta), x = rho_eff beta/(1+eta).
struct CdfPair {
  double cdf;
  double sf;
};

CdfPair glrt_cdf_pair(double eta, double noncentrality, const AnalyticParams& prm) {
  if (!(eta > 0.0)) return {0.0, 1.0};
  if (std::isinf(eta)) return {1.0, 0.0};
  const int p = prm.p;
  const int m_dof = prm.f_denominator_dof();
  const int total = m_dof + p - 1;
  const double log_eta = std::log(eta);
  const double log_1p = std::log1p(eta);
  auto log_weight = [&](int j) { return log_binomial(total, j) + j * log_eta - total * log_1p; };

  const PoissonSums ps = poisson_sums(noncentrality / (1.0 + eta), m_dof - 1);
  double cdf = 0.0;
  double sf = 0.0;
  for (int j = 0; j < p; ++j) sf += std::exp(log_weight(j));
  for (int k = 0; k < m_dof; ++k) {
    const double w = std::exp(log_weight(k + p));
    cdf += w * ps.cdf[static_cast<std::size_t>(k)];
    sf += w * ps.tail[static_cast<std::size_t>(k)];
  }
  return {std::clamp(cdf, 0.0, 1.0), std::clamp(sf, 0.0, 1.0)};
}

double log_pdf_beta_central(double beta, const AnalyticParams& prm) {
  const double a = prm.beta_first_dof();
  const double b = prm.beta_second_dof();
  const double log_norm = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b);
  return log_norm + xlogy(a - 1.0, beta) + xlogy(b - 1.0, 1.0 - beta);
}

double pdf_beta(double beta, double delta2, const AnalyticParams& prm) {
  if (!(beta >= 0.0 && beta <= 1.0)) return 0.0;
  const double log_f0 = log_pdf_beta_central(beta, prm);
  if (delta2 == 0.0) return std::exp(log_f0);
  const int a = prm.beta_first_dof();
  const int b = prm.beta_second_dof();
  const double log_d = std::log(delta2);
  const double log_1mb = beta < 1.0 ? std::log1p(-beta) : -kInf;
  std::vector<double> terms;
  terms.reserve(static_cast<std::size_t>(a + 1));
  for (int k = 0; k <= a; ++k) {
    const double lt = log_binomial(a, k) + log_factorial_ratio(b, k) + k * log_d +
                      (k == 0 ? 0.0 : k * log_1mb);
    terms.push_back(lt);
  }
  const double peak = *std::max_element(terms.begin(), terms.end());
  if (std::isinf(peak)) return 0.0;
  std::sort(terms.begin(), terms.end());
  double sum = 0.0;
  for (double lt : terms) sum += std::exp(lt - peak);
  return std::exp(log_f0 - delta2 * beta + peak + std::log(sum));
}

// PD (or PFA, with central params) for a statistic that exceeds the threshold
// given beta iff t_GLRT-I > arg(beta). arg <= 0 means certain exceedance.
// `kink` is where arg crosses zero inside (0,1), or NaN if it does not.
template <class Arg>
double average_over_beta(const AnalyticParams& prm, Arg&& arg, double kink) {
  auto integrand = [&](double beta) {
    const double density = pdf_beta(beta, prm.delta2, prm);
    if (density == 0.0) return 0.0;
    const double g = arg(beta);
    if (!(g > 0.0)) return density;
    return glrt_cdf_pair(g, prm.rho_eff * beta, prm).sf * density;
  };
  double total = 0.0;
  if (std::isfinite(kink) && kink > 0.0 && kink < 1.0) {
    total = integrate(integrand, 0.0, kink).value + integrate(integrand, kink, 1.0).value;
  } else {
    total = integrate(integrand, 0.0, 1.0).value;
  }
  return std::clamp(total, 0.0, 1.0);
}

constexpr double kNoKink = std::numeric_limits<double>::quiet_NaN();

}  // namespace

void AnalyticParams::validate() const {
  if (n < 1 || l < 1 || p < 1 || q < 0) throw_invalid("analytic params: dimensions must be positive (q >= 0)");
  if (f_denominator_dof() < 1) throw_invalid("analytic params: need l - n + q + 1 >= 1");
  if (beta_second_dof() < 1) throw_invalid("analytic params: need n - p - q >= 1");
  if (!(rho_eff >= 0.0) || !std::isfinite(rho_eff)) throw_invalid("analytic params: rho_eff must be finite and >= 0");
  if (!(delta2 >= 0.0) || !std::isfinite(delta2)) throw_invalid("analytic params: delta2 must be finite and >= 0");
}

AnalyticParams esnr_params(const Scenario& scenario) {
  AnalyticParams out;
  out.n = scenario.n;
  out.l = scenario.l;
  out.p = scenario.p;
  out.q = scenario.q;
  const MismatchMetrics m = mismatch_metrics(scenario.r_cov, scenario.h_mat, scenario.j_mat, scenario.s0);
  out.rho_eff = std::max(0.0, m.rho_eff);
  out.delta2 = std::max(0.0, m.delta2);
  return out;
}

AnalyticParams nominal_params(int n, int l, int p, int q, double snr_db, double sin2psi,
                              double cos2theta) {
  AnalyticParams out;
  out.n = n;
  out.l = l;
  out.p = p;
  out.q = q;
  const double rho = std::isinf(snr_db) && snr_db < 0.0 ? 0.0 : std::pow(10.0, snr_db / 10.0);
  out.rho_eff = rho * sin2psi * cos2theta;
  out.delta2 = rho * sin2psi * (1.0 - cos2theta);
  out.validate();
  return out;
}

double cdf_glrt_conditional(double eta, double beta, const AnalyticParams& params) {
  params.validate();
  return glrt_cdf_pair(eta, params.rho_eff * beta, params).cdf;
}

double sf_glrt_conditional(double eta, double beta, const AnalyticParams& params) {
  params.validate();
  return glrt_cdf_pair(eta, params.rho_eff * beta, params).sf;
}

double cdf_glrt_central(double eta, const AnalyticParams& params) {
  params.validate();
  return glrt_cdf_pair(eta, 0.0, params).cdf;
}

double sf_glrt_central(double eta, const AnalyticParams& params) {
  params.validate();
  return glrt_cdf_pair(eta, 0.0, params).sf;
}

double pdf_beta_h0(double beta, const AnalyticParams& params) {
  params.validate();
  return pdf_beta(beta, 0.0, params);
}

double pdf_beta_h1(double beta, double delta2, const AnalyticParams& params) {
  params.validate();
  if (!(delta2 >= 0.0)) throw_invalid("pdf_beta_h1: delta2 must be >= 0");
  return pdf_beta(beta, delta2, params);
}

double cdf_beta_h1(double x, const AnalyticParams& params) {
  params.validate();
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double d2 = params.delta2;
  return std::clamp(integrate([&](double b) { return pdf_beta(b, d2, params); }, 0.0, x).value, 0.0, 1.0);
}

double pd_glrt_i(double eta, const AnalyticParams& params) {
  params.validate();
  if (!(eta > 0.0)) return 1.0;
  return average_over_beta(params, [&](double) { return eta; }, kNoKink);
}

double pd_abort_i(double eta_a, const AnalyticParams& params) {
  params.validate();
  // t = t_GLRT-I + beta, beta in (0,1].
  if (!(eta_a > 0.0)) return 1.0;
  return average_over_beta(params, [&](double beta) { return eta_a - beta; }, eta_a);
}

double pd_wabort_i(double eta_w, const AnalyticParams& params) {
  params.validate();
  // t = (1 + t_GLRT-I) beta.
  if (!(eta_w > 0.0)) return 1.0;
  return average_over_beta(params, [&](double beta) { return eta_w / beta - 1.0; }, eta_w);
}

double pd_twabort_i(double eta_t, double kappa, const AnalyticParams& params) {
  params.validate();
  if (!(kappa >= 0.0) || !std::isfinite(kappa)) throw_invalid("pd_twabort_i: kappa must be finite and >= 0");
  // t = beta^(kappa-1) (1 + t_GLRT-I): exceed iff t_GLRT-I > eta beta^(1-kappa) - 1.
  if (kappa <= 1.0 && eta_t <= 1.0) return 1.0;
  if (kappa == 1.0) return average_over_beta(params, [&](double) { return eta_t - 1.0; }, kNoKink);
  const double exponent = 1.0 - kappa;
  double kink = kNoKink;
  if (kappa < 1.0) {
    kink = std::pow(eta_t, -1.0 / exponent);
  } else if (eta_t < 1.0) {
    kink = std::pow(eta_t, 1.0 / (kappa - 1.0));
  }
  return average_over_beta(
      params, [&](double beta) { return eta_t * std::pow(beta, exponent) - 1.0; }, kink);
}

double pd_aed(double eta, const AnalyticParams& params) {
  // t_AED = t_j and the kappa = 0 statistic is 1 + t_j.
  return pd_twabort_i(1.0 + eta, 0.0, params);
}

double pfa_glrt_i(double eta, const AnalyticParams& params) {
  // Under H0, t_GLRT-I does not depend on beta.
  return sf_glrt_central(eta, params);
}

double pfa_abort_i(double eta_a, const AnalyticParams& params) { return pd_abort_i(eta_a, params.central()); }

double pfa_wabort_i(double eta_w, const AnalyticParams& params) { return pd_wabort_i(eta_w, params.central()); }

double pfa_twabort_i(double eta_t, double kappa, const AnalyticParams& params) {
  return pd_twabort_i(eta_t, kappa, params.central());
}

double pfa_aed(double eta, const AnalyticParams& params) { return pd_aed(eta, params.central()); }

double pd(const DetectorSpec& detector, double eta, const AnalyticParams& params) {
  switch (detector.kind) {
    case DetectorKind::GlrtI: return pd_glrt_i(eta, params);
    case DetectorKind::AbortI: return pd_abort_i(eta, params);
    case DetectorKind::WAbortI: return pd_wabort_i(eta, params);
    case DetectorKind::TwAbortI: return pd_twabort_i(eta, detector.kappa, params);
    case DetectorKind::Aed: return pd_aed(eta, params);
    case DetectorKind::TwoStepGlrtI: break;
  }
  throw_invalid("no closed-form PD for " + detector.label());
}

double pfa(const DetectorSpec& detector, double eta, const AnalyticParams& params) {
  switch (detector.kind) {
    case DetectorKind::GlrtI: return pfa_glrt_i(eta, params);
    case DetectorKind::AbortI: return pfa_abort_i(eta, params);
    case DetectorKind::WAbortI: return pfa_wabort_i(eta, params);
    case DetectorKind::TwAbortI: return pfa_twabort_i(eta, detector.kappa, params);
    case DetectorKind::Aed: return pfa_aed(eta, params);
    case DetectorKind::TwoStepGlrtI: break;
  }
  throw_invalid("no closed-form PFA for " + detector.label());
}

double invert_threshold(const DetectorSpec& detector, double pfa_target, const AnalyticParams& params) {
  if (!(pfa_target > 0.0 && pfa_target < 1.0)) throw_invalid("invert_threshold: pfa target must lie in (0, 1)");
  if (!detector.has_analytic()) throw_invalid("invert_threshold: no closed-form PFA for " + detector.label());
  const AnalyticParams central = params.central();
  auto excess = [&](double eta) { return pfa(detector, eta, central) - pfa_target; };

  constexpr double kMaxBracket = 1e12;
  double lo = 1e-8;
  double hi = 1.0;
  double f_lo = excess(lo);
  double f_hi = excess(hi);
  while (f_lo < 0.0) {
    hi = lo;
    f_hi = f_lo;
    lo *= 1e-2;
    if (lo < 1e-300) throw Error(ErrorKind::Inversion, "invert_threshold: pfa target above attainable range");
    f_lo = excess(lo);
  }
  while (f_hi > 0.0) {
    lo = hi;
    f_lo = f_hi;
    hi *= 2.0;
    if (hi > kMaxBracket)
      throw Error(ErrorKind::Inversion, "invert_threshold: bracket exceeded 1e12 for " + detector.label());
    f_hi = excess(hi);
  }
  if (f_hi == 0.0) return hi;
  if (f_lo == 0.0) return lo;

  // Solve in log-PFA so the stopping rule is relative.
  const double log_target = std::log(pfa_target);
  auto log_excess = [&](double eta) {
    const double v = pfa(detector, eta, central);
    return v > 0.0 ? std::log(v) - log_target : -kInf;
  };
  std::uintmax_t max_iter = 200;
  const auto [a, b] = boost::math::tools::toms748_solve(
      log_excess, lo, hi, std::log(f_lo + pfa_target) - log_target,
      std::log(f_hi + pfa_target) - log_target, boost::math::tools::eps_tolerance<double>(50), max_iter);
  const double eta = 0.5 * (a + b);
  const double achieved = pfa(detector, eta, central);
  if (std::abs(achieved - pfa_target) > 1e-10 * pfa_target) {
    // The bracket endpoints may be closer than the midpoint.
    const double fa = std::abs(pfa(detector, a, central) - pfa_target);
    const double fb = std::abs(pfa(detector, b, central) - pfa_target);
    return fa < fb ? a : b;
  }
  return eta;
}

}  // namespace adet
