#pragma once

#include "adet/scenario.hpp"
#include "adet/statistics.hpp"

namespace adet {

/// Everything the closed-form PD/PFA expressions depend on. Under H0 both
/// rho_eff and delta2 are zero; the interference power does not appear.
struct AnalyticParams {
  int n = 12;
  int l = 24;
  int p = 1;
  int q = 2;
  /// Effective SNR after interference rejection and mismatch.
  double rho_eff = 0.0;
  /// Noncentrality of the loss factor.
  double delta2 = 0.0;

  /// Throws invalid-parameter unless l-n+q+1 >= 1, n-p-q >= 1 and both
  /// noncentralities are finite and non-negative.
  void validate() const;

  AnalyticParams central() const {
    AnalyticParams out = *this;
    out.rho_eff = 0.0;
    out.delta2 = 0.0;
    return out;
  }

  /// DOFs of the complex F law of t_GLRT-I given beta: (p, l-n+q+1).
  int f_numerator_dof() const { return p; }
  int f_denominator_dof() const { return l - n + q + 1; }
  /// DOFs of the complex Beta law of the loss factor: (l-n+p+q+1, n-p-q).
  int beta_first_dof() const { return l - n + p + q + 1; }
  int beta_second_dof() const { return n - p - q; }
};

/// rho_eff and delta2 for the scenario's current SNR.
AnalyticParams esnr_params(const Scenario& scenario);

/// Parameters from the geometry targets alone:
///   rho_eff = rho sin2psi cos2theta, delta2 = rho sin2psi (1 - cos2theta).
AnalyticParams nominal_params(int n, int l, int p, int q, double snr_db, double sin2psi,
                              double cos2theta);

/// CDF of t_GLRT-I conditioned on the loss factor `beta`, under H1.
double cdf_glrt_conditional(double eta, double beta, const AnalyticParams& params);
/// 1 - cdf_glrt_conditional, summed directly so small tails keep relative accuracy.
double sf_glrt_conditional(double eta, double beta, const AnalyticParams& params);

/// H0 CDF of t_GLRT-I (full binomial sum; no beta dependence).
double cdf_glrt_central(double eta, const AnalyticParams& params);
double sf_glrt_central(double eta, const AnalyticParams& params);

/// Density of the loss factor under H0 (central complex Beta).
double pdf_beta_h0(double beta, const AnalyticParams& params);
/// Density of the loss factor under H1 with noncentrality `delta2`.
double pdf_beta_h1(double beta, double delta2, const AnalyticParams& params);
/// P(beta <= x) under H1 (params.delta2), by quadrature of the density.
double cdf_beta_h1(double x, const AnalyticParams& params);

// Detection probabilities at a fixed threshold. Each averages the conditional
// exceedance probability over the loss-factor density; loss-factor values for
// which the statistic exceeds the threshold for every t_GLRT-I contribute their
// full mass.
double pd_glrt_i(double eta, const AnalyticParams& params);
double pd_abort_i(double eta_a, const AnalyticParams& params);
double pd_wabort_i(double eta_w, const AnalyticParams& params);
double pd_twabort_i(double eta_t, double kappa, const AnalyticParams& params);
double pd_aed(double eta, const AnalyticParams& params);

// False-alarm probabilities: the same integrals with the central laws.
double pfa_glrt_i(double eta, const AnalyticParams& params);
double pfa_abort_i(double eta_a, const AnalyticParams& params);
double pfa_wabort_i(double eta_w, const AnalyticParams& params);
double pfa_twabort_i(double eta_t, double kappa, const AnalyticParams& params);
double pfa_aed(double eta, const AnalyticParams& params);

/// Dispatch on the detector. Throws invalid-parameter for 2S-GLRT-I, which has
/// no closed form.
double pd(const DetectorSpec& detector, double eta, const AnalyticParams& params);
double pfa(const DetectorSpec& detector, double eta, const AnalyticParams& params);

/// Threshold with pfa(detector, eta) = pfa_target (relative 1e-10). PFA is
/// strictly decreasing in eta; the bracket starts at [1e-8, 1] and grows
/// geometrically. Throws an inversion error if it passes 1e12.
double invert_threshold(const DetectorSpec& detector, double pfa_target,
                        const AnalyticParams& params);

}  // namespace adet
