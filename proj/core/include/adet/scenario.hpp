#pragma once

#include <cstdint>

#include "adet/linalg.hpp"
#include "adet/rng.hpp"

namespace adet {

/// Everything needed to build a Scenario. `snr_db` and `inr_db` accept
/// -infinity for "absent".
struct ScenarioConfig {
  int n = 12;
  int l = 24;
  int p = 1;
  int q = 2;
  double eps = 0.9;
  double snr_db = 17.0;
  double inr_db = 10.0;
  double sin2psi = 0.8;
  double cos2theta = 1.0;
  std::uint64_t seed = 1;

  void validate() const;
};

/// A complete problem instance: covariance, subspaces, actual signal and the
/// mismatch geometry they realize.
struct Scenario {
  int n = 0;
  int l = 0;
  int p = 0;
  int q = 0;
  CMatrix r_cov;
  CMatrix h_mat;
  CMatrix j_mat;
  CVector s0;
  double eps = 0.0;
  double inr_db = 0.0;
  double snr_db = 0.0;
  double sin2psi = 0.0;
  double cos2theta = 0.0;
  std::uint64_t seed = 0;

  /// Lower Cholesky factor of r_cov, used for noise sampling.
  CMatrix r_chol;
  /// Unit-SNR actual signal (s0 / sqrt(rho_snr)); lets the SNR change without
  /// touching the geometry.
  CVector s0_unit;
  /// Interference realization at 0 dB INR drawn at construction; scaled by
  /// the INR when trials keep the interference coordinate fixed.
  CVector interference_unit;

  /// Same geometry, different SNR.
  Scenario with_snr(double snr_db) const;
  /// Same geometry, different INR.
  Scenario with_inr(double inr_db) const;
  /// Noise covariance scaled by `factor` > 0; signal and interference are
  /// scaled along with it so SNR and INR are unchanged.
  Scenario with_covariance_scale(double factor) const;
};

Scenario make_scenario(const ScenarioConfig& config);

double db_to_linear(double db);

/// R(i,j) = eps^|i-j|.
CMatrix covariance_exponential(int n, double eps);

/// N x q matrix with i.i.d. CN(0,1) entries, re-drawn until full rank.
CMatrix generate_interference_subspace(int n, int q, Rng& rng);

/// Actual signal with the requested sin^2(psi) and SNR.
CVector build_actual_signal(const CMatrix& r_cov, const CMatrix& j_mat, double sin2psi_target,
                            double snr_db, Rng& rng);

/// Nominal N x p signal matrix realizing the requested cos^2(theta) for `s0`.
CMatrix build_nominal_matrix(const CMatrix& r_cov, const CMatrix& j_mat, const CVector& s0,
                             double cos2theta_target, int p, Rng& rng);

/// j = c J phi with c chosen so that j^H R^-1 j equals the linear INR.
/// inr_db = -inf (or q = 0) gives the zero vector.
CVector build_interference_vector(const CMatrix& r_cov, const CMatrix& j_mat, double inr_db,
                                  Rng& rng);

enum class Hypothesis { H0, H1 };

struct DataBatch {
  CVector x;
  /// N x L, one training snapshot per column.
  CMatrix training;
  Hypothesis hypothesis = Hypothesis::H0;
  std::uint64_t seed = 0;
};

/// Draws test and training data from the signal model. Under H1 the actual
/// signal s0 is added, which is how mismatch enters. The interference
/// coordinate is re-drawn per call unless `fixed_interference` is set.
DataBatch sample_batch(const Scenario& scenario, Hypothesis hypothesis, std::uint64_t seed,
                       bool fixed_interference = false);

struct MismatchMetrics {
  double sin2psi = 0.0;
  double cos2theta = 0.0;
  double cos2phi = 0.0;
  double rho_snr = 0.0;
  double rho_eff = 0.0;
  double delta2 = 0.0;
};

/// All metrics from the whitened quantities R^-1/2 s0, R^-1/2 H, R^-1/2 J.
/// Ratio metrics are NaN when their denominator vanishes.
MismatchMetrics mismatch_metrics(const CMatrix& r_cov, const CMatrix& h_mat, const CMatrix& j_mat,
                                 const CVector& s0);

}  // namespace adet
