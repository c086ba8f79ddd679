#pragma once

#include <string>
#include <string_view>

#include "adet/linalg.hpp"
#include "adet/scenario.hpp"

namespace adet {

/// The two quadratic forms every detector here is built from.
///   t_j: energy of the quasi-whitened test vector after interference rejection
///   t_h: the part of t_j inside the interference-rejected signal subspace
/// Always 0 <= t_h <= t_j.
struct SufficientPair {
  double t_j = 0.0;
  double t_h = 0.0;
};

enum class DetectorKind { GlrtI, TwoStepGlrtI, AbortI, WAbortI, TwAbortI, Aed };

struct DetectorSpec {
  DetectorKind kind = DetectorKind::GlrtI;
  /// Tunable exponent; only meaningful for TwAbortI.
  double kappa = 0.0;

  static DetectorSpec glrt() { return {DetectorKind::GlrtI, 0.0}; }
  static DetectorSpec two_step_glrt() { return {DetectorKind::TwoStepGlrtI, 0.0}; }
  static DetectorSpec abort() { return {DetectorKind::AbortI, 0.0}; }
  static DetectorSpec wabort() { return {DetectorKind::WAbortI, 0.0}; }
  static DetectorSpec tunable(double kappa);
  static DetectorSpec aed() { return {DetectorKind::Aed, 0.0}; }

  /// "GLRT-I", "2S-GLRT-I", "ABORT-I", "W-ABORT-I", "T-W-ABORT-I", "AED".
  std::string name() const;
  /// name() plus "(kappa)" for the tunable detector, e.g. "T-W-ABORT-I(0.8)".
  std::string label() const;
  /// Inverse of label(); also accepts "TW(0.8)" and case-insensitive names.
  static DetectorSpec parse(std::string_view text);

  /// True when a closed-form PD/PFA exists (everything except 2S-GLRT-I).
  bool has_analytic() const { return kind != DetectorKind::TwoStepGlrtI; }

  friend bool operator==(const DetectorSpec&, const DetectorSpec&) = default;
};

/// Computes (t_j, t_h) with every quasi-whitening expressed through solves on
/// the Cholesky factor of S = sum x_l x_l^H. Throws a numeric error when S is
/// singular.
SufficientPair sufficient_pair(const CVector& x, const CMatrix& training, const CMatrix& h_mat,
                               const CMatrix& j_mat);
SufficientPair sufficient_pair(const DataBatch& batch, const CMatrix& h_mat, const CMatrix& j_mat);

double detector_statistic(SufficientPair pair, const DetectorSpec& spec);

/// beta = 1 / (1 + t_j - t_h), in (0, 1].
double loss_factor(SufficientPair pair);

}  // namespace adet
