#include "adet/statistics.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>

#include "adet/error.hpp"

namespace adet {

namespace {

// Integer exponents use repeated multiplication so kappa = 2 reproduces the
// W-ABORT-I denominator bit for bit.
double power(double base, double exponent) {
  if (exponent == std::floor(exponent) && exponent >= 0.0 && exponent <= 16.0) {
    double out = 1.0;
    for (int i = 0; i < static_cast<int>(exponent); ++i) out *= base;
    return out;
  }
  return std::pow(base, exponent);
}

std::string upper(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  out.erase(std::remove_if(out.begin(), out.end(), [](unsigned char c) { return std::isspace(c); }),
            out.end());
  return out;
}

std::string format_kappa(double kappa) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", kappa);
  return buf;
}

}  // namespace

DetectorSpec DetectorSpec::tunable(double kappa) {
  if (!(kappa >= 0.0) || !std::isfinite(kappa)) throw_invalid("kappa must be a finite non-negative number");
  return {DetectorKind::TwAbortI, kappa};
}

std::string DetectorSpec::name() const {
  switch (kind) {
    case DetectorKind::GlrtI: return "GLRT-I";
    case DetectorKind::TwoStepGlrtI: return "2S-GLRT-I";
    case DetectorKind::AbortI: return "ABORT-I";
    case DetectorKind::WAbortI: return "W-ABORT-I";
    case DetectorKind::TwAbortI: return "T-W-ABORT-I";
    case DetectorKind::Aed: return "AED";
  }
  return "?";
}

std::string DetectorSpec::label() const {
  if (kind == DetectorKind::TwAbortI) return name() + "(" + format_kappa(kappa) + ")";
  return name();
}

DetectorSpec DetectorSpec::parse(std::string_view text) {
  const std::string s = upper(text);
  if (s == "GLRT-I" || s == "GLRT") return glrt();
  if (s == "2S-GLRT-I" || s == "2S-GLRT") return two_step_glrt();
  if (s == "ABORT-I" || s == "ABORT") return abort();
  if (s == "W-ABORT-I" || s == "W-ABORT") return wabort();
  if (s == "AED") return aed();
  for (std::string_view prefix : {"T-W-ABORT-I(", "TW("}) {
    if (s.rfind(prefix, 0) == 0 && s.back() == ')') {
      const std::string num = s.substr(prefix.size(), s.size() - prefix.size() - 1);
      double kappa = 0.0;
      const auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), kappa);
      if (ec != std::errc() || ptr != num.data() + num.size())
        throw_invalid("bad kappa in detector '" + std::string(text) + "'");
      return tunable(kappa);
    }
  }
  throw_invalid("unknown detector '" + std::string(text) + "'");
}

SufficientPair sufficient_pair(const CVector& x, const CMatrix& training, const CMatrix& h_mat,
                               const CMatrix& j_mat) {
  const Index n = x.size();
  if (training.rows() != n || h_mat.rows() != n || j_mat.rows() != n)
    throw_invalid("sufficient_pair: dimension mismatch");
  const CMatrix s = training * training.adjoint();
  Eigen::LLT<CMatrix> llt(s);
  if (llt.info() != Eigen::Success)
    throw_numeric("sufficient_pair: Cholesky of training matrix S failed (S singular)");
  const auto lower = llt.matrixL();

  const Index q = j_mat.cols();
  const Index p = h_mat.cols();
  CMatrix b(n, q + p);
  b << j_mat, h_mat;
  const CMatrix b_w = lower.solve(b);
  const CVector x_w = lower.solve(x);

  // Householder QR keeps the nesting: the first q columns of Q span J~ and
  // the next p span P_perp_J~ H~.
  Eigen::HouseholderQR<CMatrix> qr(b_w);
  const CMatrix basis = qr.householderQ() * CMatrix::Identity(n, q + p);
  const CVector coeff = basis.adjoint() * x_w;
  const double residual = (x_w - basis * coeff).squaredNorm();
  const double t_h = coeff.tail(p).squaredNorm();
  return {t_h + residual, t_h};
}

SufficientPair sufficient_pair(const DataBatch& batch, const CMatrix& h_mat, const CMatrix& j_mat) {
  return sufficient_pair(batch.x, batch.training, h_mat, j_mat);
}

double loss_factor(SufficientPair pair) { return 1.0 / (1.0 + pair.t_j - pair.t_h); }

double detector_statistic(SufficientPair pair, const DetectorSpec& spec) {
  const double d = 1.0 + pair.t_j - pair.t_h;
  switch (spec.kind) {
    case DetectorKind::GlrtI: return pair.t_h / d;
    case DetectorKind::TwoStepGlrtI: return pair.t_h;
    case DetectorKind::AbortI: return (1.0 + pair.t_h) / d;
    case DetectorKind::WAbortI: return (1.0 + pair.t_j) / (d * d);
    case DetectorKind::TwAbortI: return (1.0 + pair.t_j) / power(d, spec.kappa);
    case DetectorKind::Aed: return pair.t_j;
  }
  return 0.0;
}

}  // namespace adet
