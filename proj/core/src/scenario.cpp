#include "adet/scenario.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "adet/error.hpp"

namespace adet {

namespace {

constexpr int kMaxRedraws = 100;
constexpr int kMaxBisections = 200;
constexpr double kMetricTolerance = 1e-12;
constexpr double kAcceptTolerance = 1e-10;

[[noreturn]] void throw_construction(const std::string& what) {
  throw Error(ErrorKind::Construction, what);
}

// P_perp(basis) v, with basis possibly empty.
CVector project_out(const CMatrix& basis, const CVector& v) {
  if (basis.cols() == 0) return v;
  const CMatrix q = orthonormal_basis(basis);
  return v - q * (q.adjoint() * v);
}

// Orthonormal basis of P_perp_J H; zero columns when it is rank deficient.
CMatrix rejected_signal_basis(const CMatrix& hbar, const CMatrix& jbar) {
  CMatrix a = hbar;
  if (jbar.cols() > 0) {
    const CMatrix qj = orthonormal_basis(jbar);
    a -= qj * (qj.adjoint() * hbar);
  }
  if (!full_column_rank(a)) return CMatrix(hbar.rows(), 0);
  return orthonormal_basis(a);
}

// v^H P_{P_perp_J H} v for whitened quantities; NaN when P_perp_J H is rank deficient.
double energy_in_rejected_subspace(const CMatrix& hbar, const CMatrix& jbar, const CVector& v) {
  const CMatrix qa = rejected_signal_basis(hbar, jbar);
  if (qa.cols() == 0) return std::numeric_limits<double>::quiet_NaN();
  return (qa.adjoint() * v).squaredNorm();
}

double sin2psi_whitened(const CVector& sbar, const CMatrix& jbar) {
  return project_out(jbar, sbar).squaredNorm() / sbar.squaredNorm();
}

double cos2theta_whitened(const CVector& sbar, const CMatrix& hbar, const CMatrix& jbar) {
  const CVector z = project_out(jbar, sbar);
  return energy_in_rejected_subspace(hbar, jbar, z) / z.squaredNorm();
}

// Finds x in [0,1] with metric(x) = target, given metric(0) and metric(1)
// on opposite sides of the target. Bisection first; a 1e-3 grid scan locates
// a finite sign change if bisection lands on non-finite values.
template <class Metric>
double solve_on_unit_interval(Metric&& metric, double target, const char* what) {
  auto f = [&](double x) { return metric(x) - target; };
  const double f0 = f(0.0);
  const double f1 = f(1.0);
  if (std::abs(f0) <= kMetricTolerance) return 0.0;
  if (std::abs(f1) <= kMetricTolerance) return 1.0;
  if (!std::isfinite(f0) || !std::isfinite(f1) || (f0 > 0) == (f1 > 0))
    throw_construction(std::string(what) + ": endpoints do not bracket the target");

  auto bisect = [&](double lo, double flo, double hi) {
    double best = lo;
    double best_err = std::abs(flo);
    for (int it = 0; it < kMaxBisections; ++it) {
      const double mid = 0.5 * (lo + hi);
      const double fm = f(mid);
      if (!std::isfinite(fm)) return std::numeric_limits<double>::quiet_NaN();
      if (std::abs(fm) < best_err) {
        best = mid;
        best_err = std::abs(fm);
      }
      if (best_err <= kMetricTolerance || mid == lo || mid == hi) break;
      if ((fm > 0) == (flo > 0)) {
        lo = mid;
        flo = fm;
      } else {
        hi = mid;
      }
    }
    return best_err <= kAcceptTolerance ? best : std::numeric_limits<double>::quiet_NaN();
  };

  double x = bisect(0.0, f0, 1.0);
  if (std::isfinite(x)) return x;

  constexpr int kGrid = 1000;
  double prev_x = 0.0;
  double prev_f = f0;
  for (int k = 1; k <= kGrid; ++k) {
    const double gx = static_cast<double>(k) / kGrid;
    const double gf = f(gx);
    if (!std::isfinite(gf)) continue;
    if ((gf > 0) != (prev_f > 0)) {
      x = bisect(prev_x, prev_f, gx);
      if (std::isfinite(x)) return x;
    }
    prev_x = gx;
    prev_f = gf;
  }
  throw_construction(std::string(what) + ": target unreachable within tolerance");
}

CVector interference_from_coordinates(const CMatrix& r_chol, const CMatrix& j_mat,
                                      const CVector& phi, double inr_linear) {
  const CVector jv = j_mat * phi;
  const double energy = r_chol.triangularView<Eigen::Lower>().solve(jv).squaredNorm();
  return std::sqrt(inr_linear / energy) * jv;
}

}  // namespace

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

void ScenarioConfig::validate() const {
  if (n < 1) throw_invalid("n must be >= 1");
  if (l < n) throw_invalid("l must be >= n so the training covariance is invertible");
  if (p < 1) throw_invalid("p must be >= 1");
  if (q < 0) throw_invalid("q must be >= 0");
  if (p + q > n) throw_invalid("p + q must not exceed n");
  if (!(eps >= 0.0 && eps < 1.0)) throw_invalid("eps must lie in [0, 1)");
  if (!(sin2psi >= 0.0 && sin2psi <= 1.0)) throw_invalid("sin2psi must lie in [0, 1]");
  if (!(cos2theta >= 0.0 && cos2theta <= 1.0)) throw_invalid("cos2theta must lie in [0, 1]");
  if (q == 0 && sin2psi != 1.0) throw_invalid("sin2psi must be 1 when there is no interference (q = 0)");
  if (std::isnan(snr_db) || snr_db == std::numeric_limits<double>::infinity())
    throw_invalid("snr_db must be finite or -inf");
  if (std::isnan(inr_db) || inr_db == std::numeric_limits<double>::infinity())
    throw_invalid("inr_db must be finite or -inf");
}

CMatrix covariance_exponential(int n, double eps) {
  if (n < 1) throw_invalid("covariance_exponential: n must be >= 1");
  if (!(eps >= 0.0 && eps < 1.0)) throw_invalid("covariance_exponential: eps must lie in [0, 1)");
  CMatrix r(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) r(i, j) = std::pow(eps, std::abs(i - j));
  return r;
}

CMatrix generate_interference_subspace(int n, int q, Rng& rng) {
  if (q < 1 || q > n) throw_invalid("generate_interference_subspace: need 1 <= q <= n");
  for (int attempt = 0; attempt < kMaxRedraws; ++attempt) {
    CMatrix j = standard_complex_normal(n, q, rng);
    if (full_column_rank(j)) return j;
  }
  throw_construction("generate_interference_subspace: no full-rank draw after 100 attempts");
}

CVector build_actual_signal(const CMatrix& r_cov, const CMatrix& j_mat, double sin2psi_target,
                            double snr_db, Rng& rng) {
  if (!(sin2psi_target >= 0.0 && sin2psi_target <= 1.0))
    throw_invalid("build_actual_signal: sin2psi target must lie in [0, 1]");
  const Index n = r_cov.rows();
  const CMatrix r_sqrt = hermitian_sqrt(r_cov);
  const CMatrix r_isqrt = hermitian_inv_sqrt(r_cov);
  const double rho = snr_db == -std::numeric_limits<double>::infinity() ? 0.0 : db_to_linear(snr_db);

  CVector sbar;
  if (j_mat.cols() == 0) {
    if (sin2psi_target != 1.0) throw_invalid("build_actual_signal: sin2psi is 1 without interference");
    sbar = standard_complex_normal(n, rng);
  } else {
    if (j_mat.cols() >= n) throw_invalid("build_actual_signal: need q < n");
    const CMatrix jbar = r_isqrt * j_mat;
    if (!full_column_rank(jbar)) throw_numeric("build_actual_signal: J is rank deficient");
    const CVector j0 = jbar.col(0);
    Eigen::JacobiSVD<CMatrix> svd(jbar, Eigen::ComputeFullU);
    const CVector j1 = svd.matrixU().col(n - 1);
    auto blend = [&](double r) -> CVector { return r * j0 + (1.0 - r) * j1; };
    const double r = solve_on_unit_interval(
        [&](double x) { return sin2psi_whitened(blend(x), jbar); }, sin2psi_target,
        "build_actual_signal");
    sbar = blend(r);
  }
  sbar *= std::sqrt(rho) / sbar.norm();
  return r_sqrt * sbar;
}

CMatrix build_nominal_matrix(const CMatrix& r_cov, const CMatrix& j_mat, const CVector& s0,
                             double cos2theta_target, int p, Rng& rng) {
  if (!(cos2theta_target >= 0.0 && cos2theta_target <= 1.0))
    throw_invalid("build_nominal_matrix: cos2theta target must lie in [0, 1]");
  const Index n = r_cov.rows();
  if (p < 1 || p + j_mat.cols() > n) throw_invalid("build_nominal_matrix: need p >= 1 and p + q <= n");
  const CMatrix r_sqrt = hermitian_sqrt(r_cov);
  const CMatrix r_isqrt = hermitian_inv_sqrt(r_cov);
  const CMatrix jbar = r_isqrt * j_mat;
  CVector sbar = r_isqrt * s0;
  const double s_norm = sbar.norm();
  if (!(s_norm > 0.0)) throw_invalid("build_nominal_matrix: s0 must be nonzero");
  sbar /= s_norm;

  const CVector z = project_out(jbar, sbar);
  if (z.norm() <= 1e-10) throw_invalid("build_nominal_matrix: s0 lies in range(J) (sin2psi = 0)");
  Eigen::JacobiSVD<CMatrix> svd(z, Eigen::ComputeFullU);
  const CMatrix w1 = svd.matrixU().rightCols(p);

  CMatrix combined(n, p + j_mat.cols());
  for (int attempt = 0; attempt < kMaxRedraws; ++attempt) {
    CMatrix h0(n, p);
    h0.col(0) = sbar;
    if (p > 1) h0.rightCols(p - 1) = standard_complex_normal(n, p - 1, rng);
    auto blend = [&](double a) -> CMatrix { return a * h0 + (1.0 - a) * w1; };
    double alpha = 0.0;
    try {
      alpha = solve_on_unit_interval(
          [&](double a) { return cos2theta_whitened(sbar, blend(a), jbar); }, cos2theta_target,
          "build_nominal_matrix");
    } catch (const Error&) {
      if (attempt + 1 == kMaxRedraws) throw;
      continue;
    }
    const CMatrix hbar = blend(alpha);
    combined << hbar, jbar;
    if (full_column_rank(combined)) return r_sqrt * hbar;
  }
  throw_construction("build_nominal_matrix: [H, J] rank deficient after 100 attempts");
}

CVector build_interference_vector(const CMatrix& r_cov, const CMatrix& j_mat, double inr_db,
                                  Rng& rng) {
  const Index n = r_cov.rows();
  if (j_mat.cols() == 0 || inr_db == -std::numeric_limits<double>::infinity())
    return CVector::Zero(n);
  const CMatrix r_chol = cholesky_lower(r_cov);
  for (int attempt = 0; attempt < kMaxRedraws; ++attempt) {
    const CVector phi = standard_complex_normal(j_mat.cols(), rng);
    if (phi.squaredNorm() == 0.0) continue;
    return interference_from_coordinates(r_chol, j_mat, phi, db_to_linear(inr_db));
  }
  throw_construction("build_interference_vector: zero interference coordinate");
}

Scenario make_scenario(const ScenarioConfig& config) {
  config.validate();
  Scenario sc;
  sc.n = config.n;
  sc.l = config.l;
  sc.p = config.p;
  sc.q = config.q;
  sc.eps = config.eps;
  sc.inr_db = config.inr_db;
  sc.sin2psi = config.sin2psi;
  sc.cos2theta = config.cos2theta;
  sc.seed = config.seed;

  Rng rng = make_rng(config.seed);
  sc.r_cov = covariance_exponential(config.n, config.eps);
  sc.r_chol = cholesky_lower(sc.r_cov);
  sc.j_mat = config.q > 0 ? generate_interference_subspace(config.n, config.q, rng)
                          : CMatrix(config.n, 0);
  sc.s0_unit = build_actual_signal(sc.r_cov, sc.j_mat, config.sin2psi, 0.0, rng);

  if (config.sin2psi == 0.0) {
    // No signal energy survives interference rejection, so cos2theta is
    // undefined; any nominal matrix with [H, J] full rank will do.
    CMatrix combined(config.n, config.p + config.q);
    for (int attempt = 0;; ++attempt) {
      if (attempt == kMaxRedraws) throw_construction("make_scenario: [H, J] rank deficient");
      sc.h_mat = standard_complex_normal(config.n, config.p, rng);
      combined << sc.h_mat, sc.j_mat;
      if (full_column_rank(combined)) break;
    }
  } else {
    sc.h_mat = build_nominal_matrix(sc.r_cov, sc.j_mat, sc.s0_unit, config.cos2theta, config.p, rng);
  }
  sc.interference_unit = build_interference_vector(sc.r_cov, sc.j_mat, 0.0, rng);
  return sc.with_snr(config.snr_db);
}

Scenario Scenario::with_snr(double db) const {
  Scenario out = *this;
  out.snr_db = db;
  const double rho = db == -std::numeric_limits<double>::infinity() ? 0.0 : db_to_linear(db);
  out.s0 = std::sqrt(rho) * s0_unit;
  return out;
}

Scenario Scenario::with_inr(double db) const {
  Scenario out = *this;
  out.inr_db = db;
  return out;
}

Scenario Scenario::with_covariance_scale(double factor) const {
  if (!(factor > 0.0)) throw_invalid("covariance scale must be positive");
  Scenario out = *this;
  const double root = std::sqrt(factor);
  out.r_cov *= factor;
  out.r_chol *= root;
  out.s0 *= root;
  out.s0_unit *= root;
  out.interference_unit *= root;
  return out;
}

DataBatch sample_batch(const Scenario& scenario, Hypothesis hypothesis, std::uint64_t seed,
                       bool fixed_interference) {
  Rng rng = make_rng(seed);
  const auto lower = scenario.r_chol.triangularView<Eigen::Lower>();
  DataBatch batch;
  batch.hypothesis = hypothesis;
  batch.seed = seed;
  batch.training = lower * standard_complex_normal(scenario.n, scenario.l, rng);
  batch.x = lower * standard_complex_normal(scenario.n, rng);

  if (scenario.q > 0) {
    // The coordinate is always drawn so streams stay aligned across INR settings.
    CVector phi = standard_complex_normal(scenario.q, rng);
    if (scenario.inr_db != -std::numeric_limits<double>::infinity()) {
      const double inr = db_to_linear(scenario.inr_db);
      if (fixed_interference) {
        batch.x += std::sqrt(inr) * scenario.interference_unit;
      } else {
        while (phi.squaredNorm() == 0.0) phi = standard_complex_normal(scenario.q, rng);
        batch.x += interference_from_coordinates(scenario.r_chol, scenario.j_mat, phi, inr);
      }
    }
  }
  if (hypothesis == Hypothesis::H1) batch.x += scenario.s0;
  return batch;
}

MismatchMetrics mismatch_metrics(const CMatrix& r_cov, const CMatrix& h_mat, const CMatrix& j_mat,
                                 const CVector& s0) {
  if (h_mat.rows() != r_cov.rows() || j_mat.rows() != r_cov.rows() || s0.size() != r_cov.rows())
    throw_invalid("mismatch_metrics: dimension mismatch");
  CMatrix combined(h_mat.rows(), h_mat.cols() + j_mat.cols());
  combined << h_mat, j_mat;
  if (!full_column_rank(combined)) throw_numeric("mismatch_metrics: [H, J] is rank deficient");

  const CMatrix r_isqrt = hermitian_inv_sqrt(r_cov);
  const CVector sbar = r_isqrt * s0;
  const CMatrix hbar = r_isqrt * h_mat;
  const CMatrix jbar = r_isqrt * j_mat;

  const CVector z = project_out(jbar, sbar);
  MismatchMetrics m;
  m.rho_snr = sbar.squaredNorm();
  const double rejected = z.squaredNorm();
  const CMatrix qa = rejected_signal_basis(hbar, jbar);
  if (qa.cols() == 0) throw_numeric("mismatch_metrics: P_perp_J H is rank deficient");
  const CVector coeff = qa.adjoint() * z;
  m.rho_eff = coeff.squaredNorm();
  m.delta2 = (z - qa * coeff).squaredNorm();
  const double in_h = (orthonormal_basis(hbar).adjoint() * sbar).squaredNorm();

  const double nan = std::numeric_limits<double>::quiet_NaN();
  m.sin2psi = m.rho_snr > 0.0 ? rejected / m.rho_snr : nan;
  m.cos2theta = rejected > 0.0 ? m.rho_eff / rejected : nan;
  m.cos2phi = m.rho_snr > 0.0 ? in_h / m.rho_snr : nan;
  return m;
}

}  // namespace adet
