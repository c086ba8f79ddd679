#pragma once

// Mismatch geometries built in the whitened domain and mapped back through a
// random covariance factor. Used by the property tests and the acceptance run.

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <random>

namespace oracle {

struct Geometry {
  Eigen::MatrixXcd r;  // covariance
  Eigen::MatrixXcd h;  // nominal signal matrix
  Eigen::MatrixXcd j;  // interference subspace
  Eigen::VectorXcd s;  // actual signal
};

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  std::complex<double> cn() { return {nd_(rng_), nd_(rng_)}; }

  Eigen::MatrixXcd matrix(Eigen::Index rows, Eigen::Index cols) {
    Eigen::MatrixXcd m(rows, cols);
    for (Eigen::Index c = 0; c < cols; ++c)
      for (Eigen::Index r = 0; r < rows; ++r) m(r, c) = cn();
    return m;
  }

  Eigen::VectorXcd vector(Eigen::Index n) { return matrix(n, 1).col(0); }

  // Well conditioned Hermitian positive definite matrix.
  Eigen::MatrixXcd covariance(Eigen::Index n) {
    const Eigen::MatrixXcd a = matrix(n, n);
    return a * a.adjoint() / static_cast<double>(n) + 0.5 * Eigen::MatrixXcd::Identity(n, n);
  }

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }

 private:
  std::mt19937_64 rng_;
  std::normal_distribution<double> nd_{0.0, 1.0};
};

// Orthonormal complement of the columns of `a` (assumed full column rank).
inline Eigen::MatrixXcd complement(const Eigen::MatrixXcd& a) {
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(a);
  const Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(a.rows(), a.rows());
  return q.rightCols(a.rows() - a.cols());
}

inline Eigen::MatrixXcd orthonormalize(const Eigen::MatrixXcd& a) {
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(a);
  return qr.householderQ() * Eigen::MatrixXcd::Identity(a.rows(), a.cols());
}

// Maps whitened quantities back through a Cholesky factor of a random covariance.
inline Geometry dewhiten(Gen& g, const Eigen::MatrixXcd& hb, const Eigen::MatrixXcd& jb, const Eigen::VectorXcd& sb) {
  Geometry out;
  out.r = g.covariance(hb.rows());
  const Eigen::MatrixXcd l = out.r.llt().matrixL();
  out.h = l * hb;
  out.j = l * jb;
  out.s = l * sb;
  return out;
}

// s0 in range(H).
inline Geometry forward_geometry(std::uint64_t seed, int n, int p, int q) {
  Gen g(seed);
  const Eigen::MatrixXcd hb = g.matrix(n, p);
  const Eigen::MatrixXcd jb = g.matrix(n, q);
  return dewhiten(g, hb, jb, hb * g.vector(p));
}

// Whitened s0 = H theta1 + J phi1 with phi1 != 0.
inline Geometry mixed_geometry(std::uint64_t seed, int n, int p, int q) {
  Gen g(seed);
  const Eigen::MatrixXcd hb = g.matrix(n, p);
  const Eigen::MatrixXcd jb = g.matrix(n, q);
  return dewhiten(g, hb, jb, hb * g.vector(p) + jb * g.vector(q));
}

// Whitened s0 = H_perp theta_perp, so H^H s0 = 0, with a generic J.
inline Geometry orthogonal_geometry(std::uint64_t seed, int n, int p, int q) {
  Gen g(seed);
  const Eigen::MatrixXcd hb = g.matrix(n, p);
  const Eigen::MatrixXcd jb = g.matrix(n, q);
  const Eigen::MatrixXcd h_perp = complement(hb);
  return dewhiten(g, hb, jb, h_perp * g.vector(n - p));
}

// As above but with J_perp = [H_par, first n-p-q columns of H_perp], i.e. J
// spans the last q columns of H_perp.
inline Geometry orthogonal_geometry_aligned_j(std::uint64_t seed, int n, int p, int q) {
  Gen g(seed);
  const Eigen::MatrixXcd hb = g.matrix(n, p);
  const Eigen::MatrixXcd h_perp = complement(hb);
  const Eigen::MatrixXcd jb = h_perp.rightCols(q) * g.matrix(q, q);
  return dewhiten(g, hb, jb, h_perp * g.vector(n - p));
}

}  // namespace oracle
