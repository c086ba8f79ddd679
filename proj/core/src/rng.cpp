#include "adet/rng.hpp"

#include <cmath>

#include "adet/error.hpp"

namespace adet {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t stream_seed(std::uint64_t base, std::uint64_t stream, std::uint64_t index) noexcept {
  std::uint64_t h = splitmix64(base);
  h = splitmix64(h ^ (stream * 0xD1B54A32D192ED03ULL));
  return splitmix64(h ^ index);
}

Rng make_rng(std::uint64_t seed) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  return Rng(seq);
}

Rng make_rng(std::uint64_t base, std::uint64_t stream, std::uint64_t index) {
  return make_rng(stream_seed(base, stream, index));
}

CMatrix standard_complex_normal(Index rows, Index cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  CMatrix out(rows, cols);
  for (Index c = 0; c < cols; ++c)
    for (Index r = 0; r < rows; ++r) {
      const double re = normal(rng);
      const double im = normal(rng);
      out(r, c) = Complex(re, im);
    }
  return out;
}

CVector standard_complex_normal(Index n, Rng& rng) { return standard_complex_normal(n, 1, rng); }

CMatrix cholesky_lower(const CMatrix& cov) {
  if (cov.rows() != cov.cols()) throw_invalid("covariance must be square");
  Eigen::LLT<CMatrix> llt(cov);
  if (llt.info() != Eigen::Success) throw_numeric("Cholesky factorization failed: covariance not positive definite");
  return llt.matrixL();
}

CVector sample_complex_gaussian(const CMatrix& cov, Rng& rng) {
  return sample_complex_gaussian_factored(cholesky_lower(cov), rng);
}

CVector sample_complex_gaussian_factored(const CMatrix& chol_lower, Rng& rng) {
  const CVector w = standard_complex_normal(chol_lower.rows(), rng);
  return chol_lower.triangularView<Eigen::Lower>() * w;
}

}  // namespace adet
