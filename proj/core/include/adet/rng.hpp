#pragma once

#include <cstdint>
#include <random>

#include "adet/linalg.hpp"

namespace adet {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Counter-based seed derivation: the generator for trial `index` of stream
/// `stream` depends only on (base, stream, index), so any worker can build it.
std::uint64_t stream_seed(std::uint64_t base, std::uint64_t stream, std::uint64_t index) noexcept;

Rng make_rng(std::uint64_t seed);
Rng make_rng(std::uint64_t base, std::uint64_t stream, std::uint64_t index);

/// i.i.d. CN(0, 1) entries: real and imaginary parts each N(0, 1/2).
CMatrix standard_complex_normal(Index rows, Index cols, Rng& rng);
CVector standard_complex_normal(Index n, Rng& rng);

/// z = G w with G G^H = cov (lower Cholesky factor); E[z z^H] = cov.
CVector sample_complex_gaussian(const CMatrix& cov, Rng& rng);

/// Same as above with a precomputed lower Cholesky factor.
CVector sample_complex_gaussian_factored(const CMatrix& chol_lower, Rng& rng);

/// Lower Cholesky factor of a Hermitian PD matrix; throws a numeric error otherwise.
CMatrix cholesky_lower(const CMatrix& cov);

}  // namespace adet
