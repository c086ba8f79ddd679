#pragma once

#include <Eigen/Dense>
#include <complex>

namespace adet {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using Index = Eigen::Index;

/// Ratio of smallest to largest singular value below which a matrix is
/// treated as rank deficient.
inline constexpr double kRankTolerance = 1e-8;

/// Principal square root of a Hermitian positive-definite matrix.
CMatrix hermitian_sqrt(const CMatrix& a);
CMatrix hermitian_inv_sqrt(const CMatrix& a);

/// True when the columns of `a` are linearly independent at kRankTolerance.
/// An empty (N x 0) matrix counts as full rank.
bool full_column_rank(const CMatrix& a, double tolerance = kRankTolerance);

/// Orthogonal projector onto range(a). Zero matrix when `a` has no columns.
CMatrix projector(const CMatrix& a);

/// I - projector(a).
CMatrix orthogonal_projector(const CMatrix& a);

/// Orthonormal basis of range(a) from a thin Householder QR; the first k
/// columns span the first k columns of `a`.
CMatrix orthonormal_basis(const CMatrix& a);

/// Real part of v^H M v (M assumed Hermitian).
double quadratic_form(const CVector& v, const CMatrix& m);

}  // namespace adet
