#include "adet/linalg.hpp"

#include "adet/error.hpp"

namespace adet {

namespace {

Eigen::SelfAdjointEigenSolver<CMatrix> checked_eigensolver(const CMatrix& a) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(a);
  if (es.info() != Eigen::Success) throw_numeric("Hermitian eigendecomposition failed");
  if (es.eigenvalues().minCoeff() <= 0.0)
    throw_numeric("matrix is not positive definite (min eigenvalue " +
                  std::to_string(es.eigenvalues().minCoeff()) + ")");
  return es;
}

}  // namespace

CMatrix hermitian_sqrt(const CMatrix& a) { return checked_eigensolver(a).operatorSqrt(); }

CMatrix hermitian_inv_sqrt(const CMatrix& a) {
  return checked_eigensolver(a).operatorInverseSqrt();
}

bool full_column_rank(const CMatrix& a, double tolerance) {
  if (a.cols() == 0) return true;
  if (a.cols() > a.rows()) return false;
  Eigen::JacobiSVD<CMatrix> svd(a);
  const auto& s = svd.singularValues();
  const double largest = s(0);
  const double smallest = s(s.size() - 1);
  return largest > 0.0 && smallest > tolerance * largest;
}

CMatrix projector(const CMatrix& a) {
  const Index n = a.rows();
  if (a.cols() == 0) return CMatrix::Zero(n, n);
  if (!full_column_rank(a)) throw_numeric("projector: matrix is rank deficient");
  const CMatrix q = orthonormal_basis(a);
  return q * q.adjoint();
}

CMatrix orthonormal_basis(const CMatrix& a) {
  Eigen::HouseholderQR<CMatrix> qr(a);
  return qr.householderQ() * CMatrix::Identity(a.rows(), a.cols());
}

CMatrix orthogonal_projector(const CMatrix& a) {
  return CMatrix::Identity(a.rows(), a.rows()) - projector(a);
}

double quadratic_form(const CVector& v, const CMatrix& m) { return (v.adjoint() * m * v)(0, 0).real(); }

}  // namespace adet
