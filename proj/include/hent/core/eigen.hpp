#pragma once

#include <string>

#include "hent/core/lapack.hpp"
#include "hent/core/types.hpp"

namespace hent {

template <typename Scalar>
struct EigenSystem {
  RVector values;  // ascending
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> vectors;  // columns
};

using HermitianEigen = EigenSystem<cplx>;
using SymmetricEigen = EigenSystem<double>;

template <typename M>
double hermiticity_residual(const M& m) {
  if (m.rows() != m.cols()) throw InvalidArgument("matrix is not square");
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

inline HermitianEigen eigendecompose_hermitian(const CMatrix& m, double tol = 1e-10) {
  const double res = hermiticity_residual(m);
  if (res > tol)
    throw InvalidArgument("eigendecompose_hermitian: matrix not Hermitian, asymmetry " + std::to_string(res));
  HermitianEigen out;
  out.vectors = m;
  out.values = lapack::heevd(out.vectors, true);
  return out;
}

inline SymmetricEigen eigendecompose_hermitian(const RMatrix& m, double tol = 1e-10) {
  const double res = hermiticity_residual(m);
  if (res > tol)
    throw InvalidArgument("eigendecompose_hermitian: matrix not symmetric, asymmetry " + std::to_string(res));
  SymmetricEigen out;
  out.vectors = m;
  out.values = lapack::syevd(out.vectors, true);
  return out;
}

// Eigenvalues only (ascending).
inline RVector hermitian_eigenvalues(CMatrix m) { return lapack::heevd(m, false); }
inline RVector hermitian_eigenvalues(RMatrix m) { return lapack::syevd(m, false); }

}  // namespace hent
