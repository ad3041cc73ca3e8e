#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "hent/core/rng.hpp"
#include "hent/core/state_ops.hpp"

namespace hent {

struct SubspaceOptions {
  double residual_tol = 1e-10;
  int max_sweeps = 10000;
  std::uint64_t seed = 0x243F6A8885A308D3ull;
  double degeneracy_gap = 1e-9;
};

namespace detail {

inline CVector gaussian_vector(Eigen::Index n, Stream& rng) {
  std::normal_distribution<double> nd;
  CVector v(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double re = nd(rng);
    const double im = nd(rng);
    v(i) = cplx(re, im);
  }
  return v;
}

// Modified Gram-Schmidt with one re-orthogonalization pass. Columns that
// vanish (rank deficiency) are replaced by fresh random directions.
inline void orthonormalize(CMatrix& q, Stream& rng) {
  for (Eigen::Index j = 0; j < q.cols(); ++j) {
    for (int attempt = 0;; ++attempt) {
      const double before = q.col(j).norm();
      for (int pass = 0; pass < 2; ++pass)
        for (Eigen::Index i = 0; i < j; ++i) q.col(j) -= q.col(i).dot(q.col(j)) * q.col(i);
      const double after = q.col(j).norm();
      if (after > 1e-10 * std::max(before, 1e-300) && after > 1e-280) {
        q.col(j) /= after;
        break;
      }
      if (attempt > 8) throw Error("orthonormalize: could not complete basis");
      q.col(j) = gaussian_vector(q.rows(), rng);
    }
  }
}

}  // namespace detail

// Leading k eigenpairs of rho = Psi Psi^dagger for the amplitude matrix Psi
// across `cut`, via block subspace iteration on the action x -> Psi (Psi^dagger x).
inline SchmidtSpectrum top_schmidt_matrix_free(const PureState& state, const Region& cut, int k,
                                               const SubspaceOptions& opt = {}) {
  if (k < 1) throw InvalidArgument("top_schmidt_matrix_free: k must be at least 1");
  if (!(opt.residual_tol > 0.0)) throw InvalidArgument("top_schmidt_matrix_free: residual_tol must be positive");
  cut.validate(state.qubits());
  const CMatrix psi = amplitude_matrix(state, cut);
  const Eigen::Index dA = psi.rows();
  if (k > dA) throw InvalidArgument("top_schmidt_matrix_free: k exceeds the cut dimension");
  const Eigen::Index b = std::min<Eigen::Index>(k + 2, dA);

  auto apply = [&psi](const CMatrix& x) -> CMatrix { return psi * (psi.adjoint() * x); };

  Stream rng(opt.seed);
  CMatrix q(dA, b);
  for (Eigen::Index j = 0; j < b; ++j) q.col(j) = detail::gaussian_vector(dA, rng);
  detail::orthonormalize(q, rng);
  q = apply(q);
  detail::orthonormalize(q, rng);

  SchmidtSpectrum out;
  out.cut = cut;
  out.truncated_rank = k;
  double worst = 0.0;
  for (int sweep = 1; sweep <= opt.max_sweeps; ++sweep) {
    const CMatrix w = apply(q);
    CMatrix h = q.adjoint() * w;
    h = 0.5 * (h + h.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
    // descending Ritz order
    const RVector theta = es.eigenvalues().reverse();
    const CMatrix s = es.eigenvectors().rowwise().reverse();
    const CMatrix x = q * s;
    const CMatrix ax = w * s;

    worst = 0.0;
    for (int i = 0; i < k; ++i) worst = std::max(worst, (ax.col(i) - theta(i) * x.col(i)).norm());

    if (worst <= opt.residual_tol) {
      out.iterations = sweep;
      out.max_residual = worst;
      out.weights.resize(k);
      for (int i = 0; i < k; ++i) out.weights[i] = std::max(theta(i), 0.0);
      const Eigen::Index last = std::min<Eigen::Index>(k, b - 1);
      for (Eigen::Index i = 0; i < last; ++i)
        if (theta(i) - theta(i + 1) < opt.degeneracy_gap) out.degenerate = true;
      CMatrix vecs = x.leftCols(k);
      detail::orthonormalize(vecs, rng);  // polish; Ritz vectors are orthonormal up to rounding
      out.left_vectors = std::move(vecs);
      return out;
    }
    q = ax;
    detail::orthonormalize(q, rng);
  }
  throw ConvergenceError("top_schmidt_matrix_free: no convergence, residual " + std::to_string(worst),
                         worst, opt.max_sweeps);
}

// Cuts with at most this many rows use a dense SVD for Schmidt vectors.
inline constexpr Eigen::Index kDenseVectorLimit = 1024;

// Full weights plus at least the leading k vectors. Large cuts take the
// matrix-free route for the vectors and a Gram eigensolve for the weights.
inline SchmidtSpectrum schmidt_with_top_vectors(const PureState& state, const Region& cut, int k,
                                                const SubspaceOptions& opt = {}) {
  const Eigen::Index dA = Eigen::Index{1} << cut.count();
  if (dA <= kDenseVectorLimit) {
    SchmidtSpectrum s = schmidt_decompose(state, cut, true);
    if (s.left_vectors && s.left_vectors->cols() > k) s.left_vectors = s.left_vectors->leftCols(k).eval();
    for (int i = 0; i + 1 < static_cast<int>(s.weights.size()) && i < k; ++i)
      if (s.weights[i] - s.weights[i + 1] < opt.degeneracy_gap) s.degenerate = true;
    return s;
  }
  SchmidtSpectrum top = top_schmidt_matrix_free(state, cut, k, opt);
  SchmidtSpectrum full = schmidt_decompose(state, cut, false);
  full.left_vectors = std::move(top.left_vectors);
  full.degenerate = top.degenerate;
  full.max_residual = top.max_residual;
  full.iterations = top.iterations;
  return full;
}

}  // namespace hent
