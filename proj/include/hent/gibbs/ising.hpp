#pragma once

#include <cmath>
#include <cstdint>
#include <memory>
#include <string>

#include "hent/circuits/circuit.hpp"
#include "hent/core/budget.hpp"
#include "hent/core/eigen.hpp"

namespace hent {

// H = sum Z_i Z_{i+1} + sum (g X_i + h Z_i) + Z_first/4 - Z_last/4, open chain.
struct IsingSpec {
  int L = 14;
  double g = 1.1;
  double h = 0.35;
  bool boundary = true;

  void validate() const {
    if (L < 2 || L % 2) throw InvalidArgument("IsingSpec: L must be even and at least 2");
    if (!std::isfinite(g) || !std::isfinite(h)) throw InvalidArgument("IsingSpec: parameters must be finite");
  }
};

inline RMatrix build_mixed_field_ising(const IsingSpec& spec) {
  spec.validate();
  if (spec.L > kMaxGibbsSites)
    throw BudgetExceeded("build_mixed_field_ising: L = " + std::to_string(spec.L) + " exceeds the dense-ED cap L <= " +
                         std::to_string(kMaxGibbsSites));
  const Eigen::Index n = Eigen::Index{1} << spec.L;
  const double need = 8.0 * static_cast<double>(n) * static_cast<double>(n);
  if (need > static_cast<double>(available_memory_bytes()))
    throw BudgetExceeded("build_mixed_field_ising: Hamiltonian needs " + format_gib(need));

  RMatrix H = RMatrix::Zero(n, n);
  const int L = spec.L;
  for (Eigen::Index idx = 0; idx < n; ++idx) {
    const auto z = [idx](int s) { return ((idx >> s) & 1) ? -1.0 : 1.0; };
    double diag = 0.0;
    for (int i = 0; i + 1 < L; ++i) diag += z(i) * z(i + 1);
    for (int i = 0; i < L; ++i) diag += spec.h * z(i);
    if (spec.boundary) diag += 0.25 * z(0) - 0.25 * z(L - 1);
    H(idx, idx) = diag;
    if (spec.g != 0.0)
      for (int i = 0; i < L; ++i) H(idx ^ (Eigen::Index{1} << i), idx) += spec.g;
  }
  return H;
}

// Eigendecomposition of H plus the quench-site Z in the eigenbasis.
struct IsingEigensystem {
  IsingSpec spec;
  int site = 0;
  RVector energies;  // ascending
  RMatrix vectors;
  RMatrix z_hat;     // V^T Z_site V

  Eigen::Index dim() const { return energies.size(); }
};

inline std::shared_ptr<const IsingEigensystem> ising_eigensystem(const IsingSpec& spec, int site = -1) {
  spec.validate();
  check_gibbs_budget(spec.L);
  auto es = std::make_shared<IsingEigensystem>();
  es->spec = spec;
  es->site = site < 0 ? center_site(spec.L) : site;
  if (es->site >= spec.L) throw InvalidArgument("ising_eigensystem: quench site out of range");
  {
    SymmetricEigen eig = eigendecompose_hermitian(build_mixed_field_ising(spec));
    es->energies = std::move(eig.values);
    es->vectors = std::move(eig.vectors);
  }
  const Eigen::Index n = es->dim();
  RVector z(n);
  for (Eigen::Index idx = 0; idx < n; ++idx) z(idx) = ((idx >> es->site) & 1) ? -1.0 : 1.0;
  es->z_hat.noalias() = es->vectors.transpose() * (z.asDiagonal() * es->vectors);
  return es;
}

// max |H - V diag(E) V^T| relative to max |H|.
inline double reconstruction_residual(const IsingEigensystem& es) {
  const RMatrix H = build_mixed_field_ising(es.spec);
  const RMatrix R = es.vectors * es.energies.asDiagonal() * es.vectors.transpose();
  return (H - R).cwiseAbs().maxCoeff() / std::max(H.cwiseAbs().maxCoeff(), 1e-300);
}

}  // namespace hent
