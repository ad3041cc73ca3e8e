#pragma once

#include <cmath>
#include <optional>

#include "hent/core/state_ops.hpp"

namespace hent {

// rho_A = (1 - mu) |v><v| + mu * omega for the state (|base> + eps |phi>)/sqrt(N).
struct SpikeCloud {
  cplx a_t;
  PureState x;       // <base_B|phi> on A, unnormalized
  double y_norm_sq = 0.0;
  double mu = 0.0;
  double N_t = 1.0;
  PureState v;       // normalized spike
  std::optional<DensityMatrix> omega;  // absent when <y|y> <= 1e-14
  double epsilon = 0.0;
  Region cut{0, 1};

  CMatrix reconstruct() const {
    CMatrix r = (1.0 - mu) * v.amplitudes() * v.amplitudes().adjoint();
    if (omega) r += mu * omega->matrix();
    return r;
  }
};

inline SpikeCloud spike_cloud_decompose(const PureState& phi, double epsilon, const ProductState& base,
                                        const Region& cut) {
  if (!(epsilon >= 0.0 && epsilon < 1.0)) throw InvalidArgument("spike_cloud_decompose: epsilon must lie in [0, 1)");
  if (!phi.normalized(1e-10)) throw InvalidArgument("spike_cloud_decompose: phi must be normalized");
  if (base.sites() != phi.qubits()) throw InvalidArgument("spike_cloud_decompose: base size mismatch");
  cut.validate(phi.qubits());

  const CVector zero_A = base.vector_on(cut);
  const CVector zero_B = base.vector_on(complement_sites(cut, phi.qubits()));
  const CMatrix psi = amplitude_matrix(phi, cut);

  SpikeCloud c;
  c.epsilon = epsilon;
  c.cut = cut;
  c.a_t = base.to_state().inner(phi);
  c.N_t = 1.0 + epsilon * epsilon + 2.0 * epsilon * c.a_t.real();

  const CVector x = psi * zero_B.conjugate();
  const CMatrix y = psi - x * zero_B.transpose();
  c.x = PureState(cut.count(), x);
  c.y_norm_sq = y.squaredNorm();
  c.mu = epsilon * epsilon * c.y_norm_sq / c.N_t;

  CVector v = zero_A + epsilon * x;
  c.v = PureState(cut.count(), v / v.norm());
  if (c.y_norm_sq > 1e-14) {
    c.omega = DensityMatrix(y * y.adjoint() / c.y_norm_sq);
  } else {
    c.mu = 0.0;
  }
  return c;
}

}  // namespace hent
