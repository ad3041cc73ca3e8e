#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <random>

#include "hent/core/rng.hpp"
#include "hent/core/state_ops.hpp"

namespace hent::gates {

inline const cplx I{0.0, 1.0};

inline Gate1 identity1() { return Gate1::Identity(); }
inline Gate1 pauli_x() { Gate1 m; m << 0, 1, 1, 0; return m; }
inline Gate1 pauli_y() { Gate1 m; m << 0, -I, I, 0; return m; }
inline Gate1 pauli_z() { Gate1 m; m << 1, 0, 0, -1; return m; }
inline Gate1 hadamard() {
  Gate1 m;
  m << 1, 1, 1, -1;
  return m / std::sqrt(2.0);
}
inline Gate1 phase_s() { Gate1 m; m << 1, 0, 0, I; return m; }
inline Gate1 phase_sdg() { Gate1 m; m << 1, 0, 0, -I; return m; }
inline Gate1 t_gate() {
  Gate1 m;
  m << 1, 0, 0, std::polar(1.0, std::numbers::pi / 4);
  return m;
}
inline Gate1 t_dagger() { return t_gate().adjoint(); }

inline Gate2 cz() {
  Gate2 m = Gate2::Identity();
  m(3, 3) = -1.0;
  return m;
}
inline Gate2 swap() {
  Gate2 m = Gate2::Zero();
  m(0, 0) = m(3, 3) = 1.0;
  m(1, 2) = m(2, 1) = 1.0;
  return m;
}

// Two-site product a (x) b in the local basis 2*s_first + s_second.
inline Gate2 kron(const Gate1& a, const Gate1& b) {
  Gate2 m;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) m(2 * i + k, 2 * j + l) = a(i, j) * b(k, l);
  return m;
}

// Haar-distributed d x d unitary: QR of a complex Ginibre matrix, with the
// phases of R's diagonal moved into Q.
inline CMatrix haar_unitary(int d, Stream& rng) {
  std::normal_distribution<double> nd(0.0, std::sqrt(0.5));
  CMatrix z(d, d);
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < d; ++i) {
      const double re = nd(rng);
      const double im = nd(rng);
      z(i, j) = cplx(re, im);
    }
  Eigen::HouseholderQR<CMatrix> qr(z);
  CMatrix q = qr.householderQ() * CMatrix::Identity(d, d);
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < d; ++j) {
    const cplx rjj = r(j, j);
    const double mod = std::abs(rjj);
    if (mod > 0.0) q.col(j) *= rjj / mod;
  }
  return q;
}

inline Gate2 sample_haar_gate(Stream& rng) { return haar_unitary(4, rng); }

// Charge-conserving gate: phases on |00>, |11> and a Haar U(2) on {|01>, |10>}.
inline Gate2 sample_u1_gate(Stream& rng) {
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  const double t00 = phase(rng);
  const double t11 = phase(rng);
  const CMatrix v = haar_unitary(2, rng);
  Gate2 g = Gate2::Zero();
  g(0, 0) = std::polar(1.0, t00);
  g(3, 3) = std::polar(1.0, t11);
  g.block<2, 2>(1, 1) = v;
  return g;
}

// The six single-site Cliffords drawn in the Clifford+T ensemble.
inline const std::array<Gate1, 6>& clifford_set() {
  static const std::array<Gate1, 6> set = {identity1(), hadamard(), phase_s(),
                                           phase_sdg(), pauli_x(),  pauli_z()};
  return set;
}

struct SingleSiteDraw {
  Gate1 gate;
  int clifford_index = 0;
  int t_kind = 0;  // 0: none, +1: T, -1: T^dagger
};

// Uniform Clifford from the set, then T or T^dagger with probability p_T.
inline SingleSiteDraw sample_clifford_t_site(Stream& rng, double p_T) {
  SingleSiteDraw d;
  d.clifford_index = std::uniform_int_distribution<int>(0, 5)(rng);
  d.gate = clifford_set()[d.clifford_index];
  if (rng.uniform() < p_T) {
    d.t_kind = (rng() & 1) ? 1 : -1;
    d.gate = (d.t_kind > 0 ? t_gate() : t_dagger()) * d.gate;
  }
  return d;
}

}  // namespace hent::gates
