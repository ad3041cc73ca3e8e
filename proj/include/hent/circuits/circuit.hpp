#pragma once

#include <array>
#include <cmath>
#include <set>
#include <string>
#include <vector>

#include "hent/circuits/gates.hpp"
#include "hent/core/rng.hpp"
#include "hent/core/state_ops.hpp"

namespace hent {

enum class Ensemble { haar, clifford_t, u1 };

inline std::string to_string(Ensemble e) {
  switch (e) {
    case Ensemble::haar: return "haar";
    case Ensemble::clifford_t: return "clifford_t";
    case Ensemble::u1: return "u1";
  }
  return "?";
}

inline Ensemble ensemble_from_string(const std::string& s) {
  if (s == "haar") return Ensemble::haar;
  if (s == "clifford_t") return Ensemble::clifford_t;
  if (s == "u1") return Ensemble::u1;
  throw InvalidArgument("unknown ensemble '" + s + "'");
}

struct EnsembleParams {
  double r = 2.0;
  double epsilon = 0.4;
  double p_T = 0.5;
  int operator_site = -1;  // -1: center of the chain

  void validate() const {
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw InvalidArgument("epsilon must lie in (0, 1)");
    if (!(p_T >= 0.0 && p_T <= 1.0)) throw InvalidArgument("p_T must lie in [0, 1]");
    if (!(r > 0.0)) throw InvalidArgument("depth ratio r must be positive");
  }
};

// The operator site for a chain of L sites: the L/2-th site counted from one,
// i.e. index L/2 - 1.
inline int center_site(int L) { return L / 2 - 1; }

struct GateOp {
  int first = 0;
  int second = -1;  // -1 for a single-site gate
  Gate2 u = Gate2::Identity();  // single-site gates live in the top-left 2x2 block

  bool single() const noexcept { return second < 0; }
  Gate1 u1() const { return u.topLeftCorner<2, 2>(); }

  static GateOp one(int site, const Gate1& g) {
    GateOp op;
    op.first = site;
    op.u.topLeftCorner<2, 2>() = g;
    return op;
  }
  static GateOp two(int a, int b, const Gate2& g) {
    GateOp op;
    op.first = a;
    op.second = b;
    op.u = g;
    return op;
  }
};

using Layer = std::vector<GateOp>;

class CircuitRealization {
 public:
  CircuitRealization(int n_qubits, Ensemble ensemble, std::uint64_t seed, int timestep_layers)
      : n_(n_qubits), ensemble_(ensemble), seed_(seed), per_step_(timestep_layers) {
    if (n_qubits < 2) throw InvalidArgument("circuit needs at least two qubits");
    if (timestep_layers < 1) throw InvalidArgument("timestep_layers must be positive");
  }

  int qubits() const noexcept { return n_; }
  Ensemble ensemble() const noexcept { return ensemble_; }
  std::uint64_t seed() const noexcept { return seed_; }
  int timestep_layers() const noexcept { return per_step_; }
  const std::vector<Layer>& layers() const noexcept { return layers_; }
  int depth() const noexcept { return static_cast<int>(layers_.size()) / per_step_; }

  void push_layer(Layer layer) {
    std::set<int> used;
    for (const auto& op : layer) {
      for (int s : {op.first, op.second}) {
        if (s < 0 && s == op.second) continue;
        if (s < 0 || s >= n_) throw InvalidArgument("gate site out of range");
        if (!used.insert(s).second) throw InvalidArgument("gates in a layer must have disjoint supports");
      }
      const double res = op.single() ? unitarity_residual(Gate1(op.u1())) : unitarity_residual(op.u);
      if (res > 1e-12) throw InvalidArgument("circuit gate not unitary, residual " + std::to_string(res));
    }
    layers_.push_back(std::move(layer));
  }

  // Applies layers [0, n_layers) in order.
  void apply_forward(CVector& amps, int n_layers) const {
    for (int l = 0; l < n_layers; ++l)
      for (const auto& op : layers_.at(l)) apply_op(amps, op, false);
  }

  // Applies the inverse of layers [0, n_layers): last layer first, gates adjointed.
  void apply_inverse(CVector& amps, int n_layers) const {
    for (int l = n_layers - 1; l >= 0; --l)
      for (const auto& op : layers_.at(l)) apply_op(amps, op, true);
  }

  // Full unitary of the first t timesteps (dense; small n only).
  CMatrix unitary(int t) const {
    const Eigen::Index d = Eigen::Index{1} << n_;
    CMatrix u(d, d);
    for (Eigen::Index c = 0; c < d; ++c) {
      CVector e = CVector::Zero(d);
      e(c) = 1.0;
      apply_forward(e, t * per_step_);
      u.col(c) = e;
    }
    return u;
  }

 private:
  static void apply_op(CVector& amps, const GateOp& op, bool adjoint) {
    if (op.single()) {
      const Gate1 g = adjoint ? Gate1(op.u1().adjoint()) : op.u1();
      apply_gate_unchecked(amps, g, op.first);
    } else {
      const Gate2 g = adjoint ? Gate2(op.u.adjoint()) : op.u;
      apply_gate_unchecked(amps, g, op.first, op.second);
    }
  }

  int n_;
  Ensemble ensemble_;
  std::uint64_t seed_;
  int per_step_;
  std::vector<Layer> layers_;
};

// Bonds (0,1),(2,3),... for parity 0 and (1,2),(3,4),... for parity 1.
inline std::vector<std::array<int, 2>> brick_bonds(int L, int parity) {
  std::vector<std::array<int, 2>> b;
  for (int s = parity; s + 1 < L; s += 2) b.push_back({s, s + 1});
  return b;
}

// One Clifford+T timestep: R1, CZ on parity sigma, R2, CZ on the other parity.
inline std::vector<Layer> sample_clifford_t_timestep(int L, double p_T, const Stream& step) {
  if (L < 2) throw InvalidArgument("clifford_t timestep needs L >= 2");
  Stream coin = step.child(0);
  const int sigma = static_cast<int>(coin() & 1);
  auto single_layer = [&](int which) {
    Layer layer;
    for (int j = 0; j < L; ++j) {
      Stream s = step.child(1 + static_cast<std::uint64_t>(which) * L + j);
      layer.push_back(GateOp::one(j, gates::sample_clifford_t_site(s, p_T).gate));
    }
    return layer;
  };
  auto cz_layer = [&](int parity) {
    Layer layer;
    for (auto [a, b] : brick_bonds(L, parity)) layer.push_back(GateOp::two(a, b, gates::cz()));
    return layer;
  };
  return {single_layer(0), cz_layer(sigma), single_layer(1), cz_layer(1 - sigma)};
}

// Gate g of layer l draws from derive_stream(seed, {l, g}), so a shallower
// circuit with the same seed is a prefix of a deeper one.
inline CircuitRealization build_brickwork(int L, int depth, std::uint64_t seed, Ensemble ensemble) {
  if (ensemble == Ensemble::clifford_t) throw InvalidArgument("build_brickwork: use build_clifford_t");
  CircuitRealization c(L, ensemble, seed, 2);
  for (int t = 0; t < depth; ++t) {
    for (int parity = 0; parity < 2; ++parity) {
      const int l = 2 * t + parity;
      Layer layer;
      int g = 0;
      for (auto [a, b] : brick_bonds(L, parity)) {
        Stream s = derive_stream(seed, {static_cast<std::uint64_t>(l), static_cast<std::uint64_t>(g++)});
        layer.push_back(GateOp::two(a, b, ensemble == Ensemble::haar ? gates::sample_haar_gate(s)
                                                                     : gates::sample_u1_gate(s)));
      }
      c.push_layer(std::move(layer));
    }
  }
  return c;
}

inline CircuitRealization build_clifford_t(int L, int depth, double p_T, std::uint64_t seed) {
  CircuitRealization c(L, Ensemble::clifford_t, seed, 4);
  for (int t = 0; t < depth; ++t)
    for (auto& layer : sample_clifford_t_timestep(L, p_T, derive_stream(seed, {static_cast<std::uint64_t>(t)})))
      c.push_layer(std::move(layer));
  return c;
}

inline CircuitRealization build_circuit(Ensemble e, int L, int depth, std::uint64_t seed, double p_T = 0.5) {
  return e == Ensemble::clifford_t ? build_clifford_t(L, depth, p_T, seed) : build_brickwork(L, depth, seed, e);
}

// Product state for the U(1) ensemble: |0> on the center site, |+> or |-> elsewhere.
inline ProductState u1_initial_state_from_signs(int L, std::uint64_t sign_bits) {
  if (L < 2 || L % 2) throw InvalidArgument("u1 initial state needs even L");
  const double h = 1.0 / std::sqrt(2.0);
  std::vector<Eigen::Vector2cd> f(L);
  int k = 0;
  for (int j = 0; j < L; ++j) {
    if (j == center_site(L)) {
      f[j] = Eigen::Vector2cd(1.0, 0.0);
    } else {
      const bool minus = (sign_bits >> k++) & 1;
      f[j] = Eigen::Vector2cd(h, minus ? -h : h);
    }
  }
  return ProductState(std::move(f));
}

inline ProductState sample_u1_initial_state(int L, Stream& rng) {
  return u1_initial_state_from_signs(L, rng());
}

// U(t) P U(t)^dagger |base> for a single-site operator P (Pauli Z by default).
inline PureState heisenberg_state(const CircuitRealization& circuit, int op_site, const PureState& base, int t,
                                  const Gate1& op = gates::pauli_z()) {
  if (t < 0 || t > circuit.depth())
    throw InvalidArgument("heisenberg_state: t = " + std::to_string(t) + " exceeds circuit depth " +
                          std::to_string(circuit.depth()));
  if (base.qubits() != circuit.qubits()) throw InvalidArgument("heisenberg_state: size mismatch");
  if (op_site < 0 || op_site >= circuit.qubits()) throw InvalidArgument("heisenberg_state: site out of range");
  const int n_layers = t * circuit.timestep_layers();
  PureState out = base;
  circuit.apply_inverse(out.amplitudes(), n_layers);
  apply_gate_unchecked(out.amplitudes(), op, op_site);
  circuit.apply_forward(out.amplitudes(), n_layers);
  return out;
}

struct PerturbedState {
  PureState psi;
  cplx a_t;
  double N_t = 1.0;
};

// (|base> + eps |phi>) / sqrt(N_t) with N_t = 1 + eps^2 + 2 eps Re <base|phi>.
inline PerturbedState perturbed_state(const PureState& phi, double epsilon, const PureState& base) {
  if (!(epsilon >= 0.0 && epsilon < 1.0)) throw InvalidArgument("perturbed_state: epsilon must lie in [0, 1)");
  if (!phi.normalized(1e-10) || !base.normalized(1e-10))
    throw InvalidArgument("perturbed_state: inputs must be normalized");
  PerturbedState out;
  out.a_t = base.inner(phi);
  out.N_t = 1.0 + epsilon * epsilon + 2.0 * epsilon * out.a_t.real();
  if (!(out.N_t > 0.0)) throw InvalidArgument("perturbed_state: non-positive normalization");
  if (epsilon == 0.0) {
    out.psi = base;
    return out;
  }
  CVector v = (base.amplitudes() + epsilon * phi.amplitudes()) / std::sqrt(out.N_t);
  out.psi = PureState(base.qubits(), std::move(v));
  return out;
}

}  // namespace hent
