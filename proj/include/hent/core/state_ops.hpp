#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "hent/core/lapack.hpp"
#include "hent/core/types.hpp"

namespace hent {

using Gate1 = Eigen::Matrix2cd;
using Gate2 = Eigen::Matrix4cd;

// ---------------------------------------------------------------------------
// Product states
// ---------------------------------------------------------------------------

// Tensor product of single-site spinors; site k is factor k.
class ProductState {
 public:
  ProductState() = default;
  explicit ProductState(std::vector<Eigen::Vector2cd> factors) : f_(std::move(factors)) {}

  static ProductState all_zero(int n) {
    return ProductState(std::vector<Eigen::Vector2cd>(n, Eigen::Vector2cd(1.0, 0.0)));
  }

  int sites() const noexcept { return static_cast<int>(f_.size()); }
  const Eigen::Vector2cd& factor(int site) const { return f_.at(site); }

  // Kronecker product over `site_list`, first listed site on the lowest bit.
  CVector vector_on(const std::vector<int>& site_list) const {
    CVector v = CVector::Ones(1);
    for (int s : site_list) {
      const auto& f = f_.at(s);
      CVector next(v.size() * 2);
      next.head(v.size()) = v * f(0);
      next.tail(v.size()) = v * f(1);
      v = std::move(next);
    }
    return v;
  }

  CVector vector_on(const Region& r) const { return vector_on(sites_of(r)); }

  PureState to_state() const {
    std::vector<int> all(f_.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
    return PureState(sites(), vector_on(all));
  }

  ProductState restricted(const Region& r) const {
    r.validate(sites() + 1);
    return ProductState(std::vector<Eigen::Vector2cd>(f_.begin() + r.first(), f_.begin() + r.end()));
  }

  static std::vector<int> sites_of(const Region& r) {
    std::vector<int> s(r.count());
    for (int i = 0; i < r.count(); ++i) s[i] = r.first() + i;
    return s;
  }

 private:
  std::vector<Eigen::Vector2cd> f_;
};

// Sites outside `cut`, ascending. This is the bit order of the complement index.
inline std::vector<int> complement_sites(const Region& cut, int n) {
  std::vector<int> out;
  out.reserve(n - cut.count());
  for (int s = 0; s < n; ++s)
    if (!cut.contains(s)) out.push_back(s);
  return out;
}

// ---------------------------------------------------------------------------
// Reshaping across a cut
// ---------------------------------------------------------------------------

// Amplitude matrix Psi(a, b): a indexes the cut sites, b the complement.
inline CMatrix amplitude_matrix(const PureState& state, const Region& cut) {
  cut.validate(state.qubits() + (cut.count() == state.qubits() ? 1 : 0));
  const int lo = cut.first();
  const int cnt = cut.count();
  const Eigen::Index dA = Eigen::Index{1} << cnt;
  const Eigen::Index dB = state.dim() >> cnt;
  const CVector& amps = state.amplitudes();
  if (lo == 0) return Eigen::Map<const CMatrix>(amps.data(), dA, dB);

  CMatrix m(dA, dB);
  const std::uint64_t low_mask = (std::uint64_t{1} << lo) - 1;
  const std::uint64_t a_mask = static_cast<std::uint64_t>(dA) - 1;
  for (std::uint64_t i = 0; i < static_cast<std::uint64_t>(state.dim()); ++i) {
    const std::uint64_t a = (i >> lo) & a_mask;
    const std::uint64_t b = (i & low_mask) | ((i >> (lo + cnt)) << lo);
    m(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = amps(static_cast<Eigen::Index>(i));
  }
  return m;
}

// Inverse of amplitude_matrix.
inline PureState state_from_matrix(const CMatrix& m, int n_qubits, const Region& cut) {
  const int lo = cut.first();
  const int cnt = cut.count();
  if (m.rows() != (Eigen::Index{1} << cnt) || m.rows() * m.cols() != (Eigen::Index{1} << n_qubits))
    throw InvalidArgument("state_from_matrix: shape does not match cut");
  CVector amps(m.size());
  if (lo == 0) {
    amps = Eigen::Map<const CVector>(m.data(), m.size());
  } else {
    const std::uint64_t low_mask = (std::uint64_t{1} << lo) - 1;
    const std::uint64_t a_mask = static_cast<std::uint64_t>(m.rows()) - 1;
    for (std::uint64_t i = 0; i < static_cast<std::uint64_t>(amps.size()); ++i) {
      const std::uint64_t a = (i >> lo) & a_mask;
      const std::uint64_t b = (i & low_mask) | ((i >> (lo + cnt)) << lo);
      amps(static_cast<Eigen::Index>(i)) = m(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
    }
  }
  return PureState(n_qubits, std::move(amps));
}

// ---------------------------------------------------------------------------
// Gates
// ---------------------------------------------------------------------------

template <typename M>
double unitarity_residual(const M& u) {
  return (u.adjoint() * u - M::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
}

namespace detail {

inline std::uint64_t insert_zero_bit(std::uint64_t i, int pos) {
  const std::uint64_t low = i & ((std::uint64_t{1} << pos) - 1);
  return ((i >> pos) << (pos + 1)) | low;
}

inline void check_site(int site, int n) {
  if (site < 0 || site >= n)
    throw InvalidArgument("gate site " + std::to_string(site) + " out of range for " +
                          std::to_string(n) + " qubits");
}

}  // namespace detail

// Local basis of the pair is |s_first s_second> -> 2*s_first + s_second.
inline void apply_gate_unchecked(CVector& amps, const Gate2& g, int s0, int s1) {
  const std::uint64_t b0 = std::uint64_t{1} << s0;
  const std::uint64_t b1 = std::uint64_t{1} << s1;
  const int lo = std::min(s0, s1);
  const int hi = std::max(s0, s1);
  const std::uint64_t quarter = static_cast<std::uint64_t>(amps.size()) >> 2;
  cplx* data = amps.data();
  for (std::uint64_t k = 0; k < quarter; ++k) {
    const std::uint64_t i = detail::insert_zero_bit(detail::insert_zero_bit(k, lo), hi);
    const std::uint64_t idx[4] = {i, i | b1, i | b0, i | b0 | b1};
    const cplx v0 = data[idx[0]], v1 = data[idx[1]], v2 = data[idx[2]], v3 = data[idx[3]];
    for (int r = 0; r < 4; ++r)
      data[idx[r]] = g(r, 0) * v0 + g(r, 1) * v1 + g(r, 2) * v2 + g(r, 3) * v3;
  }
}

inline void apply_gate_unchecked(CVector& amps, const Gate1& g, int site) {
  const std::uint64_t b = std::uint64_t{1} << site;
  const std::uint64_t half = static_cast<std::uint64_t>(amps.size()) >> 1;
  cplx* data = amps.data();
  for (std::uint64_t k = 0; k < half; ++k) {
    const std::uint64_t i = detail::insert_zero_bit(k, site);
    const cplx v0 = data[i], v1 = data[i | b];
    data[i] = g(0, 0) * v0 + g(0, 1) * v1;
    data[i | b] = g(1, 0) * v0 + g(1, 1) * v1;
  }
}

inline PureState apply_two_site_gate(PureState state, const Gate2& gate, int s0, int s1) {
  const double res = unitarity_residual(gate);
  if (res > 1e-12)
    throw InvalidArgument("apply_two_site_gate: gate not unitary, residual " + std::to_string(res));
  detail::check_site(s0, state.qubits());
  detail::check_site(s1, state.qubits());
  if (s0 == s1) throw InvalidArgument("apply_two_site_gate: sites must be distinct");
  apply_gate_unchecked(state.amplitudes(), gate, s0, s1);
  return state;
}

inline PureState apply_one_site_gate(PureState state, const Gate1& gate, int site) {
  const double res = unitarity_residual(gate);
  if (res > 1e-12)
    throw InvalidArgument("apply_one_site_gate: gate not unitary, residual " + std::to_string(res));
  detail::check_site(site, state.qubits());
  apply_gate_unchecked(state.amplitudes(), gate, site);
  return state;
}

// ---------------------------------------------------------------------------
// Projection onto a product bra and reduced density matrices
// ---------------------------------------------------------------------------

struct ProjectionSplit {
  PureState x;  // <bra_B|state> on the complement of B (unnormalized)
  PureState y;  // state - x (x) |bra_B>, on all sites (unnormalized)
};

// `bra` is given as the ket whose conjugate is applied; its length must be 2^|B|.
inline ProjectionSplit split_projection(const PureState& state, const Region& B, const CVector& bra) {
  B.validate(state.qubits());
  if (bra.size() != (Eigen::Index{1} << B.count()))
    throw InvalidArgument("partial_project: bra dimension does not match region");
  const CMatrix psi = amplitude_matrix(state, B);  // rows: B, cols: complement
  const CVector x = psi.transpose() * bra.conjugate();
  CMatrix y = psi - bra * x.transpose();
  const int nA = state.qubits() - B.count();
  return {PureState(nA, x), state_from_matrix(y, state.qubits(), B)};
}

inline PureState partial_project(const PureState& state, const Region& B, const ProductState& bra) {
  if (bra.sites() != B.count())
    throw InvalidArgument("partial_project: product bra must cover exactly the region");
  std::vector<int> local(B.count());
  for (int i = 0; i < B.count(); ++i) local[i] = i;
  return split_projection(state, B, bra.vector_on(local)).x;
}

inline DensityMatrix reduced_density(const PureState& state, const Region& keep) {
  if (!state.normalized(1e-10))
    throw InvalidArgument("reduced_density: state is not normalized (norm " +
                          std::to_string(state.norm()) + ")");
  const CMatrix psi = amplitude_matrix(state, keep);
  return DensityMatrix(psi * psi.adjoint());
}

// ---------------------------------------------------------------------------
// Dense Schmidt decomposition
// ---------------------------------------------------------------------------

// Cuts whose smaller side is at most this large go through a full SVD; larger
// ones through the Gram matrix of the smaller side.
inline constexpr Eigen::Index kSvdLimit = 1024;

namespace detail {

inline std::vector<double> sorted_weights(const RVector& vals, bool squared) {
  std::vector<double> w(vals.size());
  for (Eigen::Index i = 0; i < vals.size(); ++i) {
    const double v = squared ? vals(i) * vals(i) : vals(i);
    w[i] = std::max(v, 0.0);
  }
  std::sort(w.begin(), w.end(), std::greater<>());
  return w;
}

}  // namespace detail

// Full Schmidt spectrum of `psi` (rows: cut side). Left vectors optional.
inline SchmidtSpectrum schmidt_from_matrix(CMatrix psi, const Region& cut, bool vectors) {
  SchmidtSpectrum out;
  out.cut = cut;
  const Eigen::Index dA = psi.rows();
  const Eigen::Index dB = psi.cols();
  if (std::min(dA, dB) <= kSvdLimit) {
    CMatrix u;
    const RVector s = lapack::gesdd(psi, vectors ? &u : nullptr);
    out.weights = detail::sorted_weights(s, true);  // gesdd returns descending order
    if (vectors) out.left_vectors = std::move(u);
    return out;
  }
  if (vectors || dA <= dB) {
    CMatrix rho = psi * psi.adjoint();
    const RVector ev = lapack::heevd(rho, vectors);
    out.weights = detail::sorted_weights(ev, false);
    if (vectors) out.left_vectors = rho.rowwise().reverse();
  } else {
    CMatrix gram = psi.adjoint() * psi;
    out.weights = detail::sorted_weights(lapack::heevd(gram, false), false);
  }
  return out;
}

inline SchmidtSpectrum schmidt_decompose(const PureState& state, const Region& cut, bool vectors = false) {
  if (!state.normalized(1e-10))
    throw InvalidArgument("schmidt_decompose: state is not normalized");
  cut.validate(state.qubits());
  return schmidt_from_matrix(amplitude_matrix(state, cut), cut, vectors);
}

}  // namespace hent
