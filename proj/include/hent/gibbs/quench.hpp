#pragma once

#include <cmath>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hent/core/entropy.hpp"
#include "hent/core/pauli.hpp"
#include "hent/core/subspace.hpp"
#include "hent/experiments/fit.hpp"
#include "hent/gibbs/ising.hpp"
#include "hent/spectra/bounds.hpp"

namespace hent {

// sqrt(rho) of a locally quenched Gibbs state as a 2^L x 2^L matrix; rows are
// system basis states, columns ancilla basis states.
struct PurificationState {
  int L = 0;
  CMatrix M;

  double frobenius_norm() const { return M.norm(); }

  // Purification vector on 2L qubits, interleaved: qubit 2k is system site k
  // and qubit 2k + 1 its ancilla. A block of sites with their ancillas is then
  // a contiguous qubit range.
  PureState vector() const {
    const std::uint64_t n = std::uint64_t{1} << L;
    std::vector<std::uint64_t> spread(n);
    for (std::uint64_t i = 0; i < n; ++i) {
      std::uint64_t s = 0;
      for (int b = 0; b < L; ++b) s |= ((i >> b) & 1) << (2 * b);
      spread[i] = s;
    }
    CVector v(static_cast<Eigen::Index>(n * n));
    for (std::uint64_t j = 0; j < n; ++j) {
      const std::uint64_t hi = spread[j] << 1;
      for (std::uint64_t i = 0; i < n; ++i)
        v(static_cast<Eigen::Index>(spread[i] | hi)) = M(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
    return PureState(2 * L, std::move(v));
  }

  // Qubit range of the paired cut A_s A_a for a block of system sites.
  static Region paired(const Region& sites) { return Region(2 * sites.first(), 2 * sites.count()); }
};

class QuenchRun {
 public:
  QuenchRun(std::shared_ptr<const IsingEigensystem> eig, double beta, double theta)
      : eig_(std::move(eig)), beta_(beta), theta_(theta) {
    if (!eig_) throw InvalidArgument("QuenchRun: missing eigensystem");
    if (!(beta >= 0.0) || !std::isfinite(beta)) throw InvalidArgument("QuenchRun: beta must be finite and non-negative");
    if (!std::isfinite(theta)) throw InvalidArgument("QuenchRun: theta must be finite");
    const RVector& E = eig_->energies;
    const Eigen::Index n = E.size();
    g_.resize(n);
    for (Eigen::Index m = 0; m < n; ++m) g_(m) = std::exp(-0.5 * beta * (E(m) - E(0)));
    g_ /= g_.norm();  // sum of g^2 is Z(beta) up to the ground-state shift

    const double c = std::cos(theta), s = std::sin(theta);
    static_quench_ = (s == 0.0);
    if (!static_quench_) {
      const RMatrix& Z = eig_->z_hat;
      kr_.noalias() = (s * s) * (Z * g_.asDiagonal()) * Z;
      kr_.diagonal() += (c * c) * g_;
      ki_.resize(n, n);
      for (Eigen::Index col = 0; col < n; ++col)
        for (Eigen::Index row = 0; row < n; ++row) ki_(row, col) = c * s * Z(row, col) * (g_(col) - g_(row));
    }
  }

  double beta() const noexcept { return beta_; }
  double theta() const noexcept { return theta_; }
  int L() const noexcept { return eig_->spec.L; }
  const IsingEigensystem& eigensystem() const noexcept { return *eig_; }
  std::shared_ptr<const IsingEigensystem> eigensystem_ptr() const noexcept { return eig_; }
  const RVector& thermal_amplitudes() const noexcept { return g_; }

  // ||U^dagger H U - H|| = 2 |g| |sin(theta)|
  double delta_h_norm() const { return 2.0 * std::abs(eig_->spec.g) * std::abs(std::sin(theta_)); }

  // e^{-beta H / 2} / sqrt(Z): the unquenched purification matrix.
  RMatrix unquenched_matrix() const {
    const RMatrix& V = eig_->vectors;
    return V * g_.asDiagonal() * V.transpose();
  }

  // e^{iHt} U^dagger e^{-beta H/2} U e^{-iHt} / sqrt(Z), U = exp(-i theta Z_site).
  PurificationState purification(double t) const {
    PurificationState p;
    p.L = L();
    if (static_quench_) {
      p.M = unquenched_matrix().cast<cplx>();
      return p;
    }
    const RVector& E = eig_->energies;
    const RMatrix& V = eig_->vectors;
    const Eigen::Index n = E.size();
    RMatrix pr(n, n), pi(n, n);
    for (Eigen::Index col = 0; col < n; ++col)
      for (Eigen::Index row = 0; row < n; ++row) {
        const double phi = (E(row) - E(col)) * t;
        const double cs = std::cos(phi), sn = std::sin(phi);
        pr(row, col) = kr_(row, col) * cs - ki_(row, col) * sn;
        pi(row, col) = kr_(row, col) * sn + ki_(row, col) * cs;
      }
    RMatrix tmp(n, n);
    p.M.resize(n, n);
    tmp.noalias() = V * pr;
    pr.noalias() = tmp * V.transpose();
    p.M.real() = pr;
    tmp.noalias() = V * pi;
    pi.noalias() = tmp * V.transpose();
    p.M.imag() = pi;
    return p;
  }

 private:
  std::shared_ptr<const IsingEigensystem> eig_;
  double beta_;
  double theta_;
  bool static_quench_ = false;
  RVector g_;
  RMatrix kr_;  // real part of the quenched operator in the eigenbasis
  RMatrix ki_;  // imaginary part
};

// ---------------------------------------------------------------------------
// Spectra across paired cuts
// ---------------------------------------------------------------------------

inline SchmidtSpectrum purification_schmidt(const PurificationState& p, const Region& A_sites, bool vectors = false) {
  A_sites.validate(p.L);
  SchmidtSpectrum s = schmidt_decompose(p.vector(), PurificationState::paired(A_sites), vectors);
  s.cut = A_sites;
  return s;
}

// Leading k Schmidt weights and vectors; the full spectrum is only computed
// when the cut is small.
inline SchmidtSpectrum purification_top_schmidt(const PurificationState& p, const Region& A_sites, int k,
                                                double residual_tol = 1e-12) {
  A_sites.validate(p.L);
  const Region cut = PurificationState::paired(A_sites);
  const Eigen::Index dA = Eigen::Index{1} << cut.count();
  const PureState vec = p.vector();
  SchmidtSpectrum s;
  if (dA <= kDenseVectorLimit || k > dA / 8) {
    s = schmidt_decompose(vec, cut, true);
    if (s.left_vectors && s.left_vectors->cols() > k) s.left_vectors = s.left_vectors->leftCols(k).eval();
  } else {
    SubspaceOptions opt;
    opt.residual_tol = residual_tol;
    s = top_schmidt_matrix_free(vec, cut, k, opt);
  }
  s.cut = A_sites;
  return s;
}

// 1 - (sum of the k largest weights), clipped to [0, 1].
inline double truncation_error(const SchmidtSpectrum& spectrum, int k) {
  if (k < 0) throw InvalidArgument("truncation_error: k must be non-negative");
  if (spectrum.truncated_rank && k > *spectrum.truncated_rank)
    throw InvalidArgument("truncation_error: k exceeds the computed rank");
  double kept = 0.0;
  for (int i = 0; i < k && i < static_cast<int>(spectrum.weights.size()); ++i) kept += spectrum.weights[i];
  return std::clamp(1.0 - kept, 0.0, 1.0);
}

// ---------------------------------------------------------------------------
// Expectation values
// ---------------------------------------------------------------------------

inline cplx exact_expectation(const PurificationState& p, const PauliString& op) {
  if (op.max_site() >= p.L) throw InvalidArgument("exact_expectation: operator outside the chain");
  CMatrix om = p.M;
  for (Eigen::Index j = 0; j < om.cols(); ++j) {
    CVector col = om.col(j);
    op.apply(col);
    om.col(j) = col;
  }
  return (p.M.conjugate().cwiseProduct(om)).sum();  // tr(M^dagger O M)
}

// Expectation value in the renormalized top-k truncation, from a spectrum
// that already holds at least k leading vectors on the paired cut of `A_sites`.
inline cplx truncated_expectation(const SchmidtSpectrum& s, const Region& A_sites, int k, const PauliString& op) {
  if (k < 1) throw InvalidArgument("truncated_expectation: k must be at least 1");
  for (const auto& [site, pauli] : op.ops())
    if (!A_sites.contains(site)) throw InvalidArgument("truncated_expectation: operator support outside A");
  if (op.empty()) return 1.0;
  if (!s.left_vectors) throw InvalidArgument("truncated_expectation: spectrum carries no Schmidt vectors");
  const CMatrix& u = *s.left_vectors;
  if (u.rows() != (Eigen::Index{1} << (2 * A_sites.count())))
    throw InvalidArgument("truncated_expectation: Schmidt vectors do not match the cut");
  const int kk = static_cast<int>(std::min<Eigen::Index>(k, u.cols()));
  double norm = 0.0;
  for (int i = 0; i < kk; ++i) norm += s.weights[i];
  cplx acc = 0.0;
  const int first = A_sites.first();
  for (int i = 0; i < kk; ++i) {
    CVector ou = u.col(i);
    op.apply(ou, [first](int site) { return 2 * (site - first); });
    acc += s.weights[i] * u.col(i).dot(ou);
  }
  return acc / norm;
}

inline cplx truncated_expectation(const PurificationState& p, const Region& A_sites, int k, const PauliString& op) {
  if (k < 1) throw InvalidArgument("truncated_expectation: k must be at least 1");
  for (const auto& [site, pauli] : op.ops())
    if (!A_sites.contains(site)) throw InvalidArgument("truncated_expectation: operator support outside A");
  if (op.empty()) return 1.0;
  return truncated_expectation(purification_top_schmidt(p, A_sites, k), A_sites, k, op);
}

// ---------------------------------------------------------------------------
// Overlap with the unquenched purification and the area-law suite
// ---------------------------------------------------------------------------

struct OverlapResult {
  cplx overlap;
  double lower_bound = 0.0;  // exp(-beta |g| |sin theta|)
};

inline OverlapResult overlap_with_unquenched(const QuenchRun& run, double t) {
  const RMatrix m0 = run.unquenched_matrix();
  const PurificationState p = run.purification(t);
  OverlapResult r;
  r.overlap = (m0.cast<cplx>().cwiseProduct(p.M)).sum();  // m0 is real
  r.lower_bound = std::exp(-0.5 * run.beta() * run.delta_h_norm());
  return r;
}

inline BoundsReport area_law_bound_check(const QuenchRun& run, double t, const std::vector<double>& alpha_grid,
                                         std::optional<Region> A_sites = std::nullopt) {
  const Region A = A_sites.value_or(Region::prefix(run.L() / 2));
  PurificationState phi;
  phi.L = run.L();
  phi.M = run.unquenched_matrix().cast<cplx>();
  const PurificationState psi = run.purification(t);
  const double ov = std::abs(phi.M.cwiseProduct(psi.M).sum());
  const SchmidtSpectrum sp = purification_schmidt(phi, A);
  const SchmidtSpectrum sq = purification_schmidt(psi, A);

  BoundsReport rep = check_overlap_entropy_lemma(sp.weights, sq.weights, ov, alpha_grid);
  const double s_half = renyi_entropy(sp.weights, 0.5);
  const double bdh = run.beta() * run.delta_h_norm();
  for (double alpha : alpha_grid) {
    if (alpha <= 1.0) continue;
    rep.add("F.corollary", renyi_entropy(sq.weights, alpha), s_half + alpha / (alpha - 1.0) * bdh, alpha);
  }
  rep.add("F.large_schmidt", std::exp(-s_half - bdh), sq.leading());
  rep.add("F.overlap_lower", std::exp(-0.5 * bdh), ov);
  return rep;
}

// ---------------------------------------------------------------------------
// Scaling fits
// ---------------------------------------------------------------------------

// S_1(L) = s_1 L + c, optionally after subtracting a per-size baseline.
inline LinearFit volume_coeff_fit(const std::vector<double>& Ls, const std::vector<double>& S,
                                  const std::vector<double>* baseline = nullptr) {
  if (Ls.size() < 3) throw InvalidArgument("volume_coeff_fit: need at least three sizes");
  std::vector<double> y = S;
  if (baseline != nullptr) {
    if (baseline->size() != S.size()) throw InvalidArgument("volume_coeff_fit: baseline size mismatch");
    for (std::size_t i = 0; i < y.size(); ++i) y[i] -= (*baseline)[i];
  }
  return least_squares_fit(Ls, y);
}

enum class PerturbativeRegime { small_beta, small_theta };

struct PerturbativeRecord {
  PerturbativeRegime regime = PerturbativeRegime::small_beta;
  double fixed = 0.0;  // theta for small_beta, beta for small_theta
  int k = 1;
  double thermal_tail = 0.0;         // error at the unperturbed point (small_theta only)
  std::vector<double> params;
  std::vector<double> errors;        // truncation error after k states
  std::vector<double> excess;        // errors minus thermal_tail
  LinearFit fit;                     // log2 error vs log2 param
  std::optional<LinearFit> fit_excess;
};

// Number of weights above `cutoff` in the unquenched purification spectrum.
inline int thermal_rank(const std::shared_ptr<const IsingEigensystem>& eig, double beta, const Region& A,
                        double cutoff = 1e-3) {
  const QuenchRun run(eig, beta, 0.0);
  const SchmidtSpectrum s = purification_top_schmidt(run.purification(0.0), A, 32);
  int d = 0;
  for (double w : s.weights) d += w > cutoff ? 1 : 0;
  return std::max(d, 1);
}

inline PerturbativeRecord perturbative_rank_checks(const std::shared_ptr<const IsingEigensystem>& eig,
                                                   PerturbativeRegime regime, double fixed,
                                                   const std::vector<double>& grid, double t,
                                                   std::optional<int> k = std::nullopt) {
  if (grid.size() < 3) throw InvalidArgument("perturbative_rank_checks: need at least three grid points");
  const Region A = Region::prefix(eig->spec.L / 2);
  PerturbativeRecord rec;
  rec.regime = regime;
  rec.fixed = fixed;
  if (regime == PerturbativeRegime::small_beta) {
    rec.k = k.value_or(1);
  } else {
    rec.k = k.value_or(thermal_rank(eig, fixed, A));
    const QuenchRun base(eig, fixed, 0.0);
    rec.thermal_tail = truncation_error(purification_top_schmidt(base.purification(t), A, rec.k), rec.k);
  }
  bool excess_positive = true;
  for (double x : grid) {
    const double beta = regime == PerturbativeRegime::small_beta ? x : fixed;
    const double theta = regime == PerturbativeRegime::small_beta ? fixed : x;
    const QuenchRun run(eig, beta, theta);
    const double err = truncation_error(purification_top_schmidt(run.purification(t), A, rec.k), rec.k);
    rec.params.push_back(x);
    rec.errors.push_back(err);
    rec.excess.push_back(err - rec.thermal_tail);
    excess_positive = excess_positive && rec.excess.back() > 0.0;
  }
  rec.fit = loglog2_fit(rec.params, rec.errors);
  if (regime == PerturbativeRegime::small_theta && excess_positive) rec.fit_excess = loglog2_fit(rec.params, rec.excess);
  return rec;
}

}  // namespace hent
