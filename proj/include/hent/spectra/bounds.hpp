#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "hent/core/eigen.hpp"
#include "hent/core/entropy.hpp"
#include "hent/core/rng.hpp"
#include "hent/spectra/spike_cloud.hpp"

namespace hent {

inline constexpr double kBoundSlack = 1e-9;

struct BoundsRecord {
  std::string name;
  double alpha = std::numeric_limits<double>::quiet_NaN();
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;  // rhs - lhs
  bool satisfied = true;
  bool applicable = true;
};

struct BoundsReport {
  std::vector<BoundsRecord> records;

  void add(std::string name, double lhs, double rhs, double alpha = std::numeric_limits<double>::quiet_NaN()) {
    BoundsRecord r;
    r.name = std::move(name);
    r.alpha = alpha;
    r.lhs = lhs;
    r.rhs = rhs;
    r.margin = rhs - lhs;
    r.satisfied = lhs <= rhs + kBoundSlack;
    records.push_back(std::move(r));
  }

  void add_not_applicable(std::string name, double alpha = std::numeric_limits<double>::quiet_NaN()) {
    BoundsRecord r;
    r.name = std::move(name);
    r.alpha = alpha;
    r.lhs = r.rhs = r.margin = std::numeric_limits<double>::quiet_NaN();
    r.applicable = false;
    records.push_back(std::move(r));
  }

  void append(const BoundsReport& other) {
    records.insert(records.end(), other.records.begin(), other.records.end());
  }

  int violations() const {
    int n = 0;
    for (const auto& r : records)
      if (r.applicable && !r.satisfied) ++n;
    return n;
  }
  int evaluated() const {
    int n = 0;
    for (const auto& r : records) n += r.applicable ? 1 : 0;
    return n;
  }
};

// ---------------------------------------------------------------------------
// Spike-cloud Renyi inequalities: (a) alpha > 1, (b) alpha = 1, (c) alpha < 1.
// ---------------------------------------------------------------------------

inline BoundsReport check_appendixA_bounds(const SpikeCloud& cloud, const DensityMatrix& rho_A,
                                           const std::vector<double>& alpha_grid) {
  BoundsReport rep;
  const double mu = cloud.mu;
  const double eps2 = cloud.epsilon * cloud.epsilon;
  const std::vector<double> rho_w = density_spectrum(rho_A.matrix());
  const std::vector<double> omega_w = cloud.omega ? density_spectrum(cloud.omega->matrix()) : std::vector<double>{1.0};

  for (double alpha : alpha_grid) {
    if (alpha == 1.0) continue;
    const double s_rho = renyi_entropy(rho_w, alpha);
    if (alpha > 1.0) {
      const double k = alpha / (alpha - 1.0);
      rep.add("A.a_eps", s_rho, k * std::log(1.0 / (1.0 - eps2)), alpha);
      rep.add("A.a_mu", s_rho, k * std::log(1.0 / (1.0 - mu)), alpha);
    } else {
      const double s_om = renyi_entropy(omega_w, alpha);
      if (mu > 0.0)
        rep.add("A.c_lower", s_om + alpha / (1.0 - alpha) * std::log(mu), s_rho, alpha);
      else
        rep.add_not_applicable("A.c_lower", alpha);
      const double inner = std::pow(1.0 - mu, alpha) + std::pow(mu, alpha) * std::exp((1.0 - alpha) * s_om);
      rep.add("A.c_upper", s_rho, std::log(inner) / (1.0 - alpha), alpha);
    }
  }
  const double s1_rho = renyi_entropy(rho_w, 1.0);
  const double s1_om = renyi_entropy(omega_w, 1.0);
  rep.add("A.b_lower", mu * s1_om, s1_rho, 1.0);
  rep.add("A.b_upper", s1_rho, binary_entropy(mu) + mu * s1_om, 1.0);
  return rep;
}

// ---------------------------------------------------------------------------
// Operator norm of a density matrix
// ---------------------------------------------------------------------------

inline double hermitian_operator_norm(const CMatrix& m, double tol = 1e-10, std::uint64_t seed = 7) {
  if (m.rows() <= 1024) {
    const RVector ev = hermitian_eigenvalues(m);
    return std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
  }
  // power iteration on a PSD matrix
  Stream rng(seed);
  CVector x(m.rows());
  for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = cplx(rng.uniform() - 0.5, rng.uniform() - 0.5);
  x.normalize();
  double lambda = 0.0;
  for (int it = 0; it < 100000; ++it) {
    const CVector y = m * x;
    lambda = x.dot(y).real();
    const double res = (y - lambda * x).norm();
    if (res <= tol) return lambda;
    x = y / y.norm();
  }
  throw ConvergenceError("hermitian_operator_norm: power iteration did not converge", 0.0, 100000);
}

// ---------------------------------------------------------------------------
// Overlap between the spike and the top eigenvector of rho_A
// ---------------------------------------------------------------------------

struct OverlapBound {
  BoundsReport report;
  bool applicable = false;
  double a = 0.0;           // <v|omega|v>
  double omega_norm = 0.0;  // ||omega||_inf
  double delta = 0.0;
  double lhs = 0.0;         // 1 - |<lambda_1|v>|^2
  double mid = 0.0;         // mu^2 (<v|omega^2|v> - a^2) / delta^2
  double rhs = 0.0;         // mu^2 a / delta^2
};

inline double overlap_delta(double mu, double a, double omega_norm) { return 1.0 - mu + mu * a - mu * omega_norm; }

inline OverlapBound check_overlap_bound(const SpikeCloud& cloud, const DensityMatrix& rho_A) {
  OverlapBound out;
  const CVector& v = cloud.v.amplitudes();
  const HermitianEigen es = eigendecompose_hermitian(rho_A.matrix());
  const CVector top = es.vectors.col(es.values.size() - 1);
  out.lhs = 1.0 - std::norm(top.dot(v));

  if (!cloud.omega || cloud.mu == 0.0) {
    out.applicable = true;
    out.delta = 1.0;
    out.report.add("B.chain_first", out.lhs, 0.0);
    out.report.add("B.chain_second", 0.0, 0.0);
    out.report.add_not_applicable("B.lemma_alpha2", 2.0);
    return out;
  }
  const CMatrix& om = cloud.omega->matrix();
  const CVector wv = om * v;
  const double mu = cloud.mu;
  out.a = v.dot(wv).real();
  const double v_om2_v = wv.squaredNorm();
  out.omega_norm = hermitian_operator_norm(om);
  out.delta = overlap_delta(mu, out.a, out.omega_norm);

  const double s2_omega = renyi_entropy(density_spectrum(om), 2.0);
  out.report.add("B.lemma_alpha2", out.a, std::exp(-0.5 * s2_omega), 2.0);

  if (out.delta <= 0.0) {
    out.report.add_not_applicable("B.chain_first");
    out.report.add_not_applicable("B.chain_second");
    return out;
  }
  out.applicable = true;
  const double d2 = out.delta * out.delta;
  out.mid = mu * mu * (v_om2_v - out.a * out.a) / d2;
  out.rhs = mu * mu * out.a / d2;
  out.report.add("B.chain_first", out.lhs, out.mid);
  out.report.add("B.chain_second", out.mid, out.rhs);
  return out;
}

// ---------------------------------------------------------------------------
// Entropy of one pure state bounded by the S_{1/2} of another and their overlap.
// ---------------------------------------------------------------------------

inline BoundsReport check_overlap_entropy_lemma(const std::vector<double>& phi_weights,
                                                const std::vector<double>& psi_weights, double overlap_abs,
                                                const std::vector<double>& alpha_grid) {
  BoundsReport rep;
  const double s_half = renyi_entropy(phi_weights, 0.5);
  for (double alpha : alpha_grid) {
    if (alpha <= 1.0) continue;
    if (!(overlap_abs > 0.0)) {
      rep.add_not_applicable("F.lemma", alpha);
      continue;
    }
    const double rhs = s_half - 2.0 * alpha / (alpha - 1.0) * std::log(overlap_abs);
    rep.add("F.lemma", renyi_entropy(psi_weights, alpha), rhs, alpha);
  }
  return rep;
}

// |S_1(rho) - S_1(sigma)| <= T ln(d - 1) + h2(T), T the trace distance.
inline double fannes_audenaert_bound(double trace_distance, Eigen::Index dim) {
  if (!(trace_distance >= 0.0 && trace_distance <= 1.0))
    throw InvalidArgument("fannes_audenaert_bound: trace distance must lie in [0, 1]");
  if (dim < 1) throw InvalidArgument("fannes_audenaert_bound: dimension must be positive");
  const double log_term = dim > 1 ? std::log(static_cast<double>(dim - 1)) : 0.0;
  return trace_distance * log_term + binary_entropy(trace_distance);
}

inline double trace_distance(const CMatrix& rho, const CMatrix& sigma) {
  const RVector ev = hermitian_eigenvalues(CMatrix(rho - sigma));
  return 0.5 * ev.cwiseAbs().sum();
}

}  // namespace hent
