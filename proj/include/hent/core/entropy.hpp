#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "hent/core/types.hpp"

namespace hent {

inline constexpr double kClipFloor = 1e-14;

// Renyi entropy in nats. Weights below kClipFloor are dropped.
inline double renyi_entropy(const std::vector<double>& weights, double alpha) {
  if (!(alpha > 0.0)) throw InvalidArgument("renyi_entropy: alpha must be positive");
  double total = 0.0;
  for (double w : weights) {
    if (w < -1e-12) throw InvalidArgument("renyi_entropy: negative weight " + std::to_string(w));
    total += std::max(w, 0.0);
  }
  if (total > 1.0 + 1e-9) throw InvalidArgument("renyi_entropy: weights sum above one");

  if (alpha == 1.0) {
    double s = 0.0;
    for (double w : weights)
      if (w >= kClipFloor) s -= w * std::log(w);
    return s;
  }
  double acc = 0.0;
  for (double w : weights)
    if (w >= kClipFloor) acc += std::pow(w, alpha);
  if (acc <= 0.0) return 0.0;
  return std::log(acc) / (1.0 - alpha);
}

inline double binary_entropy(double p) {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -p * std::log(p) - (1.0 - p) * std::log1p(-p);
}

// 0.05, 0.10, ..., 3.00 merged with 1/7, 1/3, 1/2, 1; sorted, duplicates removed.
inline std::vector<double> standard_alpha_grid() {
  std::vector<double> g;
  for (int i = 1; i <= 60; ++i) g.push_back(i / 20.0);
  for (double a : {1.0 / 7.0, 1.0 / 3.0, 0.5, 1.0}) g.push_back(a);
  std::sort(g.begin(), g.end());
  std::vector<double> out;
  for (double a : g)
    if (out.empty() || std::abs(a - out.back()) > 1e-12) out.push_back(a);
  return out;
}

inline std::vector<double> renyi_curve(const std::vector<double>& weights, const std::vector<double>& alphas) {
  std::vector<double> s;
  s.reserve(alphas.size());
  for (double a : alphas) s.push_back(renyi_entropy(weights, a));
  return s;
}

// Spectrum of a density matrix, descending, negatives clipped to zero.
inline std::vector<double> density_spectrum(const CMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(rho, Eigen::EigenvaluesOnly);
  std::vector<double> w(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  for (double& x : w) x = std::max(x, 0.0);
  std::sort(w.begin(), w.end(), std::greater<>());
  return w;
}

}  // namespace hent
