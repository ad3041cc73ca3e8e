#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "hent/experiments/fit.hpp"

namespace hent {

struct AlphaCEstimate {
  double alpha_c_hat = std::numeric_limits<double>::quiet_NaN();
  bool found = false;
  bool monotone = true;       // slopes non-increasing in alpha (within slack)
  std::vector<double> alphas;
  std::vector<double> slopes;  // d S_alpha / d L, nats per site
  double threshold = 0.02;
  // alpha_c_hat at half and double the threshold
  double alpha_c_low_threshold = std::numeric_limits<double>::quiet_NaN();
  double alpha_c_high_threshold = std::numeric_limits<double>::quiet_NaN();
};

namespace detail {
inline double first_below(const std::vector<double>& alphas, const std::vector<double>& slopes, double thr) {
  for (std::size_t i = 0; i < alphas.size(); ++i)
    if (slopes[i] < thr) return alphas[i];
  return std::numeric_limits<double>::quiet_NaN();
}
}  // namespace detail

// entropies[a][l] = S_{alphas[a]} at size Ls[l]. Alphas must be ascending.
inline AlphaCEstimate alpha_c_estimate(const std::vector<double>& Ls, const std::vector<double>& alphas,
                                       const std::vector<std::vector<double>>& entropies, double threshold = 0.02,
                                       double monotone_slack = 1e-3) {
  if (Ls.size() < 3) throw InvalidArgument("alpha_c_estimate: need at least three system sizes");
  if (entropies.size() != alphas.size()) throw InvalidArgument("alpha_c_estimate: one curve per alpha required");
  for (std::size_t i = 1; i < alphas.size(); ++i)
    if (!(alphas[i] > alphas[i - 1])) throw InvalidArgument("alpha_c_estimate: alphas must be ascending");

  AlphaCEstimate est;
  est.alphas = alphas;
  est.threshold = threshold;
  for (const auto& curve : entropies) est.slopes.push_back(least_squares_fit(Ls, curve).slope);
  for (std::size_t i = 1; i < est.slopes.size(); ++i)
    if (est.slopes[i] > est.slopes[i - 1] + monotone_slack) est.monotone = false;

  est.alpha_c_hat = detail::first_below(alphas, est.slopes, threshold);
  est.found = !std::isnan(est.alpha_c_hat);
  est.alpha_c_low_threshold = detail::first_below(alphas, est.slopes, 0.5 * threshold);
  est.alpha_c_high_threshold = detail::first_below(alphas, est.slopes, 2.0 * threshold);
  return est;
}

}  // namespace hent
