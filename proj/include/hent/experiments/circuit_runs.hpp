#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hent/circuits/circuit.hpp"
#include "hent/core/budget.hpp"
#include "hent/experiments/context.hpp"
#include "hent/experiments/parallel.hpp"
#include "hent/spectra/alpha_c.hpp"
#include "hent/spectra/hierarchy.hpp"
#include "hent/spectra/spike_cloud.hpp"

namespace hent {

// One realization of the perturbed circuit state and its nested hierarchy.
struct HierarchySample {
  std::uint64_t seed = 0;
  int L = 0;
  int time = 0;
  cplx a_t = 0.0;
  double spike_mu = 0.0;
  std::vector<HierarchyLevel> levels;
  // level-2 split of the rank-2 Schmidt vector of rho_{A_1/2}
  std::optional<SchmidtSpectrum> second_split;
};

inline ProductState ensemble_base_state(Ensemble e, int L, std::uint64_t seed) {
  if (e != Ensemble::u1) return ProductState::all_zero(L);
  Stream rng = Stream(seed).child(1);
  return sample_u1_initial_state(L, rng);
}

inline HierarchySample hierarchy_sample(Ensemble e, int L, double epsilon, int t, int n_levels, std::uint64_t seed,
                                        double p_T = 0.5, bool want_second = true) {
  check_circuit_budget(L);
  HierarchySample s;
  s.seed = seed;
  s.L = L;
  s.time = t;
  const ProductState base = ensemble_base_state(e, L, seed);
  const PureState base_state = base.to_state();
  const CircuitRealization circ = build_circuit(e, L, std::max(t, 1), seed, p_T);
  const PureState phi = heisenberg_state(circ, center_site(L), base_state, t);
  const PerturbedState ps = perturbed_state(phi, epsilon, base_state);
  s.a_t = ps.a_t;
  s.spike_mu = spike_cloud_decompose(phi, epsilon, base, Region::prefix(L / 2)).mu;

  s.levels.push_back(hierarchy_top(ps.psi, 1, &base, want_second));
  while (static_cast<int>(s.levels.size()) < n_levels) {
    const HierarchyLevel& last = s.levels.back();
    if (hierarchy_subcut(last.state.qubits(), 1) < 1) break;
    s.levels.push_back(hierarchy_descend(last, &base, false));
  }
  if (want_second && s.levels.front().second) {
    const PureState& v2 = *s.levels.front().second;
    const int sub = hierarchy_subcut(v2.qubits(), 1);
    if (sub >= 1) s.second_split = schmidt_decompose(v2, Region::prefix(sub));
  }
  return s;
}

namespace detail {

inline void emit_levels(const RunContext& ctx, const HierarchySample& s, int sample_id, std::size_t schmidt_top,
                        ResultSet& out) {
  for (const auto& lvl : s.levels) {
    const std::vector<double> curve = renyi_curve(lvl.spectrum.weights, ctx.alpha_grid);
    for (std::size_t a = 0; a < curve.size(); ++a)
      out.renyi.push_back({ctx.id, sample_id, s.L, lvl.j, static_cast<double>(s.time), ctx.alpha_grid[a], curve[a], s.seed});
    const std::size_t top = std::min(schmidt_top, lvl.spectrum.weights.size());
    for (std::size_t r = 0; r < top; ++r)
      out.schmidt.push_back({ctx.id, sample_id, s.L, lvl.j, static_cast<double>(s.time), static_cast<int>(r + 1),
                             lvl.spectrum.weights[r], s.seed});
  }
  if (s.second_split) {
    const std::vector<double> curve = renyi_curve(s.second_split->weights, ctx.alpha_grid);
    for (std::size_t a = 0; a < curve.size(); ++a)
      out.renyi_second.push_back({ctx.id, sample_id, s.L, 2, static_cast<double>(s.time), ctx.alpha_grid[a], curve[a], s.seed});
  }
}

// Mean S_alpha(L) curves at one level, indexed [alpha][size].
inline std::vector<std::vector<double>> mean_curves(const std::vector<SummaryRow>& summary, const std::vector<int>& Ls,
                                                    const std::vector<double>& alphas, int level) {
  std::vector<std::vector<double>> out(alphas.size(), std::vector<double>(Ls.size(), std::nan("")));
  for (const auto& r : summary) {
    if (r.level_j != level) continue;
    for (std::size_t l = 0; l < Ls.size(); ++l)
      if (Ls[l] == r.L)
        for (std::size_t a = 0; a < alphas.size(); ++a)
          if (alphas[a] == r.alpha) out[a][l] = r.mean;
  }
  return out;
}

inline void emit_alpha_c(const std::vector<int>& Ls, const std::vector<double>& alphas,
                         const std::vector<std::vector<double>>& curves, int level, const std::string& slope_metric,
                         const std::string& prefix, ResultSet& out) {
  std::vector<double> xs(Ls.begin(), Ls.end());
  for (const auto& c : curves)
    for (double v : c)
      if (std::isnan(v)) return;
  const AlphaCEstimate est = alpha_c_estimate(xs, alphas, curves);
  for (std::size_t a = 0; a < alphas.size(); ++a) out.add_scaling("alpha", alphas[a], level, slope_metric, est.slopes[a]);
  out.add_scaling("level", level, level, prefix + "alpha_c_hat", est.alpha_c_hat);
  out.add_scaling("level", level, level, prefix + "alpha_c_low_threshold", est.alpha_c_low_threshold);
  out.add_scaling("level", level, level, prefix + "alpha_c_high_threshold", est.alpha_c_high_threshold);
  out.add_scaling("level", level, level, prefix + "alpha_c_monotone", est.monotone ? 1.0 : 0.0);
}

}  // namespace detail

// Figures 2, 4 and 5: saturated Renyi entropies of the nested hierarchy.
inline ResultSet run_circuit_hierarchy(const RunContext& ctx, Ensemble ensemble) {
  const std::vector<int> Ls = ctx.sizes();
  for (int L : Ls) check_circuit_budget(L);
  const int n_samples = ctx.samples();
  const double eps = ctx.cfg.get_double("epsilon");
  const int n_levels = static_cast<int>(ctx.cfg.get_int("levels"));
  const double p_T = ctx.cfg.get_double("p_T", 0.5);
  const bool want_second = ctx.cfg.get_bool("second_state", true);
  const auto schmidt_top = static_cast<std::size_t>(ctx.cfg.get_int("schmidt_top", 16));
  EnsembleParams params;
  params.epsilon = eps;
  params.p_T = p_T;
  params.validate();
  if (n_levels < 1) throw ConfigError("levels must be at least 1");

  struct Task {
    int L;
    int sample;
    int t;
  };
  std::vector<Task> tasks;
  for (int L : Ls) {
    const int t = integer_time(ctx.time("time", L), "time");
    for (int s = 0; s < n_samples; ++s) tasks.push_back({L, s, t});
  }

  struct TaskOut {
    ResultSet rows;
    std::vector<double> mu;  // per level
    double spike_mu = 0.0;
    std::optional<double> s2_rank1_j2, s2_rank2_j2;
    bool ok = false;
  };
  std::vector<TaskOut> outs = parallel_map<TaskOut>(tasks.size(), ctx.threads, [&](std::size_t i) {
    const Task& tk = tasks[i];
    TaskOut o;
    const std::uint64_t seed = ctx.task_seed(static_cast<std::uint64_t>(tk.L), static_cast<std::uint64_t>(tk.sample));
    try {
      const HierarchySample s = hierarchy_sample(ensemble, tk.L, eps, tk.t, n_levels, seed, p_T, want_second);
      detail::emit_levels(ctx, s, tk.sample, schmidt_top, o.rows);
      for (const auto& lvl : s.levels) o.mu.push_back(lvl.mu);
      o.spike_mu = s.spike_mu;
      if (s.levels.size() >= 2) o.s2_rank1_j2 = renyi_entropy(s.levels[1].spectrum.weights, 2.0);
      if (s.second_split) o.s2_rank2_j2 = renyi_entropy(s.second_split->weights, 2.0);
      o.ok = true;
    } catch (const BudgetExceeded&) {
      throw;
    } catch (const std::exception& e) {
      o.rows.errors.push_back({"L=" + std::to_string(tk.L) + " sample=" + std::to_string(tk.sample) +
                                   " seed=" + std::to_string(seed),
                               e.what()});
    }
    return o;
  });

  ResultSet rs;
  rs.experiment_id = ctx.id;
  std::map<int, std::vector<std::vector<double>>> mu_by_L;  // L -> [level] -> samples
  std::map<int, std::vector<double>> spike_by_L, s2r1, s2r2, contrast;
  for (auto& o : outs) {
    rs.append(std::move(o.rows));
  }
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    const TaskOut& o = outs[i];
    if (!o.ok) continue;
    const int L = tasks[i].L;
    auto& per = mu_by_L[L];
    if (per.size() < o.mu.size()) per.resize(o.mu.size());
    for (std::size_t j = 0; j < o.mu.size(); ++j) per[j].push_back(o.mu[j]);
    spike_by_L[L].push_back(o.spike_mu);
    if (o.s2_rank1_j2) s2r1[L].push_back(*o.s2_rank1_j2);
    if (o.s2_rank2_j2) s2r2[L].push_back(*o.s2_rank2_j2);
    if (o.s2_rank1_j2 && o.s2_rank2_j2) contrast[L].push_back(*o.s2_rank2_j2 - *o.s2_rank1_j2);
  }
  rs.summary = summarize(ctx.id, rs.renyi);

  const double mu_inf = eps * eps / (1.0 + eps * eps);
  for (int L : Ls) {
    const auto it = mu_by_L.find(L);
    if (it == mu_by_L.end()) continue;
    for (std::size_t j = 0; j < it->second.size(); ++j) {
      const MeanStderr m = mean_stderr(it->second[j]);
      rs.add_scaling("L", L, static_cast<int>(j + 1), "mu_mean", m.mean);
      rs.add_scaling("L", L, static_cast<int>(j + 1), "mu_sem", m.sem);
    }
    rs.add_scaling("L", L, 1, "spike_mu_mean", mean_stderr(spike_by_L[L]).mean);
    for (const auto& r : rs.summary)
      if (r.L == L && r.level_j == 1 && r.alpha == 2.0) {
        rs.add_scaling("L", L, 1, "S2_mean", r.mean);
        rs.add_scaling("L", L, 1, "S2_sem", r.sem);
      }
    rs.add_scaling("L", L, 1, "S2_bound_mu_inf", 2.0 * std::log(1.0 / (1.0 - mu_inf)));
    if (!s2r1[L].empty()) rs.add_scaling("L", L, 2, "S2_rank1_mean", mean_stderr(s2r1[L]).mean);
    if (!s2r2[L].empty()) rs.add_scaling("L", L, 2, "S2_rank2_mean", mean_stderr(s2r2[L]).mean);
    if (!contrast[L].empty()) {
      const MeanStderr m = mean_stderr(contrast[L]);
      rs.add_scaling("L", L, 2, "S2_contrast_mean", m.mean);
      rs.add_scaling("L", L, 2, "S2_contrast_sem", m.sem);
    }
  }

  if (Ls.size() >= 3) {
    for (int j = 1; j <= n_levels; ++j)
      detail::emit_alpha_c(Ls, ctx.alpha_grid, detail::mean_curves(rs.summary, Ls, ctx.alpha_grid, j), j, "slope", "",
                           rs);
    if (!rs.renyi_second.empty())
      detail::emit_alpha_c(Ls, ctx.alpha_grid,
                           detail::mean_curves(summarize(ctx.id, rs.renyi_second), Ls, ctx.alpha_grid, 2), 2,
                           "slope_second", "second_", rs);
    // exponential decay of mu_j with L
    for (int j = 2; j <= n_levels; ++j) {
      std::vector<double> xs, ys;
      for (int L : Ls) {
        const auto m = rs.find("L", L, j, "mu_mean");
        if (m && *m > 0.0) {
          xs.push_back(L);
          ys.push_back(std::log(*m));
        }
      }
      if (xs.size() == Ls.size()) {
        const LinearFit f = least_squares_fit(xs, ys);
        rs.add_scaling("level", j, j, "mu_log_slope", f.slope);
        rs.add_scaling("level", j, j, "mu_log_r2", f.r2);
      }
    }
  }
  return rs;
}

// Largest drop below the running maximum of a time series.
inline double max_decrease(const std::vector<double>& series) {
  double best = -std::numeric_limits<double>::infinity(), drop = 0.0;
  for (double v : series) {
    best = std::max(best, v);
    drop = std::max(drop, best - v);
  }
  return drop;
}

// Figure 6, circuit half: S_alpha(rho_{A_1/2}) of one realization against time.
inline ResultSet run_circuit_timedep(const RunContext& ctx) {
  const int L = static_cast<int>(ctx.cfg.get_int("circuit_L"));
  if (L < 2 || L % 2) throw ConfigError("circuit_L must be even and at least 2");
  check_circuit_budget(L);
  const double eps = ctx.cfg.get_double("epsilon");
  const int t_max = integer_time(ctx.time("circuit_max_time", L), "circuit_max_time");
  const std::uint64_t seed = ctx.task_seed(static_cast<std::uint64_t>(L), 0, 1);
  const std::string id = ctx.id + ":circuit";

  const PureState base_state = ProductState::all_zero(L).to_state();
  const CircuitRealization circ = build_circuit(Ensemble::haar, L, std::max(t_max, 1), seed);
  const auto spectra = parallel_map<std::vector<double>>(static_cast<std::size_t>(t_max) + 1, ctx.threads,
                                                         [&](std::size_t t) {
    const PureState phi = heisenberg_state(circ, center_site(L), base_state, static_cast<int>(t));
    const PureState psi = perturbed_state(phi, eps, base_state).psi;
    return schmidt_decompose(psi, Region::prefix(L / 2)).weights;
  });

  ResultSet rs;
  rs.experiment_id = ctx.id;
  std::vector<double> s2;
  for (std::size_t t = 0; t < spectra.size(); ++t) {
    const std::vector<double> curve = renyi_curve(spectra[t], ctx.alpha_grid);
    for (std::size_t a = 0; a < ctx.alpha_grid.size(); ++a)
      rs.renyi.push_back({id, 0, L, 1, static_cast<double>(t), ctx.alpha_grid[a], curve[a], seed});
    s2.push_back(renyi_entropy(spectra[t], 2.0));
  }
  rs.add_scaling("circuit_L", L, 1, "S2_max_decrease", max_decrease(s2));
  rs.add_scaling("circuit_L", L, 1, "S2_final", s2.back());
  return rs;
}

// Ensemble mean of a_t over all 2^(L-1) U(1) initial states against the
// infinite-temperature autocorrelator 2^-L tr[Z_c U Z_c U^dagger], t = 0..depth.
struct AutocorrelatorCheck {
  std::vector<double> ensemble_mean;
  std::vector<double> trace_value;
  double max_residual = 0.0;
};

inline AutocorrelatorCheck u1_autocorrelator_check(int L, int depth, std::uint64_t seed) {
  if (L < 2 || L > 10 || L % 2) throw InvalidArgument("u1_autocorrelator_check: L must be even and in [2, 10]");
  const int c = center_site(L);
  const CircuitRealization circ = build_brickwork(L, std::max(depth, 1), seed, Ensemble::u1);
  const Eigen::Index dim = Eigen::Index{1} << L;
  RVector z(dim);
  for (Eigen::Index i = 0; i < dim; ++i) z(i) = ((i >> c) & 1) ? -1.0 : 1.0;
  AutocorrelatorCheck out;
  for (int t = 0; t <= depth; ++t) {
    double mean = 0.0;
    for (std::uint64_t signs = 0; signs < (std::uint64_t{1} << (L - 1)); ++signs) {
      const PureState base = u1_initial_state_from_signs(L, signs).to_state();
      mean += base.inner(heisenberg_state(circ, c, base, t)).real();
    }
    mean /= static_cast<double>(std::uint64_t{1} << (L - 1));
    const RMatrix p = circ.unitary(t).cwiseAbs2();
    const double tr = z.dot(p * z) / static_cast<double>(dim);
    out.ensemble_mean.push_back(mean);
    out.trace_value.push_back(tr);
    out.max_residual = std::max(out.max_residual, std::abs(mean - tr));
  }
  return out;
}

}  // namespace hent
