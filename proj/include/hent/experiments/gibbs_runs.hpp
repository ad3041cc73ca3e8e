#pragma once

// Drivers for the locally quenched Gibbs state of the mixed-field Ising chain.
// Every run holds one dense eigensystem at a time, so sizes are processed in
// sequence and the budget for all of them is checked before anything is built.

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "hent/core/budget.hpp"
#include "hent/core/pauli.hpp"
#include "hent/experiments/circuit_runs.hpp"
#include "hent/experiments/context.hpp"
#include "hent/gibbs/quench.hpp"
#include "hent/spectra/alpha_c.hpp"
#include "hent/spectra/hierarchy.hpp"

namespace hent {

namespace gibbs_detail {

inline IsingSpec ising_spec(const RunContext& ctx, int L) {
  IsingSpec s;
  s.L = L;
  s.g = ctx.cfg.get_double("g", 1.1);
  s.h = ctx.cfg.get_double("h", 0.35);
  s.boundary = ctx.cfg.get_bool("boundary", true);
  s.validate();
  return s;
}

inline void check_budgets(const std::vector<int>& Ls) {
  for (int L : Ls) check_gibbs_budget(L);
}

// "string" expands to X0 Y1 Z2 X3 ... over region A (at most seven sites);
// anything else is read as a Pauli string such as "Z0" or "X0 Z3".
inline PauliString named_operator(const std::string& name, int L) {
  if (name == "string") {
    static const char cycle[3] = {'X', 'Y', 'Z'};
    std::vector<std::pair<int, char>> ops;
    for (int s = 0; s < std::min(7, L / 2); ++s) ops.emplace_back(s, cycle[s % 3]);
    return PauliString(std::move(ops));
  }
  return PauliString::parse(name);
}

inline std::vector<double> half_cut_weights(const QuenchRun& run, double t) {
  return purification_schmidt(run.purification(t), Region::prefix(run.L() / 2)).weights;
}

// Per-alpha slopes of S_alpha(L) at one level, plus the alpha_c estimate when
// there are enough sizes.
inline void emit_size_slopes(const RunContext& ctx, const std::vector<int>& Ls, int level, ResultSet& rs) {
  if (Ls.size() < 2) return;
  const auto curves = detail::mean_curves(rs.summary, Ls, ctx.alpha_grid, level);
  for (const auto& c : curves)
    for (double v : c)
      if (std::isnan(v)) return;
  if (Ls.size() >= 3) {
    detail::emit_alpha_c(Ls, ctx.alpha_grid, curves, level, "slope", "", rs);
    return;
  }
  const std::vector<double> xs(Ls.begin(), Ls.end());
  for (std::size_t a = 0; a < ctx.alpha_grid.size(); ++a)
    rs.add_scaling("alpha", ctx.alpha_grid[a], level, "slope", least_squares_fit(xs, curves[a]).slope);
}

inline void emit_perturbative(const PerturbativeRecord& rec, const std::string& param, const std::string& scan,
                              ResultSet& rs) {
  for (std::size_t i = 0; i < rec.params.size(); ++i) rs.add_scaling(param, rec.params[i], rec.k, "truncation_error", rec.errors[i]);
  rs.add_scaling(scan, rec.fixed, rec.k, "loglog_slope", rec.fit.slope);
  rs.add_scaling(scan, rec.fixed, rec.k, "loglog_r2", rec.fit.r2);
  rs.add_scaling(scan, rec.fixed, rec.k, "thermal_tail", rec.thermal_tail);
  if (rec.fit_excess) {
    rs.add_scaling(scan, rec.fixed, rec.k, "loglog_slope_excess", rec.fit_excess->slope);
    rs.add_scaling(scan, rec.fixed, rec.k, "loglog_r2_excess", rec.fit_excess->r2);
  }
}

}  // namespace gibbs_detail

// Figure 1: exact against top-k truncated expectation values, cumulative
// Schmidt weights over time, and the small-beta / small-theta insets.
inline ResultSet run_fig1_truncation(const RunContext& ctx) {
  const std::vector<int> Ls = ctx.sizes();
  gibbs_detail::check_budgets(Ls);
  const double beta = ctx.cfg.get_double("beta");
  const double theta = ctx.cfg.get_double("theta");
  std::vector<int> ks = ctx.cfg.get_ints("k_list");
  if (ks.empty()) throw ConfigError("k_list must not be empty");
  for (int k : ks)
    if (k < 1) throw ConfigError("k_list entries must be at least 1");
  const int k_max = *std::max_element(ks.begin(), ks.end());
  const int n_top = std::max(k_max, static_cast<int>(ctx.cfg.get_int("schmidt_top", 16)));
  const std::vector<std::string> op_names = ctx.cfg.get_strings("operators");
  const bool inset = ctx.cfg.get_bool("inset", true);

  ResultSet rs;
  rs.experiment_id = ctx.id;
  for (int L : Ls) {
    const auto eig = ising_eigensystem(gibbs_detail::ising_spec(ctx, L));
    const Region A = Region::prefix(L / 2);
    std::vector<PauliString> ops;
    for (const auto& n : op_names) {
      ops.push_back(gibbs_detail::named_operator(n, L));
      if (ops.back().max_site() >= L / 2) throw ConfigError("operator '" + n + "' reaches outside region A");
    }
    {
      const QuenchRun run(eig, beta, theta);
      for (double t : ctx.times("times", L)) {
        const PurificationState p = run.purification(t);
        const SchmidtSpectrum s = purification_top_schmidt(p, A, n_top);
        for (std::size_t r = 0; r < s.weights.size() && r < static_cast<std::size_t>(n_top); ++r)
          rs.schmidt.push_back({ctx.id, 0, L, 1, t, static_cast<int>(r + 1), s.weights[r], ctx.master_seed});
        rs.add_scaling("time", t, 1, "lambda_max", s.leading());
        for (std::size_t o = 0; o < ops.size(); ++o) {
          rs.add_scaling("time", t, 0, "exact:" + op_names[o], exact_expectation(p, ops[o]).real());
          for (int k : ks) rs.add_scaling("time", t, k, "truncated:" + op_names[o], truncated_expectation(s, A, k, ops[o]).real());
        }
        for (int k : ks) rs.add_scaling("time", t, k, "truncation_error", truncation_error(s, k));
      }
    }
    if (inset) {
      const double t_inset = ctx.time("inset_time", L);
      const auto rb = perturbative_rank_checks(eig, PerturbativeRegime::small_beta, ctx.cfg.get_double("inset_theta"),
                                               ctx.grid("inset_beta_grid"), t_inset,
                                               static_cast<int>(ctx.cfg.get_int("inset_beta_k")));
      gibbs_detail::emit_perturbative(rb, "beta", "beta_scan", rs);
      const auto rt = perturbative_rank_checks(eig, PerturbativeRegime::small_theta, ctx.cfg.get_double("inset_beta"),
                                               ctx.grid("inset_theta_grid"), t_inset,
                                               static_cast<int>(ctx.cfg.get_int("inset_theta_k")));
      gibbs_detail::emit_perturbative(rt, "theta", "theta_scan", rs);
    }
  }
  return rs;
}

// Figure 3: saturated Renyi entropies of the purification across the paired
// half cut and of its leading Schmidt vector split in two.
inline ResultSet run_fig3_gibbs_renyi(const RunContext& ctx) {
  const std::vector<int> Ls = ctx.sizes();
  gibbs_detail::check_budgets(Ls);
  const double beta = ctx.cfg.get_double("beta");
  const double theta = ctx.cfg.get_double("theta");
  const int n_levels = static_cast<int>(ctx.cfg.get_int("levels", 2));
  if (n_levels < 1) throw ConfigError("levels must be at least 1");
  const auto schmidt_top = static_cast<std::size_t>(ctx.cfg.get_int("schmidt_top", 16));
  const bool with_bounds = ctx.cfg.get_bool("bounds", true);

  ResultSet rs;
  rs.experiment_id = ctx.id;
  for (int L : Ls) {
    const QuenchRun run(ising_eigensystem(gibbs_detail::ising_spec(ctx, L)), beta, theta);
    const double t = ctx.time("time", L);
    HierarchySample s;
    s.seed = ctx.master_seed;
    s.L = L;
    {
      const PureState vec = run.purification(t).vector();
      s.levels.push_back(hierarchy_top(vec, 2));
    }
    while (static_cast<int>(s.levels.size()) < n_levels) {
      if (hierarchy_subcut(s.levels.back().state.qubits(), 2) < 2) break;
      s.levels.push_back(hierarchy_descend(s.levels.back()));
    }
    // emit_levels stamps integer circuit times; Gibbs times may be fractional
    ResultSet part;
    detail::emit_levels(ctx, s, 0, schmidt_top, part);
    for (auto& r : part.renyi) r.time = t;
    for (auto& r : part.schmidt) r.time = t;
    rs.append(std::move(part));
    for (const auto& lvl : s.levels) rs.add_scaling("L", L, lvl.j, "mu", lvl.mu);
    if (with_bounds) {
      const auto rows = bounds_rows("L=" + std::to_string(L), area_law_bound_check(run, t, {2.0}));
      rs.bounds.insert(rs.bounds.end(), rows.begin(), rows.end());
    }
  }
  rs.summary = summarize(ctx.id, rs.renyi);
  for (int j = 1; j <= n_levels; ++j) gibbs_detail::emit_size_slopes(ctx, Ls, j, rs);
  return rs;
}

// Figure 6: entropy growth after the quench, Gibbs and circuit halves.
inline ResultSet run_gibbs_timedep(const RunContext& ctx) {
  const int L = static_cast<int>(ctx.cfg.get_int("gibbs_L"));
  if (L < 2 || L % 2) throw ConfigError("gibbs_L must be even and at least 2");
  check_gibbs_budget(L);
  const std::string id = ctx.id + ":gibbs";
  const QuenchRun run(ising_eigensystem(gibbs_detail::ising_spec(ctx, L)), ctx.cfg.get_double("beta"),
                      ctx.cfg.get_double("theta"));
  ResultSet rs;
  rs.experiment_id = ctx.id;
  std::vector<double> s2;
  for (double t : ctx.times("gibbs_times", L)) {
    const std::vector<double> w = gibbs_detail::half_cut_weights(run, t);
    const std::vector<double> curve = renyi_curve(w, ctx.alpha_grid);
    for (std::size_t a = 0; a < curve.size(); ++a) rs.renyi.push_back({id, 0, L, 1, t, ctx.alpha_grid[a], curve[a], ctx.master_seed});
    s2.push_back(renyi_entropy(w, 2.0));
  }
  rs.add_scaling("gibbs_L", L, 1, "S2_max_decrease", max_decrease(s2));
  rs.add_scaling("gibbs_L", L, 1, "S2_final", s2.back());
  return rs;
}

inline ResultSet run_fig6_timedep(const RunContext& ctx) {
  if (ctx.cfg.get_bool("gibbs", true)) check_gibbs_budget(static_cast<int>(ctx.cfg.get_int("gibbs_L")));
  ResultSet rs;
  rs.experiment_id = ctx.id;
  if (ctx.cfg.get_bool("circuit", true)) rs.append(run_circuit_timedep(ctx));
  if (ctx.cfg.get_bool("gibbs", true)) rs.append(run_gibbs_timedep(ctx));
  rs.summary = summarize(ctx.id, rs.renyi);
  return rs;
}

// Appendix I.1: volume-law coefficient of S_1 at small beta and small theta.
inline ResultSet run_fig7_volume_coeff(const RunContext& ctx) {
  const std::vector<int> Ls = ctx.sizes();
  if (Ls.size() < 3) throw ConfigError("fig7_volume_coeff needs at least three sizes");
  gibbs_detail::check_budgets(Ls);
  const std::vector<double> betas = ctx.grid("beta_grid");
  const std::vector<double> thetas = ctx.grid("theta_grid");
  const double theta_fixed = ctx.cfg.get_double("theta_fixed");
  const double beta_fixed = ctx.cfg.get_double("beta_fixed");

  // S1[scan point][size]; the theta scan carries the theta = 0 baseline
  std::vector<std::vector<double>> s_beta(betas.size(), std::vector<double>(Ls.size()));
  std::vector<std::vector<double>> s_theta(thetas.size(), std::vector<double>(Ls.size()));
  std::vector<double> baseline(Ls.size());
  ResultSet rs;
  rs.experiment_id = ctx.id;
  for (std::size_t l = 0; l < Ls.size(); ++l) {
    const int L = Ls[l];
    const auto eig = ising_eigensystem(gibbs_detail::ising_spec(ctx, L));
    const double t = ctx.time("time", L);
    for (std::size_t i = 0; i < betas.size(); ++i) {
      s_beta[i][l] = renyi_entropy(gibbs_detail::half_cut_weights(QuenchRun(eig, betas[i], theta_fixed), t), 1.0);
      rs.add_scaling("beta", betas[i], L, "S1", s_beta[i][l]);
    }
    baseline[l] = renyi_entropy(gibbs_detail::half_cut_weights(QuenchRun(eig, beta_fixed, 0.0), t), 1.0);
    rs.add_scaling("theta", 0.0, L, "S1", baseline[l]);
    for (std::size_t i = 0; i < thetas.size(); ++i) {
      s_theta[i][l] = renyi_entropy(gibbs_detail::half_cut_weights(QuenchRun(eig, beta_fixed, thetas[i]), t), 1.0);
      rs.add_scaling("theta", thetas[i], L, "S1", s_theta[i][l]);
    }
  }

  const std::vector<double> xs(Ls.begin(), Ls.end());
  auto scan = [&](const std::string& param, const std::string& scan_name, double fixed, const std::vector<double>& grid,
                  const std::vector<std::vector<double>>& S, const std::vector<double>* base) {
    std::vector<double> coeffs;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const LinearFit f = volume_coeff_fit(xs, S[i], base);
      rs.add_scaling(param, grid[i], 0, "s1", f.slope);
      rs.add_scaling(param, grid[i], 0, "c", f.intercept);
      rs.add_scaling(param, grid[i], 0, "r2", f.r2);
      coeffs.push_back(f.slope);
    }
    if (std::all_of(coeffs.begin(), coeffs.end(), [](double c) { return c > 0.0; })) {
      const LinearFit e = loglog2_fit(grid, coeffs);
      rs.add_scaling(scan_name, fixed, 0, "exponent", e.slope);
      rs.add_scaling(scan_name, fixed, 0, "exponent_r2", e.r2);
    } else {
      rs.errors.push_back({scan_name, "non-positive volume coefficient; exponent not fitted"});
    }
  };
  scan("beta", "beta_scan", theta_fixed, betas, s_beta, nullptr);
  scan("theta", "theta_scan", beta_fixed, thetas, s_theta, &baseline);
  return rs;
}

// Appendix I.2: truncation errors over a beta x theta grid against beta*theta.
// The grid point is carried in the metric name because several (beta, theta)
// pairs share a product.
inline ResultSet run_fig8_btheta_collapse(const RunContext& ctx) {
  const std::vector<int> Ls = ctx.sizes();
  gibbs_detail::check_budgets(Ls);
  const std::vector<double> betas = ctx.grid("beta_grid");
  const std::vector<double> thetas = ctx.grid("theta_grid");
  std::vector<int> ks = ctx.cfg.get_ints("k_list");
  if (ks.empty()) throw ConfigError("k_list must not be empty");
  for (int k : ks)
    if (k < 1) throw ConfigError("k_list entries must be at least 1");
  const int k_max = *std::max_element(ks.begin(), ks.end());

  ResultSet rs;
  rs.experiment_id = ctx.id;
  for (int L : Ls) {
    const auto eig = ising_eigensystem(gibbs_detail::ising_spec(ctx, L));
    const double t = ctx.time("time", L);
    const Region A = Region::prefix(L / 2);
    std::map<int, std::vector<double>> x_by_k, y_by_k;
    for (double b : betas)
      for (double th : thetas) {
        const SchmidtSpectrum s = purification_top_schmidt(QuenchRun(eig, b, th).purification(t), A, k_max);
        for (int k : ks) {
          const double err = truncation_error(s, k);
          rs.add_scaling("beta_theta", b * th, k,
                         "truncation_error[beta=" + format_double(b) + ",theta=" + format_double(th) + ",L=" +
                             std::to_string(L) + "]",
                         err);
          if (err > 0.0) {
            x_by_k[k].push_back(std::log2(b * th));
            y_by_k[k].push_back(std::log2(err));
          }
        }
      }
    for (int k : ks) {
      if (x_by_k[k].size() < 3) {
        rs.errors.push_back({"L=" + std::to_string(L) + " k=" + std::to_string(k), "too few positive truncation errors to fit"});
        continue;
      }
      const LinearFit f = least_squares_fit(x_by_k[k], y_by_k[k]);
      rs.add_scaling("k", k, L, "collapse_slope", f.slope);
      rs.add_scaling("k", k, L, "collapse_r2", f.r2);
    }
  }
  return rs;
}

}  // namespace hent
