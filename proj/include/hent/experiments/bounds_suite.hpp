#pragma once

// Property runs for the exact inequalities: spike-cloud Renyi families (A),
// spike overlap chain and concentration lemma (B), overlap-entropy lemma and
// Gibbs overlap properties (F), and the Fannes-Audenaert bound (G).

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <vector>

#include "hent/circuits/circuit.hpp"
#include "hent/core/subspace.hpp"
#include "hent/experiments/context.hpp"
#include "hent/experiments/parallel.hpp"
#include "hent/gibbs/quench.hpp"
#include "hent/spectra/bounds.hpp"
#include "hent/spectra/spike_cloud.hpp"

namespace hent {

// One perturbed Haar-circuit state with its spike-cloud split across the half cut.
struct CircuitBoundsInstance {
  int L = 0;
  double epsilon = 0.0;
  int time = 0;
  std::uint64_t seed = 0;
  SpikeCloud cloud;
  DensityMatrix rho;
};

inline CircuitBoundsInstance circuit_bounds_instance(int L, double eps, int t, std::uint64_t seed) {
  check_circuit_budget(L);
  const ProductState base = ProductState::all_zero(L);
  const PureState base_state = base.to_state();
  const CircuitRealization c = build_brickwork(L, std::max(t, 1), seed, Ensemble::haar);
  const PureState phi = heisenberg_state(c, center_site(L), base_state, t);
  const Region cut = Region::prefix(L / 2);
  CircuitBoundsInstance in{L, eps, t, seed, spike_cloud_decompose(phi, eps, base, cut), DensityMatrix{}};
  in.rho = reduced_density(perturbed_state(phi, eps, base_state).psi, cut);
  return in;
}

// Normalized complex Gaussian state.
inline PureState random_pure_state(int n, Stream& rng) {
  CVector v = detail::gaussian_vector(Eigen::Index{1} << n, rng);
  return PureState(n, v / v.norm());
}

// Density matrix G G^dagger / tr with G a d x rank Gaussian matrix.
inline CMatrix random_density_matrix(int d, int rank, Stream& rng) {
  CMatrix g(d, rank);
  for (int j = 0; j < rank; ++j) g.col(j) = detail::gaussian_vector(d, rng);
  CMatrix rho = g * g.adjoint();
  return rho / rho.trace().real();
}

namespace bounds_detail {

struct PartTally {
  int violations = 0;
  int evaluated = 0;
};

inline void add_report(const std::string& id, const BoundsReport& rep, std::vector<BoundsRow>& out) {
  const auto rows = bounds_rows(id, rep);
  out.insert(out.end(), rows.begin(), rows.end());
}

inline PartTally tally(const std::vector<BoundsRow>& rows) {
  PartTally t;
  for (const auto& r : rows) {
    ++t.evaluated;
    t.violations += r.satisfied ? 0 : 1;
  }
  return t;
}

// Runs n independent instance tasks and concatenates their rows in order.
template <class Fn>
std::vector<BoundsRow> collect(const RunContext& ctx, std::size_t n, Fn&& fn) {
  const auto parts = parallel_map<std::vector<BoundsRow>>(n, ctx.threads, [&](std::size_t i) {
    std::vector<BoundsRow> rows;
    fn(i, rows);
    return rows;
  });
  std::vector<BoundsRow> out;
  for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

}  // namespace bounds_detail

inline std::vector<BoundsRow> bounds_part_A(const RunContext& ctx) {
  const int n = static_cast<int>(ctx.cfg.get_int("instances"));
  if (n < 1) throw ConfigError("instances must be at least 1");
  const std::vector<int> Ls = ctx.sizes();
  const std::vector<double> eps = ctx.grid("epsilons");
  const std::vector<std::string> time_tokens = ctx.cfg.get_strings("times");
  if (time_tokens.empty()) throw ConfigError("times must not be empty");
  for (int L : Ls) check_circuit_budget(L);
  for (double e : eps)
    if (!(e > 0.0 && e < 1.0)) throw ConfigError("epsilons must lie in (0, 1)");

  return bounds_detail::collect(ctx, static_cast<std::size_t>(n), [&](std::size_t i, std::vector<BoundsRow>& rows) {
    // cycle sizes fastest, then epsilons, then times, so every combination appears
    const int L = Ls[i % Ls.size()];
    const double e = eps[(i / Ls.size()) % eps.size()];
    const int t = integer_time(resolve_time(time_tokens[(i / (Ls.size() * eps.size())) % time_tokens.size()], L), "times");
    const CircuitBoundsInstance in = circuit_bounds_instance(L, e, t, ctx.task_seed(0xA, i));
    const std::string id = "A:" + std::to_string(i);
    BoundsReport rep = check_appendixA_bounds(in.cloud, in.rho, ctx.alpha_grid);
    rep.add("spike.mu", in.cloud.mu, e * e);
    rep.add("spike.reconstruction", (in.cloud.reconstruct() - in.rho.matrix()).cwiseAbs().maxCoeff(), 1e-10);
    bounds_detail::add_report(id, rep, rows);
  });
}

inline std::vector<BoundsRow> bounds_part_B(const RunContext& ctx) {
  const int n = static_cast<int>(ctx.cfg.get_int("overlap_instances"));
  if (n < 1) throw ConfigError("overlap_instances must be at least 1");
  const int L = static_cast<int>(ctx.cfg.get_int("overlap_L"));
  if (L < 2 || L % 2) throw ConfigError("overlap_L must be even and at least 2");
  const double e = ctx.cfg.get_double("overlap_epsilon");
  const int t = integer_time(ctx.time("overlap_time", L), "overlap_time");
  return bounds_detail::collect(ctx, static_cast<std::size_t>(n), [&](std::size_t i, std::vector<BoundsRow>& rows) {
    const CircuitBoundsInstance in = circuit_bounds_instance(L, e, t, ctx.task_seed(0xB, i));
    bounds_detail::add_report("B:" + std::to_string(i), check_overlap_bound(in.cloud, in.rho).report, rows);
  });
}

inline std::vector<BoundsRow> bounds_part_F(const RunContext& ctx) {
  const int n = static_cast<int>(ctx.cfg.get_int("lemma_pairs"));
  const int max_q = static_cast<int>(ctx.cfg.get_int("lemma_max_qubits"));
  if (n < 1) throw ConfigError("lemma_pairs must be at least 1");
  if (max_q < 2 || max_q > 16) throw ConfigError("lemma_max_qubits must lie in [2, 16]");

  std::vector<BoundsRow> out = bounds_detail::collect(ctx, static_cast<std::size_t>(n), [&](std::size_t i, std::vector<BoundsRow>& rows) {
    Stream rng = derive_stream(ctx.task_seed(0xF, i), {0});
    const int q = 2 + static_cast<int>(rng() % static_cast<std::uint64_t>(max_q - 1));
    const Region cut = Region::prefix(1 + static_cast<int>(rng() % static_cast<std::uint64_t>(q - 1)));
    const PureState phi = random_pure_state(q, rng);
    // a correlated partner keeps the overlap away from zero
    const double mix = 3.0 * rng.uniform();
    CVector w = phi.amplitudes() + mix * random_pure_state(q, rng).amplitudes();
    const PureState psi(q, w / w.norm());
    const BoundsReport rep = check_overlap_entropy_lemma(schmidt_decompose(phi, cut).weights,
                                                         schmidt_decompose(psi, cut).weights,
                                                         std::abs(phi.inner(psi)), ctx.alpha_grid);
    bounds_detail::add_report("F:" + std::to_string(i), rep, rows);
  });

  const int L = static_cast<int>(ctx.cfg.get_int("gibbs_L"));
  const int n_t = static_cast<int>(ctx.cfg.get_int("gibbs_time_points"));
  if (n_t < 2) throw ConfigError("gibbs_time_points must be at least 2");
  IsingSpec spec;
  spec.L = L;
  spec.g = ctx.cfg.get_double("g", 1.1);
  spec.h = ctx.cfg.get_double("h", 0.35);
  const QuenchRun run(ising_eigensystem(spec), ctx.cfg.get_double("gibbs_beta"), ctx.cfg.get_double("gibbs_theta"));
  BoundsReport rep;
  const OverlapResult first = overlap_with_unquenched(run, 0.0);
  double drift = 0.0, imag = std::abs(first.overlap.imag()), smallest = first.overlap.real();
  for (int k = 1; k < n_t; ++k) {
    const OverlapResult r = overlap_with_unquenched(run, static_cast<double>(k));
    drift = std::max(drift, std::abs(r.overlap - first.overlap));
    imag = std::max(imag, std::abs(r.overlap.imag()));
    smallest = std::min(smallest, r.overlap.real());
  }
  rep.add("F.overlap_drift", drift, 1e-10);
  rep.add("F.overlap_imag", imag, 1e-10);
  rep.add("F.overlap_lower_all_times", first.lower_bound, smallest);
  rep.append(area_law_bound_check(run, ctx.time("gibbs_time", L), ctx.alpha_grid));
  bounds_detail::add_report("gibbs", rep, out);
  return out;
}

inline std::vector<BoundsRow> bounds_part_G(const RunContext& ctx) {
  const int n = static_cast<int>(ctx.cfg.get_int("fannes_trials"));
  if (n < 1) throw ConfigError("fannes_trials must be at least 1");
  return bounds_detail::collect(ctx, static_cast<std::size_t>(n), [&](std::size_t i, std::vector<BoundsRow>& rows) {
    Stream rng = derive_stream(ctx.task_seed(0x6, i), {0});
    const int d = 2 + static_cast<int>(rng() % 15);
    CMatrix rho = random_density_matrix(d, 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(d)), rng);
    CMatrix sigma = random_density_matrix(d, 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(d)), rng);
    // odd trials are close pairs, where the bound is nearly tight
    if (i % 2) sigma = (0.95 * rho + 0.05 * sigma).eval();
    const double T = std::min(1.0, trace_distance(rho, sigma));
    const double diff =
        std::abs(renyi_entropy(density_spectrum(rho), 1.0) - renyi_entropy(density_spectrum(sigma), 1.0));
    BoundsReport rep;
    rep.add("G.fannes_audenaert", diff, fannes_audenaert_bound(T, d));
    bounds_detail::add_report("G:" + std::to_string(i), rep, rows);
  });
}

inline ResultSet run_bounds_suite(const RunContext& ctx) {
  static const std::set<std::string> known = {"A", "B", "F", "G"};
  const std::vector<std::string> parts = ctx.cfg.get_strings("parts");
  for (const auto& p : parts)
    if (!known.count(p)) throw ConfigError("unknown bounds part '" + p + "' (expected A, B, F or G)");
  if (std::find(parts.begin(), parts.end(), "A") != parts.end() ||
      std::find(parts.begin(), parts.end(), "B") != parts.end())
  {
    const std::vector<int> Ls = ctx.sizes();
    check_circuit_budget(std::max(*std::max_element(Ls.begin(), Ls.end()), static_cast<int>(ctx.cfg.get_int("overlap_L"))));
  }
  if (std::find(parts.begin(), parts.end(), "F") != parts.end())
    check_gibbs_budget(static_cast<int>(ctx.cfg.get_int("gibbs_L")));

  ResultSet rs;
  rs.experiment_id = ctx.id;
  for (const auto& p : parts) {
    Stopwatch sw;
    std::vector<BoundsRow> rows;
    if (p == "A") rows = bounds_part_A(ctx);
    else if (p == "B") rows = bounds_part_B(ctx);
    else if (p == "F") rows = bounds_part_F(ctx);
    else rows = bounds_part_G(ctx);
    const bounds_detail::PartTally t = bounds_detail::tally(rows);
    const std::string name = "part:" + p;
    rs.add_scaling(name, 0, 0, "violations", t.violations);
    rs.add_scaling(name, 0, 0, "evaluated", t.evaluated);
    rs.timings.emplace_back(name, sw.seconds());
    rs.bounds.insert(rs.bounds.end(), rows.begin(), rows.end());
  }
  return rs;
}

}  // namespace hent
