#pragma once

// Experiment registry: default parameters per experiment, validation of user
// configs against them, dispatch, and output files.

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include "hent/experiments/bounds_suite.hpp"
#include "hent/experiments/circuit_runs.hpp"
#include "hent/experiments/context.hpp"
#include "hent/experiments/gibbs_runs.hpp"
#include "json.hpp"

namespace hent {

struct ExperimentInfo {
  std::string id;
  std::string summary;
  std::string defaults;  // config text
};

namespace registry_detail {

inline const char* kCommon = R"(
master_seed = 20240601
threads = 1
alpha_grid = standard
)";

inline const char* kIsing = R"(
g = 1.1
h = 0.35
boundary = true
)";

inline const char* kScanGrid = "[2^-2, 2^-3, 2^-4, 2^-5, 2^-6]";

}  // namespace registry_detail

inline const std::vector<ExperimentInfo>& experiment_registry() {
  using namespace registry_detail;
  const std::string grid = kScanGrid;
  static const std::vector<ExperimentInfo> reg = {
      {"fig1_truncation", "Gibbs quench: exact vs top-k truncated expectation values, Schmidt weights, small beta/theta insets",
       std::string(kIsing) + R"(
sizes = [14]
beta = 0.1
theta = 0.5
times = [0, 1, 2, 4, 8, L, 2L, L^2]
k_list = [1, 2, 4]
operators = ["Z0", "string"]
schmidt_top = 16
inset = true
inset_time = L^2
inset_theta = 0.5
inset_beta_grid = )" + grid + R"(
inset_beta_k = 1
inset_beta = 0.8
inset_theta_grid = )" + grid + R"(
inset_theta_k = 4
)"},
      {"fig2_haar_hierarchy", "Haar brickwork: saturated Renyi entropies of three hierarchy levels, eps = 0.4", R"(
sizes = [10, 12, 14, 16]
samples = 10
epsilon = 0.4
levels = 3
time = 2L
second_state = true
schmidt_top = 16
)"},
      {"fig3_gibbs_renyi", "Gibbs quench at beta = 1, theta = 0.5: Renyi entropies of the purification and its leading Schmidt vector",
       std::string(kIsing) + R"(
sizes = [10, 12, 14]
beta = 1
theta = 0.5
time = L^2
levels = 2
schmidt_top = 16
bounds = true
)"},
      {"fig4_clifford_t", "Clifford+T circuits: two hierarchy levels at eps = 0.1", R"(
sizes = [10, 12, 14, 16]
samples = 30
epsilon = 0.1
p_T = 0.5
levels = 2
time = 2L
second_state = true
schmidt_top = 16
)"},
      {"fig5_u1", "U(1)-symmetric circuits: two hierarchy levels at eps = 0.4", R"(
sizes = [10, 12, 14, 16]
samples = 10
epsilon = 0.4
levels = 2
time = 2L
second_state = true
schmidt_top = 16
)"},
      {"fig6_timedep", "Entropy growth after the perturbation: one Haar circuit (L = 18) and the Gibbs quench (L = 14)",
       std::string(kIsing) + R"(
circuit = true
circuit_L = 18
epsilon = 0.4
circuit_max_time = 2L
gibbs = true
gibbs_L = 14
beta = 1
theta = 0.5
gibbs_times = [0, 1, 2, 3, 4, 6, 8, 12, 16, 24, 32, 48, 64, 96, L^2]
)"},
      {"fig7_volume_coeff", "Gibbs quench: S1 volume-law coefficient against small beta (theta = 1) and small theta (beta = 0.8)",
       std::string(kIsing) + R"(
sizes = [8, 10, 12]
beta_grid = )" + grid + R"(
theta_fixed = 1
theta_grid = )" + grid + R"(
beta_fixed = 0.8
time = L^2
)"},
      {"fig8_btheta_collapse", "Gibbs quench: truncation error over a 5 x 5 beta, theta grid against beta*theta",
       std::string(kIsing) + R"(
sizes = [12]
beta_grid = )" + grid + R"(
theta_grid = )" + grid + R"(
k_list = [1, 2, 3, 4]
time = L^2
)"},
      {"bounds_suite", "Property runs of the spike-cloud, overlap, area-law and Fannes-Audenaert inequalities",
       R"(
g = 1.1
h = 0.35
parts = [A, B, F, G]
instances = 200
sizes = [8, 10, 12]
epsilons = [0.1, 0.25, 0.4]
times = [0, L, 2L]
overlap_instances = 100
overlap_L = 12
overlap_epsilon = 0.4
overlap_time = 2L
lemma_pairs = 500
lemma_max_qubits = 8
gibbs_L = 10
gibbs_beta = 1
gibbs_theta = 0.5
gibbs_time_points = 21
gibbs_time = L^2
fannes_trials = 500
)"},
  };
  return reg;
}

inline const ExperimentInfo& find_experiment(const std::string& id) {
  for (const auto& e : experiment_registry())
    if (e.id == id) return e;
  std::string known;
  for (const auto& e : experiment_registry()) known += (known.empty() ? "" : ", ") + e.id;
  throw ConfigError("unknown experiment_id '" + id + "' (known: " + known + ")");
}

// Full default config of one experiment, including the shared keys.
inline ExperimentConfig default_config(const std::string& id) {
  const ExperimentInfo& info = find_experiment(id);
  ExperimentConfig cfg = ExperimentConfig::parse(registry_detail::kCommon, "<defaults>");
  cfg.merge(ExperimentConfig::parse(info.defaults, "<defaults:" + id + ">"));
  cfg.set("experiment_id", id);
  cfg.set("output_dir", "out/" + id);
  return cfg;
}

// Defaults overlaid with `user`; keys the experiment does not know are rejected.
inline ExperimentConfig resolve_config(const ExperimentConfig& user) {
  if (!user.has("experiment_id")) throw ConfigError("config is missing experiment_id");
  ExperimentConfig cfg = default_config(user.id());
  for (const auto& [k, v] : user.values())
    if (!cfg.has(k)) throw ConfigError("unknown key '" + k + "' for experiment " + user.id());
  cfg.merge(user);
  return cfg;
}

struct ExperimentRun {
  ExperimentConfig config;  // resolved
  ResultSet results;
};

inline ExperimentRun run_experiment(const ExperimentConfig& user) {
  ExperimentRun run{resolve_config(user), {}};
  const RunContext ctx(run.config);
  Stopwatch sw;
  const std::string& id = ctx.id;
  if (id == "fig1_truncation") run.results = run_fig1_truncation(ctx);
  else if (id == "fig2_haar_hierarchy") run.results = run_circuit_hierarchy(ctx, Ensemble::haar);
  else if (id == "fig3_gibbs_renyi") run.results = run_fig3_gibbs_renyi(ctx);
  else if (id == "fig4_clifford_t") run.results = run_circuit_hierarchy(ctx, Ensemble::clifford_t);
  else if (id == "fig5_u1") run.results = run_circuit_hierarchy(ctx, Ensemble::u1);
  else if (id == "fig6_timedep") run.results = run_fig6_timedep(ctx);
  else if (id == "fig7_volume_coeff") run.results = run_fig7_volume_coeff(ctx);
  else if (id == "fig8_btheta_collapse") run.results = run_fig8_btheta_collapse(ctx);
  else run.results = run_bounds_suite(ctx);
  run.results.experiment_id = id;
  run.results.wall_seconds = sw.seconds();
  return run;
}

inline std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline nlohmann::json manifest_json(const ExperimentRun& run, const std::vector<std::string>& files) {
  nlohmann::json m;
  m["experiment_id"] = run.results.experiment_id;
  m["version"] = kVersion;
  m["timestamp"] = utc_timestamp();
  m["wall_time_seconds"] = run.results.wall_seconds;
  nlohmann::json cfg = nlohmann::json::object();
  for (const auto& [k, v] : run.config.values()) cfg[k] = v;
  m["config"] = cfg;
  m["files"] = files;
  nlohmann::json timings = nlohmann::json::object();
  for (const auto& [name, secs] : run.results.timings) timings[name] = secs;
  m["timings"] = timings;
  nlohmann::json errors = nlohmann::json::array();
  for (const auto& e : run.results.errors) errors.push_back({{"task", e.task}, {"message", e.message}});
  m["errors"] = errors;
  m["bound_violations"] = run.results.bound_violations();
  return m;
}

// Writes the CSV tables and manifest.json into `dir`; returns all file names.
inline std::vector<std::string> write_outputs(const ExperimentRun& run, const std::filesystem::path& dir) {
  std::vector<std::string> files = write_tables(dir, run.results);
  files.push_back("manifest.json");
  std::ofstream f(dir / "manifest.json", std::ios::binary);
  if (!f) throw Error("cannot write " + (dir / "manifest.json").string());
  f << manifest_json(run, files).dump(2) << '\n';
  return files;
}

}  // namespace hent
