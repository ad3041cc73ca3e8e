// hent: command-line front end for the experiment registry.
//
//   hent run --config PATH [--set key=value]... [--seed N] [--threads N] [--out DIR]
//   hent list
//   hent check-bounds --instances N --seed S [--threads N] [--out DIR]
//
// Exit codes: 0 success, 1 runtime failure or bound violations,
// 2 configuration error, 3 resource budget exceeded.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hent/core/blas_guard.hpp"
#include "hent/experiments/registry.hpp"

namespace {

void print_summary(const hent::ExperimentRun& run, const std::filesystem::path& out,
                   const std::vector<std::string>& files) {
  const hent::ResultSet& r = run.results;
  std::printf("experiment  %s\n", r.experiment_id.c_str());
  std::printf("rows        renyi %zu, renyi_second %zu, schmidt %zu, scaling %zu, bounds %zu, summary %zu\n",
              r.renyi.size(), r.renyi_second.size(), r.schmidt.size(), r.scaling.size(), r.bounds.size(),
              r.summary.size());
  if (!r.bounds.empty()) std::printf("violations  %d of %zu bound records\n", r.bound_violations(), r.bounds.size());
  for (const auto& e : r.errors) std::printf("error       %s: %s\n", e.task.c_str(), e.message.c_str());
  std::printf("wall time   %.1f s\n", r.wall_seconds);
  std::printf("output      %s (", out.string().c_str());
  for (std::size_t i = 0; i < files.size(); ++i) std::printf("%s%s", i ? ", " : "", files[i].c_str());
  std::printf(")\n");
}

int execute(const hent::ExperimentConfig& cfg) {
  const hent::ExperimentRun run = hent::run_experiment(cfg);
  const std::filesystem::path out = run.config.get_string("output_dir");
  const auto files = hent::write_outputs(run, out);
  print_summary(run, out, files);
  return run.results.bound_violations() == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  hent::ensure_working_blas(argv);

  CLI::App app{"Entanglement hierarchies of perturbed circuit states and quenched Gibbs purifications"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  std::vector<std::string> overrides;
  long long seed = -1;
  int threads = 0;
  auto* run_cmd = app.add_subcommand("run", "Run one experiment from a config file");
  run_cmd->add_option("--config", config_path, "Config file (key = value lines)")->required();
  run_cmd->add_option("--set", overrides, "Override a config key, key=value (repeatable)");
  run_cmd->add_option("--seed", seed, "Master seed")->check(CLI::NonNegativeNumber);
  run_cmd->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
  run_cmd->add_option("--out", out_dir, "Output directory");

  app.add_subcommand("list", "List registered experiments and their default parameters");

  int instances = 200;
  long long bounds_seed = 20240601;
  auto* bounds_cmd = app.add_subcommand("check-bounds", "Run the inequality property suite");
  bounds_cmd->add_option("--instances", instances, "Random circuit instances for the spike-cloud families")
      ->check(CLI::PositiveNumber);
  bounds_cmd->add_option("--seed", bounds_seed, "Master seed")->check(CLI::NonNegativeNumber);
  bounds_cmd->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
  bounds_cmd->add_option("--out", out_dir, "Output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand("list")) {
      for (const auto& e : hent::experiment_registry()) {
        std::printf("%s\n  %s\n", e.id.c_str(), e.summary.c_str());
        const hent::ExperimentConfig defaults = hent::default_config(e.id);
        for (const auto& [k, v] : defaults.values())
          if (k != "experiment_id") std::printf("    %-18s = %s\n", k.c_str(), v.c_str());
      }
      return 0;
    }

    hent::ExperimentConfig cfg;
    if (app.got_subcommand("run")) {
      cfg = hent::ExperimentConfig::from_file(config_path);
      for (const auto& o : overrides) cfg.apply_override(o);
      if (seed >= 0) cfg.set("master_seed", std::to_string(seed));
    } else {
      cfg.set("experiment_id", "bounds_suite");
      cfg.set("instances", std::to_string(instances));
      cfg.set("master_seed", std::to_string(bounds_seed));
    }
    if (threads > 0) cfg.set("threads", std::to_string(threads));
    if (!out_dir.empty()) cfg.set("output_dir", out_dir);
    return execute(cfg);
  } catch (const hent::ConfigError& e) {
    std::fprintf(stderr, "hent: config error: %s\n", e.what());
    return 2;
  } catch (const hent::BudgetExceeded& e) {
    std::fprintf(stderr, "hent: budget exceeded: %s\n", e.what());
    return 3;
  } catch (const hent::InvalidArgument& e) {
    std::fprintf(stderr, "hent: invalid parameter: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "hent: %s\n", e.what());
    return 1;
  }
}
