#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>
#include <vector>

#include "hent/core/entropy.hpp"
#include "hent/core/rng.hpp"
#include "hent/experiments/config.hpp"
#include "hent/experiments/records.hpp"

namespace hent {

// Resolved settings shared by every driver.
struct RunContext {
  ExperimentConfig cfg;
  std::string id;
  std::uint64_t master_seed = 0;
  int threads = 1;
  std::vector<double> alpha_grid;

  explicit RunContext(ExperimentConfig c) : cfg(std::move(c)) {
    id = cfg.id();
    master_seed = cfg.get_seed("master_seed");
    threads = static_cast<int>(cfg.get_int("threads", 1));
    if (threads < 1) throw ConfigError("threads must be at least 1");
    const std::string grid = cfg.has("alpha_grid") ? cfg.raw("alpha_grid") : "standard";
    if (grid == "standard" || grid == "\"standard\"") {
      alpha_grid = standard_alpha_grid();
    } else {
      alpha_grid = cfg.get_doubles("alpha_grid");
      if (alpha_grid.empty()) throw ConfigError("alpha_grid must not be empty");
      for (std::size_t i = 0; i < alpha_grid.size(); ++i) {
        if (!(alpha_grid[i] > 0.0)) throw ConfigError("alpha_grid values must be positive");
        if (i > 0 && !(alpha_grid[i] > alpha_grid[i - 1])) throw ConfigError("alpha_grid must be ascending");
      }
    }
  }

  // Folds the experiment id into every stream so experiments never share draws.
  std::uint64_t tag() const {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : id) h = (h ^ c) * 1099511628211ull;
    return h;
  }

  // The seed that fully reproduces one (size, sample) task.
  std::uint64_t task_seed(std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0) const {
    return derive_stream(master_seed, {tag(), a, b, c})();
  }

  std::vector<int> sizes(const std::string& key = "sizes") const {
    std::vector<int> s = cfg.get_ints(key);
    if (s.empty()) throw ConfigError("'" + key + "' must not be empty");
    for (int L : s)
      if (L < 2 || L % 2) throw ConfigError("'" + key + "' entries must be even and at least 2");
    return s;
  }

  std::vector<double> grid(const std::string& key) const {
    std::vector<double> g = cfg.get_doubles(key);
    if (g.empty()) throw ConfigError("'" + key + "' must not be empty");
    return g;
  }

  int samples() const {
    const auto n = cfg.get_int("samples");
    if (n < 1) throw ConfigError("samples must be at least 1");
    return static_cast<int>(n);
  }

  std::vector<double> times(const std::string& key, int L) const {
    std::vector<double> out;
    // tokens such as "8" and "L" can coincide at one size; keep the first
    for (const auto& tok : cfg.get_strings(key)) {
      const double t = resolve_time(tok, L);
      if (std::find(out.begin(), out.end(), t) == out.end()) out.push_back(t);
    }
    if (out.empty()) throw ConfigError("'" + key + "' must not be empty");
    return out;
  }

  double time(const std::string& key, int L) const { return resolve_time(cfg.get_string(key), L); }
};

// Circuit depths must be whole timesteps.
inline int integer_time(double t, const std::string& what) {
  if (t < 0 || t != std::floor(t)) throw ConfigError(what + " must be a non-negative integer, got " + format_double(t));
  return static_cast<int>(t);
}

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

}  // namespace hent
