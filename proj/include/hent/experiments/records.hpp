#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "hent/experiments/fit.hpp"
#include "hent/spectra/bounds.hpp"

namespace hent {

inline constexpr const char* kVersion = "0.1.0";

// 17 significant digits round-trip every double.
inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct RenyiRow {
  std::string experiment_id;
  int sample_id = 0;
  int L = 0;
  int level_j = 1;
  double time = 0.0;
  double alpha = 0.0;
  double entropy = 0.0;
  std::uint64_t seed = 0;
};

struct SchmidtRow {
  std::string experiment_id;
  int sample_id = 0;
  int L = 0;
  int level_j = 1;
  double time = 0.0;
  int rank = 1;
  double weight = 0.0;
  std::uint64_t seed = 0;
};

struct ScalingRow {
  std::string param_name;
  double param_value = 0.0;
  int k_or_level = 0;
  std::string metric;
  double value = 0.0;
};

struct BoundsRow {
  std::string instance_id;
  std::string inequality_name;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  bool satisfied = true;
};

struct SummaryRow {
  std::string experiment_id;
  int L = 0;
  int level_j = 1;
  double time = 0.0;
  double alpha = 0.0;
  double mean = 0.0;
  double sem = 0.0;
  std::size_t n = 0;
};

struct ErrorRecord {
  std::string task;
  std::string message;
};

struct CsvSchema {
  static constexpr const char* renyi = "experiment_id,sample_id,L,level_j,time,alpha,entropy_nats,seed";
  static constexpr const char* schmidt = "experiment_id,sample_id,L,level_j,time,rank,weight,seed";
  static constexpr const char* scaling = "param_name,param_value,k_or_level,metric,value";
  static constexpr const char* bounds = "instance_id,inequality_name,lhs,rhs,margin,satisfied";
  static constexpr const char* summary = "experiment_id,L,level_j,time,alpha,mean,sem,n";
};

// Quotes a field when it contains a separator.
inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string to_csv(const RenyiRow& r) {
  return csv_field(r.experiment_id) + "," + std::to_string(r.sample_id) + "," + std::to_string(r.L) + "," +
         std::to_string(r.level_j) + "," + format_double(r.time) + "," + format_double(r.alpha) + "," +
         format_double(r.entropy) + "," + std::to_string(r.seed);
}
inline std::string to_csv(const SchmidtRow& r) {
  return csv_field(r.experiment_id) + "," + std::to_string(r.sample_id) + "," + std::to_string(r.L) + "," +
         std::to_string(r.level_j) + "," + format_double(r.time) + "," + std::to_string(r.rank) + "," +
         format_double(r.weight) + "," + std::to_string(r.seed);
}
inline std::string to_csv(const ScalingRow& r) {
  return csv_field(r.param_name) + "," + format_double(r.param_value) + "," + std::to_string(r.k_or_level) + "," +
         csv_field(r.metric) + "," + format_double(r.value);
}
inline std::string to_csv(const BoundsRow& r) {
  return csv_field(r.instance_id) + "," + csv_field(r.inequality_name) + "," + format_double(r.lhs) + "," +
         format_double(r.rhs) + "," + format_double(r.margin) + "," + (r.satisfied ? "true" : "false");
}
inline std::string to_csv(const SummaryRow& r) {
  return csv_field(r.experiment_id) + "," + std::to_string(r.L) + "," + std::to_string(r.level_j) + "," +
         format_double(r.time) + "," + format_double(r.alpha) + "," + format_double(r.mean) + "," +
         format_double(r.sem) + "," + std::to_string(r.n);
}

// Bounds records carry alpha in the name: "A.a_eps[alpha=2]".
inline std::vector<BoundsRow> bounds_rows(const std::string& instance_id, const BoundsReport& rep) {
  std::vector<BoundsRow> out;
  for (const auto& r : rep.records) {
    if (!r.applicable) continue;
    BoundsRow b;
    b.instance_id = instance_id;
    b.inequality_name = std::isnan(r.alpha) ? r.name : r.name + "[alpha=" + format_double(r.alpha) + "]";
    b.lhs = r.lhs;
    b.rhs = r.rhs;
    b.margin = r.margin;
    b.satisfied = r.satisfied;
    out.push_back(std::move(b));
  }
  return out;
}

// Everything one experiment run produces.
struct ResultSet {
  std::string experiment_id;
  std::vector<RenyiRow> renyi;
  std::vector<RenyiRow> renyi_second;  // rank-2 Schmidt vector at level 2
  std::vector<SchmidtRow> schmidt;
  std::vector<ScalingRow> scaling;
  std::vector<BoundsRow> bounds;
  std::vector<SummaryRow> summary;
  std::vector<ErrorRecord> errors;
  double wall_seconds = 0.0;
  // per-stage wall times; reported in the manifest so the CSVs stay reproducible
  std::vector<std::pair<std::string, double>> timings;

  void append(ResultSet&& o) {
    auto move_into = [](auto& dst, auto& src) { dst.insert(dst.end(), std::make_move_iterator(src.begin()), std::make_move_iterator(src.end())); };
    move_into(renyi, o.renyi);
    move_into(renyi_second, o.renyi_second);
    move_into(schmidt, o.schmidt);
    move_into(scaling, o.scaling);
    move_into(bounds, o.bounds);
    move_into(summary, o.summary);
    move_into(errors, o.errors);
    move_into(timings, o.timings);
  }

  void add_scaling(std::string param, double value, int k, std::string metric, double v) {
    scaling.push_back({std::move(param), value, k, std::move(metric), v});
  }

  // First scaling value matching the filter.
  std::optional<double> find(const std::string& param, double value, int k, const std::string& metric) const {
    for (const auto& r : scaling)
      if (r.param_name == param && r.k_or_level == k && r.metric == metric &&
          (r.param_value == value || (std::isnan(r.param_value) && std::isnan(value))))
        return r.value;
    return std::nullopt;
  }

  int bound_violations() const {
    int n = 0;
    for (const auto& b : bounds) n += b.satisfied ? 0 : 1;
    return n;
  }
};

// Per (L, level, time, alpha) ensemble means over samples.
inline std::vector<SummaryRow> summarize(const std::string& id, const std::vector<RenyiRow>& rows) {
  std::map<std::tuple<int, int, double, double>, std::vector<double>> groups;
  for (const auto& r : rows) groups[{r.L, r.level_j, r.time, r.alpha}].push_back(r.entropy);
  std::vector<SummaryRow> out;
  for (const auto& [key, vals] : groups) {
    const MeanStderr m = mean_stderr(vals);
    out.push_back({id, std::get<0>(key), std::get<1>(key), std::get<2>(key), std::get<3>(key), m.mean, m.sem, m.n});
  }
  return out;
}

template <class Row>
void write_csv(const std::filesystem::path& path, const char* header, const std::vector<Row>& rows) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write " + path.string());
  f << header << '\n';
  for (const auto& r : rows) f << to_csv(r) << '\n';
  if (!f) throw Error("write failed for " + path.string());
}

// Writes all non-empty tables; returns the file names written.
inline std::vector<std::string> write_tables(const std::filesystem::path& dir, const ResultSet& rs) {
  std::filesystem::create_directories(dir);
  std::vector<std::string> files;
  auto emit = [&](const char* name, const char* header, const auto& rows) {
    if (rows.empty()) return;
    write_csv(dir / name, header, rows);
    files.push_back(name);
  };
  emit("renyi.csv", CsvSchema::renyi, rs.renyi);
  emit("renyi_second.csv", CsvSchema::renyi, rs.renyi_second);
  emit("schmidt.csv", CsvSchema::schmidt, rs.schmidt);
  emit("scaling.csv", CsvSchema::scaling, rs.scaling);
  emit("bounds.csv", CsvSchema::bounds, rs.bounds);
  emit("summary.csv", CsvSchema::summary, rs.summary);
  return files;
}

}  // namespace hent
