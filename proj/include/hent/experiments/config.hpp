#pragma once

// Flat key = value configuration. Values are scalars or bracketed lists:
//
//   experiment_id = fig2_haar_hierarchy
//   sizes = [10, 12, 14]
//   epsilon = 0.4
//   times = [0, L, 2L]        # tokens in L are resolved per system size
//   operators = ["Z0", "X0 Y1 Z2"]
//
// Numbers may be written as powers of two ("2^-3"). Lines starting with '#'
// and trailing '#' comments are ignored.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "hent/core/types.hpp"

namespace hent {

class ConfigError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

namespace config_detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline std::string unquote(const std::string& s) {
  if (s.size() >= 2 && ((s.front() == '"' && s.back() == '"') || (s.front() == '\'' && s.back() == '\'')))
    return s.substr(1, s.size() - 2);
  return s;
}

// Drops a trailing comment that is not inside quotes.
inline std::string strip_comment(const std::string& line) {
  char quote = 0;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quote) {
      if (c == quote) quote = 0;
    } else if (c == '"' || c == '\'') {
      quote = c;
    } else if (c == '#') {
      return line.substr(0, i);
    }
  }
  return line;
}

inline std::vector<std::string> split_list(const std::string& body) {
  std::vector<std::string> out;
  std::string cur;
  char quote = 0;
  for (char c : body) {
    if (quote) {
      cur += c;
      if (c == quote) quote = 0;
    } else if (c == '"' || c == '\'') {
      quote = c;
      cur += c;
    } else if (c == ',') {
      out.push_back(unquote(trim(cur)));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (quote) throw ConfigError("unterminated quote in list [" + body + "]");
  const std::string last = trim(cur);
  if (!last.empty() || !out.empty()) out.push_back(unquote(last));
  return out;
}

}  // namespace config_detail

// Parses a number, accepting "a^b" for powers.
inline double parse_number(const std::string& text) {
  const std::string s = config_detail::trim(text);
  const auto caret = s.find('^');
  try {
    std::size_t used = 0;
    if (caret != std::string::npos) {
      const double base = std::stod(s.substr(0, caret), &used);
      if (used != caret) throw ConfigError("");
      const std::string ex = s.substr(caret + 1);
      const double expo = std::stod(ex, &used);
      if (used != ex.size()) throw ConfigError("");
      return std::pow(base, expo);
    }
    const double v = std::stod(s, &used);
    if (used != s.size()) throw ConfigError("");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("not a number: '" + s + "'");
  }
}

// Resolves a time token against a system size: "3", "L", "2L", "L^2", "0.5L".
inline double resolve_time(const std::string& token, int L) {
  const std::string s = config_detail::trim(token);
  if (s.empty()) throw ConfigError("empty time token");
  const auto pos = s.find('L');
  if (pos == std::string::npos) return parse_number(s);
  const std::string coeff = s.substr(0, pos);
  const std::string rest = s.substr(pos + 1);
  const double c = coeff.empty() ? 1.0 : parse_number(coeff);
  double p = 1.0;
  if (!rest.empty()) {
    if (rest.front() != '^') throw ConfigError("bad time token '" + s + "'");
    p = parse_number(rest.substr(1));
  }
  return c * std::pow(static_cast<double>(L), p);
}

class ExperimentConfig {
 public:
  ExperimentConfig() = default;

  static ExperimentConfig parse(const std::string& text, const std::string& source = "<string>") {
    ExperimentConfig cfg;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const std::string body = config_detail::trim(config_detail::strip_comment(line));
      if (body.empty()) continue;
      const auto eq = body.find('=');
      if (eq == std::string::npos)
        throw ConfigError(source + ":" + std::to_string(lineno) + ": expected 'key = value'");
      const std::string key = config_detail::trim(body.substr(0, eq));
      if (key.empty()) throw ConfigError(source + ":" + std::to_string(lineno) + ": empty key");
      cfg.set(key, config_detail::trim(body.substr(eq + 1)));
    }
    return cfg;
  }

  static ExperimentConfig from_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return parse(ss.str(), path);
  }

  void set(const std::string& key, const std::string& raw) {
    const std::string v = config_detail::trim(raw);
    if (!v.empty() && v.front() == '[' && v.back() != ']') throw ConfigError("key '" + key + "': unterminated list");
    values_[key] = v;
  }

  // "key=value" from the command line.
  void apply_override(const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("override must be key=value, got '" + assignment + "'");
    set(config_detail::trim(assignment.substr(0, eq)), assignment.substr(eq + 1));
  }

  // Keys from `other` replace ours.
  void merge(const ExperimentConfig& other) {
    for (const auto& [k, v] : other.values_) values_[k] = v;
  }

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  const std::map<std::string, std::string>& values() const { return values_; }

  std::string raw(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError("missing config key '" + key + "'");
    return it->second;
  }

  std::string get_string(const std::string& key) const {
    const std::string v = raw(key);
    if (is_list(v)) throw ConfigError("key '" + key + "' is a list, expected a scalar");
    return config_detail::unquote(v);
  }
  std::string get_string(const std::string& key, const std::string& fallback) const {
    return has(key) ? get_string(key) : fallback;
  }

  double get_double(const std::string& key) const {
    try {
      return parse_number(get_string(key));
    } catch (const ConfigError& e) {
      throw ConfigError("key '" + key + "': " + e.what());
    }
  }
  double get_double(const std::string& key, double fallback) const { return has(key) ? get_double(key) : fallback; }

  std::int64_t get_int(const std::string& key) const {
    const double d = get_double(key);
    if (d != std::floor(d) || std::abs(d) > 9.0e15) throw ConfigError("key '" + key + "' must be an integer");
    return static_cast<std::int64_t>(d);
  }
  std::int64_t get_int(const std::string& key, std::int64_t fallback) const {
    return has(key) ? get_int(key) : fallback;
  }

  std::uint64_t get_seed(const std::string& key) const {
    const std::string s = get_string(key);
    try {
      if (s.empty() || s[0] == '-') throw ConfigError("");
      std::size_t used = 0;
      const unsigned long long v = std::stoull(s, &used, 0);
      if (used != s.size()) throw ConfigError("");
      return v;
    } catch (const std::exception&) {
      throw ConfigError("key '" + key + "' must be a non-negative 64-bit integer");
    }
  }

  bool get_bool(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    const std::string s = get_string(key);
    if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
    if (s == "false" || s == "0" || s == "no" || s == "off") return false;
    throw ConfigError("key '" + key + "' must be a boolean");
  }

  // Scalars are promoted to one-element lists.
  std::vector<std::string> get_strings(const std::string& key) const {
    const std::string v = raw(key);
    if (!is_list(v)) return {config_detail::unquote(v)};
    return config_detail::split_list(v.substr(1, v.size() - 2));
  }

  std::vector<double> get_doubles(const std::string& key) const {
    std::vector<double> out;
    for (const auto& s : get_strings(key)) {
      try {
        out.push_back(parse_number(s));
      } catch (const ConfigError& e) {
        throw ConfigError("key '" + key + "': " + e.what());
      }
    }
    return out;
  }

  std::vector<int> get_ints(const std::string& key) const {
    std::vector<int> out;
    for (double d : get_doubles(key)) {
      if (d != std::floor(d)) throw ConfigError("key '" + key + "' must hold integers");
      out.push_back(static_cast<int>(d));
    }
    return out;
  }

  std::string id() const { return get_string("experiment_id"); }

 private:
  static bool is_list(const std::string& v) { return !v.empty() && v.front() == '['; }

  std::map<std::string, std::string> values_;
};

}  // namespace hent
