#pragma once

#include <cctype>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "hent/circuits/gates.hpp"

namespace hent {

// Product of single-site Paulis, e.g. {(0,'X'), (1,'Y'), (2,'Z')}. Sites are 0-based.
class PauliString {
 public:
  PauliString() = default;
  explicit PauliString(std::vector<std::pair<int, char>> ops) : ops_(std::move(ops)) {
    for (auto& [site, p] : ops_) {
      p = static_cast<char>(std::toupper(static_cast<unsigned char>(p)));
      if (site < 0) throw InvalidArgument("PauliString: negative site");
      if (p != 'I' && p != 'X' && p != 'Y' && p != 'Z')
        throw InvalidArgument(std::string("PauliString: unknown Pauli '") + p + "'");
    }
  }

  // Parses whitespace-separated tokens such as "X0 Y1 Z2".
  static PauliString parse(const std::string& text) {
    std::vector<std::pair<int, char>> ops;
    std::size_t i = 0;
    while (i < text.size()) {
      if (std::isspace(static_cast<unsigned char>(text[i]))) {
        ++i;
        continue;
      }
      const char p = text[i++];
      std::size_t j = i;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      if (j == i) throw InvalidArgument("PauliString::parse: missing site after '" + std::string(1, p) + "'");
      ops.emplace_back(std::stoi(text.substr(i, j - i)), p);
      i = j;
    }
    return PauliString(std::move(ops));
  }

  const std::vector<std::pair<int, char>>& ops() const noexcept { return ops_; }
  bool empty() const noexcept { return ops_.empty(); }

  int max_site() const {
    int m = -1;
    for (const auto& op : ops_) m = std::max(m, op.first);
    return m;
  }
  int min_site() const {
    int m = 1 << 30;
    for (const auto& op : ops_) m = std::min(m, op.first);
    return m;
  }

  static Gate1 matrix(char p) {
    switch (p) {
      case 'X': return gates::pauli_x();
      case 'Y': return gates::pauli_y();
      case 'Z': return gates::pauli_z();
      default: return gates::identity1();
    }
  }

  // Applies the string to `amps`, placing site s on qubit qubit_of(s).
  void apply(CVector& amps, const std::function<int(int)>& qubit_of) const {
    for (const auto& [site, p] : ops_)
      if (p != 'I') apply_gate_unchecked(amps, matrix(p), qubit_of(site));
  }

  void apply(CVector& amps) const {
    apply(amps, [](int s) { return s; });
  }

 private:
  std::vector<std::pair<int, char>> ops_;
};

}  // namespace hent
