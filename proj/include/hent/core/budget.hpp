#pragma once

#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>

#include "hent/core/types.hpp"

namespace hent {

inline constexpr int kMaxCircuitQubits = 18;
inline constexpr int kMaxGibbsSites = 14;

// MemAvailable from /proc/meminfo in bytes; a very large value when unknown.
inline std::uint64_t available_memory_bytes() {
  std::ifstream in("/proc/meminfo");
  std::string key;
  std::uint64_t kb = 0;
  std::string unit;
  while (in >> key >> kb >> unit)
    if (key == "MemAvailable:") return kb * 1024;
  return std::uint64_t{1} << 62;
}

inline std::string format_gib(double bytes) {
  std::ostringstream os;
  os.precision(3);
  os << bytes / (1024.0 * 1024.0 * 1024.0) << " GiB";
  return os.str();
}

// Peak working set of a dense Gibbs-quench run: about a dozen real 2^L x 2^L
// matrices (Hamiltonian, eigenvectors, dressed operators, the complex
// purification and its reshaped copy, and the Gram matrix of the half cut).
inline double gibbs_peak_bytes(int L) {
  const double n2 = static_cast<double>(std::uint64_t{1} << L) * static_cast<double>(std::uint64_t{1} << L);
  return 112.0 * n2;
}

// Statevector experiments hold a handful of 2^L complex vectors plus the
// half-cut reduced density matrix.
inline double circuit_peak_bytes(int L) {
  const double d = static_cast<double>(std::uint64_t{1} << L);
  return 16.0 * (6.0 * d + 2.0 * d);
}

inline void check_gibbs_budget(int L) {
  if (L > kMaxGibbsSites)
    throw BudgetExceeded("Gibbs quench with L = " + std::to_string(L) + " exceeds the dense-ED cap L <= " +
                         std::to_string(kMaxGibbsSites));
  const double need = gibbs_peak_bytes(L);
  const double have = static_cast<double>(available_memory_bytes());
  if (need > have)
    throw BudgetExceeded("Gibbs quench with L = " + std::to_string(L) + " needs about " + format_gib(need) +
                         " but only " + format_gib(have) + " is available");
}

inline void check_circuit_budget(int L) {
  if (L > kMaxCircuitQubits)
    throw BudgetExceeded("circuit statevector with L = " + std::to_string(L) + " exceeds the cap L <= " +
                         std::to_string(kMaxCircuitQubits));
  const double need = circuit_peak_bytes(L);
  const double have = static_cast<double>(available_memory_bytes());
  if (need > have)
    throw BudgetExceeded("circuit statevector with L = " + std::to_string(L) + " needs about " + format_gib(need) +
                         " but only " + format_gib(have) + " is available");
}

}  // namespace hent
