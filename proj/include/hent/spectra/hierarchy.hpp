#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "hent/core/entropy.hpp"
#include "hent/core/subspace.hpp"

namespace hent {

// One level of the nested Schmidt hierarchy. `spectrum` is the Schmidt
// spectrum of the parent state across `cut`; `state` is its dominant Schmidt
// vector, which lives on the cut's qubits.
struct HierarchyLevel {
  int j = 0;
  Region cut{0, 1};
  int unit = 1;
  PureState state;
  std::optional<PureState> second;  // rank-2 Schmidt vector
  double mu = 0.0;                  // 1 - leading weight
  double leading_weight = 1.0;
  bool degenerate = false;
  SchmidtSpectrum spectrum;

  int region_size() const { return cut.count(); }
};

inline constexpr double kDegeneracyGap = 1e-9;

// Size of the next cut: the first half of `n` qubits, rounded down to a
// multiple of `unit` (unit 2 keeps system and ancilla qubits together).
inline int hierarchy_subcut(int n, int unit) { return unit * ((n / unit) / 2); }

namespace detail {

inline HierarchyLevel descend_from(const PureState& parent, int j, int unit, const ProductState* reference,
                                   bool want_second, const SubspaceOptions& opt) {
  const int sub = hierarchy_subcut(parent.qubits(), unit);
  if (sub < 1 || sub >= parent.qubits())
    throw InvalidArgument("hierarchy: cannot split a " + std::to_string(parent.qubits()) + "-qubit state further");
  const Region cut = Region::prefix(sub);
  const Eigen::Index dA = Eigen::Index{1} << sub;
  const int k = static_cast<int>(std::min<Eigen::Index>(2, dA));

  HierarchyLevel lvl;
  lvl.j = j;
  lvl.cut = cut;
  lvl.unit = unit;
  lvl.spectrum = schmidt_with_top_vectors(parent, cut, k, opt);
  const auto& w = lvl.spectrum.weights;
  const CMatrix& vecs = *lvl.spectrum.left_vectors;
  lvl.leading_weight = w.front();
  lvl.mu = std::max(0.0, 1.0 - w.front());
  lvl.degenerate = w.size() > 1 && w[0] - w[1] < kDegeneracyGap;

  int first = 0;
  if (lvl.degenerate && reference != nullptr && vecs.cols() > 1) {
    const CVector ref = reference->vector_on(cut);
    if (std::abs(ref.dot(vecs.col(1))) > std::abs(ref.dot(vecs.col(0)))) first = 1;
  }
  lvl.state = PureState(sub, vecs.col(first));
  if ((want_second || lvl.degenerate) && vecs.cols() > 1) lvl.second = PureState(sub, vecs.col(1 - first));
  return lvl;
}

}  // namespace detail

// Level 1: Schmidt decomposition of the full state across the first half.
inline HierarchyLevel hierarchy_top(const PureState& psi, int unit = 1, const ProductState* reference = nullptr,
                                    bool want_second = false, const SubspaceOptions& opt = {}) {
  if (!psi.normalized(1e-10)) throw InvalidArgument("hierarchy_top: state must be normalized");
  return detail::descend_from(psi, 1, unit, reference, want_second, opt);
}

// Level j + 1 from level j. `reference` (when given) covers the level state's
// qubits and breaks ties in degenerate leading subspaces.
inline HierarchyLevel hierarchy_descend(const HierarchyLevel& level, const ProductState* reference = nullptr,
                                        bool want_second = false, const SubspaceOptions& opt = {}) {
  if (!level.state.normalized(1e-10)) throw InvalidArgument("hierarchy_descend: level state must be normalized");
  return detail::descend_from(level.state, level.j + 1, level.unit, reference, want_second, opt);
}

inline std::vector<HierarchyLevel> build_hierarchy(const PureState& psi, int levels, int unit = 1,
                                                   const ProductState* reference = nullptr,
                                                   bool want_second = false) {
  std::vector<HierarchyLevel> out;
  out.push_back(hierarchy_top(psi, unit, reference, want_second));
  while (static_cast<int>(out.size()) < levels)
    out.push_back(hierarchy_descend(out.back(), reference, want_second));
  return out;
}

// Critical index of the maximally scrambled hierarchy, 1 / (2^j - 1).
inline double scrambled_alpha_c(int j) {
  if (j < 1 || j > 60) throw InvalidArgument("scrambled_alpha_c: level must be in [1, 60]");
  return 1.0 / static_cast<double>((std::uint64_t{1} << j) - 1);
}

}  // namespace hent
