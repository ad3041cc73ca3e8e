#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "hent/circuits/circuit.hpp"
#include "hent/spectra/alpha_c.hpp"
#include "hent/spectra/bounds.hpp"
#include "hent/spectra/hierarchy.hpp"
#include "hent/spectra/spike_cloud.hpp"
#include "test_util.hpp"

using namespace hent;

namespace {

// a on the low qubits, b on the high ones
PureState tensor(const PureState& a, const PureState& b) {
  CVector v(a.dim() * b.dim());
  for (Eigen::Index j = 0; j < b.dim(); ++j)
    for (Eigen::Index i = 0; i < a.dim(); ++i) v(i + j * a.dim()) = a.amplitudes()(i) * b.amplitudes()(j);
  return PureState(a.qubits() + b.qubits(), v);
}

double phase_free_distance(const CVector& a, const CVector& b) { return 1.0 - std::abs(a.dot(b)); }

struct Instance {
  PureState phi;
  PureState psi;
  SpikeCloud cloud;
  DensityMatrix rho;
};

Instance haar_instance(int L, int t, double eps, std::uint64_t seed) {
  const ProductState base = ProductState::all_zero(L);
  const CircuitRealization c = build_brickwork(L, std::max(t, 1), seed, Ensemble::haar);
  PureState phi = heisenberg_state(c, center_site(L), base.to_state(), t);
  phi.normalize();
  const PerturbedState ps = perturbed_state(phi, eps, base.to_state());
  const Region cut = Region::prefix(L / 2);
  SpikeCloud cloud = spike_cloud_decompose(phi, eps, base, cut);
  DensityMatrix rho = reduced_density(ps.psi, cut);
  return {phi, ps.psi, std::move(cloud), std::move(rho)};
}

}  // namespace

TEST(SpikeCloud, TimeZeroIsPureSpike) {
  const int L = 8;
  const ProductState base = ProductState::all_zero(L);
  const SpikeCloud c = spike_cloud_decompose(base.to_state(), 0.4, base, Region::prefix(4));
  EXPECT_EQ(c.mu, 0.0);
  EXPECT_FALSE(c.omega.has_value());
  EXPECT_NEAR(std::abs(c.v.amplitudes()(0)), 1.0, 1e-15);
  EXPECT_NEAR(c.N_t, 1.96, 1e-15);
}

TEST(SpikeCloud, FlipInsideComplement) {
  const int L = 6;
  const ProductState base = ProductState::all_zero(L);
  const PureState phi = PureState::basis(L, 1u << 4);
  const SpikeCloud c = spike_cloud_decompose(phi, 0.4, base, Region::prefix(3));
  EXPECT_NEAR(c.x.norm(), 0.0, 1e-15);
  EXPECT_NEAR(c.y_norm_sq, 1.0, 1e-15);
  EXPECT_NEAR(c.mu, 0.16 / 1.16, 1e-15);
  ASSERT_TRUE(c.omega.has_value());
  // tr_B|y><y| is |000><000| here, identical to the spike
  EXPECT_NEAR(std::abs(c.omega->matrix()(0, 0)), 1.0, 1e-15);
}

TEST(SpikeCloud, HaarInvariantsAtLateTime) {
  const Instance in = haar_instance(10, 20, 0.4, 2024);
  const SpikeCloud& c = in.cloud;
  EXPECT_LE(c.mu, 0.16 + 1e-12);
  EXPECT_NEAR(c.x.amplitudes().squaredNorm() + c.y_norm_sq, 1.0, 1e-10);
  EXPECT_LE((c.reconstruct() - in.rho.matrix()).cwiseAbs().maxCoeff(), 1e-10);
  // the spike formula v = (|0_A> + eps|x>)/sqrt(N(1-mu)) agrees with the stored normalized vector
  CVector v = CVector::Zero(c.x.dim());
  v(0) = 1.0;
  v += 0.4 * c.x.amplitudes();
  v /= std::sqrt(c.N_t * (1.0 - c.mu));
  EXPECT_NEAR(v.norm(), 1.0, 1e-10);
  EXPECT_LE((v - c.v.amplitudes()).norm(), 1e-10);
}

TEST(SpikeCloud, RejectsBadInput) {
  const ProductState base = ProductState::all_zero(4);
  EXPECT_THROW(spike_cloud_decompose(base.to_state(), 1.0, base, Region::prefix(2)), InvalidArgument);
  CVector v = CVector::Ones(16);
  EXPECT_THROW(spike_cloud_decompose(PureState(4, v), 0.1, base, Region::prefix(2)), InvalidArgument);
}

TEST(AppendixA, ClosedFormRhsAtAlphaTwo) {
  const Instance in = haar_instance(8, 8, 0.4, 5);
  const BoundsReport rep = check_appendixA_bounds(in.cloud, in.rho, {2.0});
  bool seen = false;
  for (const auto& r : rep.records)
    if (r.name == "A.a_eps") {
      seen = true;
      EXPECT_NEAR(r.rhs, 2.0 * std::log(1.0 / 0.84), 1e-15);
      EXPECT_NEAR(r.rhs, 0.348707, 5e-7);
      EXPECT_NEAR(r.lhs, renyi_entropy(density_spectrum(in.rho.matrix()), 2.0), 1e-14);
      EXPECT_TRUE(r.satisfied);
    }
  EXPECT_TRUE(seen);
}

TEST(AppendixA, PureStateReducesToZeroChecks) {
  const int L = 6;
  const ProductState base = ProductState::all_zero(L);
  const SpikeCloud c = spike_cloud_decompose(base.to_state(), 0.3, base, Region::prefix(3));
  const DensityMatrix rho = reduced_density(perturbed_state(base.to_state(), 0.3, base.to_state()).psi, c.cut);
  const BoundsReport rep = check_appendixA_bounds(c, rho, standard_alpha_grid());
  EXPECT_EQ(c.mu, 0.0);
  EXPECT_EQ(rep.violations(), 0);
  // with mu = 0 every record compares S_alpha(rho_A) = 0 against zero (or a positive eps bound)
  for (const auto& r : rep.records) {
    if (!r.applicable) continue;
    EXPECT_NEAR(r.name == "A.b_lower" ? r.rhs : r.lhs, 0.0, 1e-12) << r.name;
    if (r.name != "A.a_eps") EXPECT_NEAR(r.name == "A.b_lower" ? r.lhs : r.rhs, 0.0, 1e-12) << r.name;
  }
}

TEST(AppendixA, PropertyRunHasNoViolations) {
  const std::vector<double> grid = standard_alpha_grid();
  const double eps_grid[3] = {0.1, 0.25, 0.4};
  std::mt19937_64 gen(99);
  int evaluated = 0;
  for (int i = 0; i < 200; ++i) {
    const int L = i % 2 ? 10 : 8;
    const double eps = eps_grid[i % 3];
    const int t = (i / 2) % 3 == 0 ? 0 : ((i / 2) % 3 == 1 ? L : 2 * L);
    const Instance in = haar_instance(L, t, eps, gen());
    ASSERT_LE(in.cloud.mu, eps * eps + 1e-12);
    ASSERT_LE((in.cloud.reconstruct() - in.rho.matrix()).cwiseAbs().maxCoeff(), 1e-10);
    const BoundsReport rep = check_appendixA_bounds(in.cloud, in.rho, grid);
    evaluated += rep.evaluated();
    for (const auto& r : rep.records)
      ASSERT_TRUE(!r.applicable || r.satisfied) << r.name << " alpha=" << r.alpha << " lhs=" << r.lhs
                                                << " rhs=" << r.rhs << " instance " << i;
  }
  EXPECT_GT(evaluated, 200 * 100);
}

TEST(AppendixA, RecordSemantics) {
  BoundsReport rep;
  rep.add("x", 1.0, 1.0 + 0.5e-9);
  rep.add("y", 1.0 + 2e-9, 1.0);
  rep.add_not_applicable("z");
  EXPECT_TRUE(rep.records[0].satisfied);
  EXPECT_FALSE(rep.records[1].satisfied);
  EXPECT_EQ(rep.violations(), 1);
  EXPECT_EQ(rep.evaluated(), 2);
}

TEST(AppendixB, DeltaFormula) { EXPECT_NEAR(overlap_delta(0.2, 0.01, 0.05), 0.792, 1e-15); }

TEST(AppendixB, PureSpikeChainIsTrivial) {
  const ProductState base = ProductState::all_zero(6);
  const SpikeCloud c = spike_cloud_decompose(base.to_state(), 0.4, base, Region::prefix(3));
  const DensityMatrix rho = reduced_density(perturbed_state(base.to_state(), 0.4, base.to_state()).psi, c.cut);
  const OverlapBound ob = check_overlap_bound(c, rho);
  EXPECT_NEAR(ob.lhs, 0.0, 1e-14);
  EXPECT_EQ(ob.report.violations(), 0);
}

TEST(AppendixB, HaarInstancesSatisfyChain) {
  std::mt19937_64 gen(7);
  int applicable = 0;
  for (int i = 0; i < 20; ++i) {
    const Instance in = haar_instance(8, 16, 0.4, gen());
    const OverlapBound ob = check_overlap_bound(in.cloud, in.rho);
    applicable += ob.applicable ? 1 : 0;
    EXPECT_EQ(ob.report.violations(), 0) << "instance " << i << " lhs=" << ob.lhs << " mid=" << ob.mid
                                         << " rhs=" << ob.rhs;
    // a is a diagonal element of a density matrix and the operator norm bounds it
    EXPECT_LE(ob.a, ob.omega_norm + 1e-12);
  }
  EXPECT_GT(applicable, 0);
}

TEST(AppendixB, PowerIterationNormMatchesDense) {
  const CMatrix rho = test::random_density(1100, 3, 4);
  const double dense = hermitian_eigenvalues(rho).maxCoeff();
  EXPECT_NEAR(hermitian_operator_norm(rho), dense, 1e-8);
}

TEST(Fannes, ClosedForms) {
  EXPECT_EQ(fannes_audenaert_bound(0.0, 16), 0.0);
  EXPECT_NEAR(fannes_audenaert_bound(0.5, 2), std::log(2.0), 1e-15);
  EXPECT_NEAR(fannes_audenaert_bound(0.5, 2), 0.693147, 1e-6);
  EXPECT_THROW(fannes_audenaert_bound(1.5, 2), InvalidArgument);
  EXPECT_THROW(fannes_audenaert_bound(-0.1, 2), InvalidArgument);
}

TEST(Fannes, RandomPairsHaveNoViolations) {
  std::mt19937_64 gen(11);
  std::uniform_int_distribution<int> dim_d(2, 64);
  for (int i = 0; i < 500; ++i) {
    const int d = dim_d(gen);
    const int r1 = 1 + static_cast<int>(gen() % d);
    const int r2 = 1 + static_cast<int>(gen() % d);
    CMatrix rho = test::random_density(d, static_cast<unsigned>(gen()), r1);
    CMatrix sigma = test::random_density(d, static_cast<unsigned>(gen()), r2);
    // half the pairs are close, which is where the bound is tight
    if (i % 2) sigma = (0.95 * rho + 0.05 * sigma).eval();
    const double T = std::min(1.0, trace_distance(rho, sigma));
    const double diff = std::abs(renyi_entropy(density_spectrum(rho), 1.0) - renyi_entropy(density_spectrum(sigma), 1.0));
    ASSERT_LE(diff, fannes_audenaert_bound(T, d) + kBoundSlack) << "trial " << i << " d=" << d << " T=" << T;
  }
}

TEST(AppendixF, LemmaOnRandomPairs) {
  const std::vector<double> grid = standard_alpha_grid();
  std::mt19937_64 gen(13);
  std::uniform_int_distribution<int> n_d(2, 8);
  std::uniform_real_distribution<double> mix(0.0, 3.0);
  int evaluated = 0;
  for (int i = 0; i < 500; ++i) {
    const int n = n_d(gen);
    const Region cut = Region::prefix(1 + static_cast<int>(gen() % (n - 1)));
    const PureState phi = test::random_state(n, static_cast<unsigned>(gen()));
    // correlated partner so that overlaps are not uniformly tiny
    CVector w = phi.amplitudes() + mix(gen) * test::random_state(n, static_cast<unsigned>(gen())).amplitudes();
    const PureState psi(n, w / w.norm());
    const double ov = std::abs(phi.inner(psi));
    const BoundsReport rep = check_overlap_entropy_lemma(schmidt_decompose(phi, cut).weights,
                                                         schmidt_decompose(psi, cut).weights, ov, grid);
    evaluated += rep.evaluated();
    ASSERT_EQ(rep.violations(), 0) << "pair " << i;
  }
  EXPECT_GT(evaluated, 500 * 30);
}

TEST(AppendixF, LemmaSkipsZeroOverlap) {
  const BoundsReport rep = check_overlap_entropy_lemma({1.0}, {0.5, 0.5}, 0.0, {0.5, 2.0});
  ASSERT_EQ(rep.records.size(), 1u);
  EXPECT_FALSE(rep.records[0].applicable);
}

TEST(Hierarchy, ProductAcrossSubcut) {
  const PureState c = test::random_state(2, 1);
  const PureState d = test::random_state(2, 2);
  const PureState a = tensor(c, d);
  const PureState b = test::random_state(4, 3);
  const auto levels = build_hierarchy(tensor(a, b), 2);
  ASSERT_EQ(levels.size(), 2u);
  EXPECT_NEAR(levels[0].leading_weight, 1.0, 1e-12);
  EXPECT_LE(phase_free_distance(levels[0].state.amplitudes(), a.amplitudes()), 1e-12);
  EXPECT_EQ(levels[1].region_size(), 2);
  EXPECT_NEAR(levels[1].leading_weight, 1.0, 1e-12);
  EXPECT_NEAR(levels[1].mu, 0.0, 1e-12);
  EXPECT_LE(phase_free_distance(levels[1].state.amplitudes(), c.amplitudes()), 1e-12);
}

TEST(Hierarchy, BellPairIsDegenerate) {
  // Bell pair between qubits 1 and 2, straddling the half cut
  CVector v = CVector::Zero(16);
  v(0) = v(0b0110) = 1.0 / std::sqrt(2.0);
  const ProductState ref = ProductState::all_zero(4);
  const HierarchyLevel top = hierarchy_top(PureState(4, v), 1, &ref);
  EXPECT_NEAR(top.leading_weight, 0.5, 1e-12);
  EXPECT_TRUE(top.degenerate);
  ASSERT_TRUE(top.second.has_value());
  // tie broken toward the reference product state
  EXPECT_NEAR(std::abs(top.state.amplitudes()(0)), 1.0, 1e-12);
}

TEST(Hierarchy, FloorOnOddSizes) {
  EXPECT_EQ(hierarchy_subcut(10, 1), 5);
  EXPECT_EQ(hierarchy_subcut(5, 1), 2);
  EXPECT_EQ(hierarchy_subcut(10, 2), 4);
  EXPECT_EQ(hierarchy_subcut(28, 2), 14);
  const auto levels = build_hierarchy(test::random_state(10, 4), 3);
  EXPECT_EQ(levels[0].region_size(), 5);
  EXPECT_EQ(levels[1].region_size(), 2);
  EXPECT_EQ(levels[2].region_size(), 1);
  for (const auto& l : levels) {
    EXPECT_GT(l.leading_weight, 0.0);
    EXPECT_LE(l.leading_weight, 1.0 + 1e-12);
  }
  EXPECT_THROW(hierarchy_descend(levels[2]), InvalidArgument);
}

TEST(Hierarchy, LevelStateMatchesDenseOracle) {
  const PureState psi = test::random_state(12, 21);
  const HierarchyLevel top = hierarchy_top(psi, 1, nullptr, true);
  Eigen::JacobiSVD<CMatrix> svd(amplitude_matrix(psi, Region::prefix(6)), Eigen::ComputeFullU);
  EXPECT_NEAR(top.leading_weight, svd.singularValues()(0) * svd.singularValues()(0), 1e-12);
  EXPECT_LE(phase_free_distance(top.state.amplitudes(), svd.matrixU().col(0)), 1e-10);
  ASSERT_TRUE(top.second.has_value());
  EXPECT_LE(phase_free_distance(top.second->amplitudes(), svd.matrixU().col(1)), 1e-10);
}

TEST(Hierarchy, ScrambledAlphaC) {
  EXPECT_EQ(scrambled_alpha_c(1), 1.0);
  EXPECT_EQ(scrambled_alpha_c(2), 1.0 / 3.0);
  EXPECT_EQ(scrambled_alpha_c(3), 1.0 / 7.0);
  EXPECT_THROW(scrambled_alpha_c(0), InvalidArgument);
}

TEST(AlphaC, SyntheticTransitionAtOneThird) {
  const std::vector<double> Ls = {10, 12, 14, 16};
  const std::vector<double> alphas = standard_alpha_grid();
  std::vector<std::vector<double>> S;
  for (double a : alphas) {
    std::vector<double> row;
    for (double L : Ls) row.push_back(std::max(0.1, 0.5 * (1.0 / 3.0 - a) * L));
    S.push_back(row);
  }
  const AlphaCEstimate est = alpha_c_estimate(Ls, alphas, S);
  ASSERT_TRUE(est.found);
  EXPECT_TRUE(est.monotone);
  EXPECT_NEAR(est.alpha_c_hat, 1.0 / 3.0, 0.05 + 1e-12);
}

TEST(AlphaC, ConstantCurves) {
  const std::vector<double> Ls = {8, 10, 12};
  const std::vector<double> alphas = {0.1, 0.5, 2.0};
  const AlphaCEstimate est = alpha_c_estimate(Ls, alphas, {{0.3, 0.3, 0.3}, {0.3, 0.3, 0.3}, {0.3, 0.3, 0.3}});
  EXPECT_EQ(est.alpha_c_hat, 0.1);
}

TEST(AlphaC, FlagsNonMonotoneAndRejectsFewSizes) {
  const std::vector<double> Ls = {8, 10, 12};
  const AlphaCEstimate est = alpha_c_estimate(Ls, {0.5, 1.0}, {{1, 1, 1}, {1, 2, 3}});
  EXPECT_FALSE(est.monotone);
  EXPECT_THROW(alpha_c_estimate({8, 10}, {0.5}, {{1, 1}}), InvalidArgument);
  EXPECT_THROW(alpha_c_estimate(Ls, {1.0, 0.5}, {{1, 1, 1}, {1, 1, 1}}), InvalidArgument);
}

TEST(RenyiCurve, NonIncreasingInAlpha) {
  const Instance in = haar_instance(10, 20, 0.4, 3);
  const std::vector<double> grid = standard_alpha_grid();
  const std::vector<double> curve = renyi_curve(density_spectrum(in.rho.matrix()), grid);
  for (std::size_t i = 1; i < curve.size(); ++i) EXPECT_LE(curve[i], curve[i - 1] + 1e-9) << grid[i];
}
