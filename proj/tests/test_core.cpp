#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "hent/core/eigen.hpp"
#include "hent/core/entropy.hpp"
#include "hent/core/rng.hpp"
#include "hent/core/state_ops.hpp"
#include "hent/core/subspace.hpp"
#include "test_util.hpp"

using namespace hent;

namespace {

// Dense operator of a two-site gate on n qubits, built entry by entry.
CMatrix dense_two_site(const Gate2& g, int n, int s0, int s1) {
  const Eigen::Index d = Eigen::Index{1} << n;
  CMatrix U = CMatrix::Zero(d, d);
  for (Eigen::Index col = 0; col < d; ++col) {
    const int c0 = (col >> s0) & 1, c1 = (col >> s1) & 1;
    for (int r0 = 0; r0 < 2; ++r0)
      for (int r1 = 0; r1 < 2; ++r1) {
        Eigen::Index row = col;
        row = (row & ~(Eigen::Index{1} << s0)) | (Eigen::Index{r0} << s0);
        row = (row & ~(Eigen::Index{1} << s1)) | (Eigen::Index{r1} << s1);
        U(row, col) += g(2 * r0 + r1, 2 * c0 + c1);
      }
  }
  return U;
}

}  // namespace

TEST(Region, RejectsNonContiguousAndImproperSets) {
  EXPECT_THROW(Region::from_sites({0, 2}), InvalidArgument);
  EXPECT_THROW(Region::from_sites({}), InvalidArgument);
  EXPECT_THROW(Region(0, 4).validate(4), InvalidArgument);
  EXPECT_THROW(Region(3, 2).validate(4), InvalidArgument);
  EXPECT_NO_THROW(Region::from_sites({1, 2, 3}).validate(5));
}

TEST(PureState, LengthMustBePowerOfTwo) {
  EXPECT_THROW(PureState(3, CVector::Zero(7)), InvalidArgument);
  EXPECT_TRUE(PureState::zeros(3).normalized());
}

TEST(PureState, SiteKIsBitK) {
  // |1> on site 2 of 4 qubits sits at index 4; the reshape round trip keeps it there.
  const PureState s = PureState::basis(4, 0b0100);
  const CMatrix m = amplitude_matrix(s, Region(2, 1));
  EXPECT_EQ(m(1, 0), cplx(1.0));
  for (int first = 0; first < 4; ++first)
    for (int count = 1; first + count < 5 && count < 4; ++count) {
      const PureState r = test::random_state(4, 11 + first * 4 + count);
      const PureState back = state_from_matrix(amplitude_matrix(r, Region(first, count)), 4, Region(first, count));
      EXPECT_EQ((back.amplitudes() - r.amplitudes()).norm(), 0.0);
    }
}

TEST(ApplyTwoSiteGate, IdentityIsBitExact) {
  const PureState s = test::random_state(5, 1);
  const PureState out = apply_two_site_gate(s, Gate2::Identity(), 1, 3);
  EXPECT_EQ((out.amplitudes() - s.amplitudes()).cwiseAbs().maxCoeff(), 0.0);
}

TEST(ApplyTwoSiteGate, SwapExchangesBasisStates) {
  // |01>: site 0 holds 0, site 1 holds 1 -> index 2; after SWAP index 1.
  Gate2 sw = Gate2::Zero();
  sw(0, 0) = sw(3, 3) = sw(1, 2) = sw(2, 1) = 1.0;
  const PureState out = apply_two_site_gate(PureState::basis(2, 2), sw, 0, 1);
  EXPECT_EQ(out.amplitudes()(1), cplx(1.0));
  EXPECT_EQ(out.amplitudes()(2), cplx(0.0));
}

TEST(ApplyTwoSiteGate, MatchesDenseKroneckerOracle) {
  Stream rng(5);
  const CMatrix q = test::random_unitary(4, rng);
  const PureState s = test::random_state(6, 2);
  for (auto [a, b] : std::vector<std::pair<int, int>>{{0, 1}, {2, 5}, {4, 1}, {5, 0}}) {
    const PureState out = apply_two_site_gate(s, Gate2(q), a, b);
    const CVector ref = dense_two_site(Gate2(q), 6, a, b) * s.amplitudes();
    EXPECT_LE((out.amplitudes() - ref).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_NEAR(out.norm(), 1.0, 1e-12);
  }
}

TEST(ApplyTwoSiteGate, RejectsBadInput) {
  const PureState s = PureState::zeros(3);
  Gate2 bad = Gate2::Identity();
  bad(0, 0) = 1.1;
  try {
    apply_two_site_gate(s, bad, 0, 1);
    FAIL();
  } catch (const InvalidArgument& e) {
    EXPECT_NE(std::string(e.what()).find("residual"), std::string::npos);
  }
  EXPECT_THROW(apply_two_site_gate(s, Gate2::Identity(), 0, 3), InvalidArgument);
  EXPECT_THROW(apply_two_site_gate(s, Gate2::Identity(), 1, 1), InvalidArgument);
}

TEST(ApplyTwoSiteGate, NormDriftOverThousandGates) {
  Stream rng(9);
  PureState s = test::random_state(8, 3);
  for (int i = 0; i < 1000; ++i) {
    const int a = static_cast<int>(rng() % 7);
    s = apply_two_site_gate(s, Gate2(test::random_unitary(4, rng)), a, a + 1);
  }
  EXPECT_NEAR(s.norm(), 1.0, 1e-9);
}

TEST(PartialProject, ProductAndOrthogonalCases) {
  const PureState zero = PureState::zeros(4);
  const PureState x = partial_project(zero, Region(2, 2), ProductState::all_zero(2));
  EXPECT_EQ(x.qubits(), 2);
  EXPECT_NEAR(x.norm(), 1.0, 1e-15);
  EXPECT_EQ(x.amplitudes()(0), cplx(1.0));

  // a random A-part tensored with |1> on B projects to zero
  const PureState a = test::random_state(3, 4);
  CVector full = CVector::Zero(16);
  full.segment(8, 8) = a.amplitudes();  // site 3 = 1
  const PureState y = partial_project(PureState(4, full), Region(3, 1), ProductState::all_zero(1));
  EXPECT_LE(y.norm(), 1e-15);
}

TEST(PartialProject, NormIdentityOnRandomState) {
  const PureState s = test::random_state(8, 5);
  const ProductState bra = ProductState::all_zero(8);
  const Region B(4, 4);
  const ProjectionSplit sp = split_projection(s, B, bra.vector_on(B));
  const double nx = sp.x.amplitudes().squaredNorm();
  const double ny = sp.y.amplitudes().squaredNorm();
  EXPECT_NEAR(nx + ny, 1.0, 1e-12);
  // <0_B|y> = 0
  EXPECT_LE(partial_project(sp.y, B, ProductState::all_zero(4)).norm(), 1e-12);
  // independent reshape oracle: x_a = psi(a + 16 * 0)
  for (int a = 0; a < 16; ++a) EXPECT_LE(std::abs(sp.x.amplitudes()(a) - s.amplitudes()(a)), 1e-15);
}

TEST(ReducedDensity, ProductBellAndSvdOracle) {
  const DensityMatrix p = reduced_density(PureState::zeros(4), Region(0, 2));
  EXPECT_NEAR(p.purity(), 1.0, 1e-12);
  EXPECT_TRUE(p.valid());

  CVector bell = CVector::Zero(4);
  bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
  const DensityMatrix b = reduced_density(PureState(2, bell), Region(0, 1));
  EXPECT_NEAR(b.matrix()(0, 0).real(), 0.5, 1e-15);
  EXPECT_NEAR(b.matrix()(1, 1).real(), 0.5, 1e-15);
  EXPECT_NEAR(std::abs(b.matrix()(0, 1)), 0.0, 1e-15);

  const PureState s = test::random_state(10, 6);
  const Region keep(3, 4);
  const DensityMatrix r = reduced_density(s, keep);
  EXPECT_TRUE(r.valid());
  EXPECT_LE(r.purity(), 1.0 + 1e-10);
  // oracle: U diag(sigma^2) U^dagger from Eigen's SVD of an independently built reshape
  CMatrix psi(16, 64);
  for (Eigen::Index i = 0; i < 1024; ++i) {
    const Eigen::Index a = (i >> 3) & 15;
    const Eigen::Index b = (i & 7) | ((i >> 7) << 3);
    psi(a, b) = s.amplitudes()(i);
  }
  Eigen::JacobiSVD<CMatrix> svd(psi, Eigen::ComputeThinU);
  const CMatrix ref = svd.matrixU() * svd.singularValues().cwiseAbs2().asDiagonal() * svd.matrixU().adjoint();
  EXPECT_LE((r.matrix() - ref).cwiseAbs().maxCoeff(), 1e-12);

  EXPECT_THROW(reduced_density(PureState(2, CVector::Ones(4)), Region(0, 1)), InvalidArgument);
}

TEST(SchmidtDecompose, ClosedFormCases) {
  EXPECT_NEAR(schmidt_decompose(PureState::zeros(4), Region(0, 2)).weights[0], 1.0, 1e-14);

  CVector bell = CVector::Zero(4);
  bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
  auto w = schmidt_decompose(PureState(2, bell), Region(0, 1)).weights;
  EXPECT_NEAR(w[0], 0.5, 1e-14);
  EXPECT_NEAR(w[1], 0.5, 1e-14);

  CVector ghz = CVector::Zero(16);
  ghz(0) = ghz(15) = 1.0 / std::sqrt(2.0);
  w = schmidt_decompose(PureState(4, ghz), Region(0, 2)).weights;
  EXPECT_NEAR(w[0], 0.5, 1e-14);
  EXPECT_NEAR(w[1], 0.5, 1e-14);
  EXPECT_NEAR(w[2], 0.0, 1e-14);
}

TEST(SchmidtDecompose, AgreesWithDenseEigenOfRho) {
  for (int n : {6, 9, 12}) {
    const PureState s = test::random_state(n, 100 + n);
    for (const Region cut : {Region(0, n / 2), Region(1, n / 3), Region(n - 2, 2)}) {
      const SchmidtSpectrum sp = schmidt_decompose(s, cut, true);
      ASSERT_TRUE(std::is_sorted(sp.weights.rbegin(), sp.weights.rend()));
      EXPECT_NEAR(sp.total(), 1.0, 1e-9);
      Eigen::SelfAdjointEigenSolver<CMatrix> es(reduced_density(s, cut).matrix());
      const RVector ev = es.eigenvalues().reverse();
      for (std::size_t i = 0; i < sp.weights.size(); ++i) EXPECT_NEAR(sp.weights[i], ev(i), 1e-10);
      const CMatrix& U = *sp.left_vectors;
      EXPECT_LE((U.adjoint() * U - CMatrix::Identity(U.cols(), U.cols())).cwiseAbs().maxCoeff(), 1e-10);
    }
  }
}

TEST(SchmidtDecompose, GramRouteForLargeCuts) {
  // 22 qubits split 11 | 11 exceeds the SVD limit on both sides.
  const PureState s = test::random_state(22, 77);
  const SchmidtSpectrum sp = schmidt_decompose(s, Region(0, 11));
  EXPECT_EQ(sp.weights.size(), 2048u);
  EXPECT_NEAR(sp.total(), 1.0, 1e-9);
  const SchmidtSpectrum svd_side = schmidt_decompose(s, Region(0, 10));
  EXPECT_NEAR(svd_side.total(), 1.0, 1e-9);
}

TEST(TopSchmidtMatrixFree, RankOneConvergesInOneSweep) {
  const SchmidtSpectrum sp = top_schmidt_matrix_free(PureState::zeros(6), Region(0, 3), 1);
  EXPECT_NEAR(sp.weights[0], 1.0, 1e-12);
  EXPECT_EQ(sp.iterations, 1);
  EXPECT_LE(sp.max_residual, 1e-10);
}

TEST(TopSchmidtMatrixFree, BellPairIsDegenerate) {
  CVector bell = CVector::Zero(4);
  bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
  const SchmidtSpectrum sp = top_schmidt_matrix_free(PureState(2, bell), Region(0, 1), 2);
  EXPECT_NEAR(sp.weights[0], 0.5, 1e-12);
  EXPECT_NEAR(sp.weights[1], 0.5, 1e-12);
  EXPECT_TRUE(sp.degenerate);
}

TEST(TopSchmidtMatrixFree, MatchesDenseSvdOnTwelveQubits) {
  const PureState s = test::random_state(12, 8);
  const SchmidtSpectrum top = top_schmidt_matrix_free(s, Region(0, 6), 3);
  Eigen::BDCSVD<CMatrix> svd(amplitude_matrix(s, Region(0, 6)));
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(top.weights[i], svd.singularValues()(i) * svd.singularValues()(i), 1e-10);
  const CMatrix& U = *top.left_vectors;
  EXPECT_LE((U.adjoint() * U - CMatrix::Identity(3, 3)).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_FALSE(top.degenerate);
}

TEST(TopSchmidtMatrixFree, ReportsNonConvergence) {
  SubspaceOptions opt;
  opt.max_sweeps = 1;
  opt.residual_tol = 1e-15;
  const PureState s = test::random_state(12, 9);
  try {
    top_schmidt_matrix_free(s, Region(0, 6), 3, opt);
    FAIL() << "expected ConvergenceError";
  } catch (const ConvergenceError& e) {
    EXPECT_GT(e.residual(), 0.0);
    EXPECT_EQ(e.iterations(), 1);
  }
  EXPECT_THROW(top_schmidt_matrix_free(s, Region(0, 6), 0), InvalidArgument);
}

TEST(SchmidtWithTopVectors, LargeCutUsesMatrixFreeVectors) {
  // two product spikes on top of a random cloud keep the top pair well separated
  CVector v = 0.2 * test::random_state(22, 12).amplitudes();
  v(0) += 0.8;
  v(v.size() - 1) += 0.55;
  const PureState s(22, v / v.norm());
  const SchmidtSpectrum sp = schmidt_with_top_vectors(s, Region(0, 11), 2);
  ASSERT_TRUE(sp.left_vectors.has_value());
  EXPECT_EQ(sp.left_vectors->cols(), 2);
  EXPECT_GT(sp.iterations, 0);
  const CMatrix psi = amplitude_matrix(s, Region(0, 11));
  const CVector u = sp.left_vectors->col(0);
  const CVector ru = psi * (psi.adjoint() * u);
  EXPECT_LE((ru - sp.weights[0] * u).norm(), 1e-9);
}

TEST(RenyiEntropy, ClosedForms) {
  for (double a : {0.3, 1.0, 2.0}) EXPECT_EQ(renyi_entropy({1.0}, a), 0.0);
  EXPECT_NEAR(renyi_entropy({0.25, 0.25, 0.25, 0.25}, 0.5), std::log(4.0), 1e-12);
  // -0.9 ln 0.9 - 0.1 ln 0.1
  const double ref = -0.9 * std::log(0.9) - 0.1 * std::log(0.1);
  EXPECT_NEAR(renyi_entropy({0.9, 0.1}, 1.0), ref, 1e-15);
  EXPECT_NEAR(renyi_entropy({0.9, 0.1}, 1.0), 0.325083, 1e-6);
  EXPECT_THROW(renyi_entropy({1.0}, 0.0), InvalidArgument);
  EXPECT_THROW(renyi_entropy({1.0}, -1.0), InvalidArgument);
}

TEST(RenyiEntropy, ContinuityAtOneAndMonotonicity) {
  const auto grid = standard_alpha_grid();
  for (int seed = 0; seed < 20; ++seed) {
    const PureState s = test::random_state(8, 300 + seed);
    const auto w = schmidt_decompose(s, Region(0, 1 + seed % 6)).weights;
    const double s1 = renyi_entropy(w, 1.0);
    EXPECT_LE(std::abs(renyi_entropy(w, 1.0 + 1e-6) - s1), 1e-4);
    EXPECT_LE(std::abs(renyi_entropy(w, 1.0 - 1e-6) - s1), 1e-4);
    const auto curve = renyi_curve(w, grid);
    for (std::size_t i = 1; i < curve.size(); ++i) EXPECT_LE(curve[i], curve[i - 1] + 1e-9);
    double purity = 0.0;
    for (double x : w) purity += x * x;
    EXPECT_GT(purity, 0.0);
    EXPECT_LE(purity, 1.0 + 1e-10);
  }
}

TEST(RenyiEntropy, ClipFloorDropsNumericalZeros) {
  EXPECT_NEAR(renyi_entropy({1.0 - 1e-15, 1e-15}, 0.05), 0.0, 1e-12);
}

TEST(AlphaGrid, ContainsExactPoints) {
  const auto g = standard_alpha_grid();
  for (double a : {1.0 / 7.0, 1.0 / 3.0, 0.5, 1.0, 0.05, 3.0})
    EXPECT_TRUE(std::any_of(g.begin(), g.end(), [a](double x) { return x == a || std::abs(x - a) < 1e-12; }));
  EXPECT_TRUE(std::is_sorted(g.begin(), g.end()));
  EXPECT_EQ(g.size(), 62u);
  for (double a : {0.3, 0.7, 1.5, 2.0, 2.95})
    EXPECT_TRUE(std::find(g.begin(), g.end(), a) != g.end()) << a;
}

TEST(EigendecomposeHermitian, ClosedForms) {
  RMatrix d = RMatrix::Zero(3, 3);
  d.diagonal() << 1, 2, 3;
  const SymmetricEigen e = eigendecompose_hermitian(d);
  EXPECT_NEAR(e.values(0), 1.0, 1e-15);
  EXPECT_NEAR(e.values(2), 3.0, 1e-15);
  EXPECT_LE((e.vectors.cwiseAbs() - RMatrix::Identity(3, 3)).cwiseAbs().maxCoeff(), 1e-15);

  CMatrix x(2, 2);
  x << 0, 1, 1, 0;
  const HermitianEigen ex = eigendecompose_hermitian(x);
  EXPECT_NEAR(ex.values(0), -1.0, 1e-15);
  EXPECT_NEAR(ex.values(1), 1.0, 1e-15);
}

TEST(EigendecomposeHermitian, RandomReconstruction) {
  Stream rng(44);
  std::normal_distribution<double> nd;
  CMatrix a(64, 64);
  for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = cplx(nd(rng), nd(rng));
  const CMatrix h = 0.5 * (a + a.adjoint());
  const HermitianEigen e = eigendecompose_hermitian(h);
  const CMatrix rec = e.vectors * e.values.asDiagonal() * e.vectors.adjoint();
  EXPECT_LE((h - rec).cwiseAbs().maxCoeff(), 1e-10 * h.cwiseAbs().maxCoeff());
  EXPECT_LE((e.vectors.adjoint() * e.vectors - CMatrix::Identity(64, 64)).cwiseAbs().maxCoeff(), 1e-10);
  for (Eigen::Index i = 1; i < 64; ++i) EXPECT_LE(e.values(i - 1), e.values(i));
}

TEST(EigendecomposeHermitian, RejectsNonHermitian) {
  CMatrix m(2, 2);
  m << 0, 1, 0, 0;
  try {
    eigendecompose_hermitian(m);
    FAIL();
  } catch (const InvalidArgument& e) {
    EXPECT_NE(std::string(e.what()).find("asymmetry"), std::string::npos);
  }
}
