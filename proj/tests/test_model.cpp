#include "support/helpers.hpp"

#include <gtest/gtest.h>

using namespace sshent;
using namespace testing_support;

TEST(Bloch, SingleLegAtZeroMomentum) {
  const auto p = LadderParams::uniform(1, 1, 0.5, 0.0);
  const CMatrix H = bloch_hamiltonian(p, 0.0);
  EXPECT_NEAR(std::abs(H(0, 1) - cplx(2.0, 0.0)), 0.0, 1e-14);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(H);
  EXPECT_NEAR(es.eigenvalues()(0), -2.0, 1e-14);
  EXPECT_NEAR(es.eigenvalues()(1), 2.0, 1e-14);
}

TEST(Bloch, SingleLegAtPi) {
  for (double d : {-0.7, -0.2, 0.3, 0.9}) {
    const auto p = LadderParams::uniform(1, 1, d, 0.0);
    EXPECT_NEAR(std::abs(bloch_hamiltonian(p, kPi)(0, 1)), 2.0 * std::abs(d), 1e-14);
  }
}

TEST(Bloch, ThreeLegTransverseModes) {
  const auto p = LadderParams::uniform(3, 1, 0.5, 0.1);
  for (double k : {0.3, 1.1, 2.0, 4.4}) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(bloch_hamiltonian(p, k));
    const double x = std::abs(dimer_amplitude(p, 0, k));
    std::vector<double> expected;
    for (int s = 1; s <= 3; ++s) {
      const double lam = x + 2.0 * p.z * std::cos(s * kPi / 4.0);
      expected.push_back(lam);
      expected.push_back(-lam);
    }
    std::sort(expected.begin(), expected.end());
    for (int i = 0; i < 6; ++i) EXPECT_NEAR(es.eigenvalues()(i), expected[static_cast<std::size_t>(i)], 1e-12);
  }
}

TEST(Bloch, OffBlockDiagonalStructure) {
  std::mt19937_64 rng(7);
  for (int M = 1; M <= 4; ++M) {
    const auto p = random_ladder(rng, M, 1);
    const CMatrix H = bloch_hamiltonian(p, 0.77);
    EXPECT_LT(max_abs(H.topLeftCorner(M, M)), 1e-15);
    EXPECT_LT(max_abs(H.bottomRightCorner(M, M)), 1e-15);
    EXPECT_LT(hermiticity_defect(H), 1e-15);
    const CMatrix D = H.topRightCorner(M, M);
    for (int s = 0; s < M; ++s) {
      const cplx x = dimer_amplitude(p, s, 0.77);
      EXPECT_NEAR(std::abs(D(s, s) - (s % 2 == 0 ? x : std::conj(x))), 0.0, 1e-15);
      if (s + 1 < M) EXPECT_EQ(D(s, s + 1), cplx(p.z, 0.0));
    }
  }
}

TEST(Bloch, TimeReversal) {
  std::mt19937_64 rng(11);
  for (int M = 1; M <= 4; ++M) {
    const auto p = random_ladder(rng, M, 1);
    for (double k : {0.2, 1.3, 2.9}) {
      EXPECT_LT(max_abs(bloch_hamiltonian(p, k).conjugate() - bloch_hamiltonian(p, -k)), 1e-14);
    }
  }
}

TEST(Bloch, DerivativeMatchesFiniteDifference) {
  std::mt19937_64 rng(3);
  const auto p = random_ladder(rng, 3, 1);
  const double k = 0.9, h = 1e-6;
  const CMatrix fd = (bloch_hamiltonian(p, k + h) - bloch_hamiltonian(p, k - h)) / (2 * h);
  EXPECT_LT(max_abs(fd - bloch_hamiltonian_derivative(p, k)), 1e-8);
}

TEST(RealSpace, SingleDimer) {
  const auto p = LadderParams::uniform(1, 1, 0.3, 0.0);
  const RMatrix h = real_space_hamiltonian(p);
  ASSERT_EQ(h.rows(), 2);
  EXPECT_DOUBLE_EQ(h(0, 0), 0.0);
  EXPECT_DOUBLE_EQ(h(0, 1), 0.7);
  EXPECT_DOUBLE_EQ(h(1, 0), 0.7);
  EXPECT_DOUBLE_EQ(h(1, 1), 0.0);
}

TEST(RealSpace, UniformFourSiteChain) {
  const auto p = LadderParams::uniform(1, 2, 0.0, 0.0);
  Eigen::SelfAdjointEigenSolver<RMatrix> es(real_space_hamiltonian(p));
  const double g = (1.0 + std::sqrt(5.0)) / 2.0;
  const double expected[4] = {-g, -1.0 / g, 1.0 / g, g};
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(es.eigenvalues()(i), expected[i], 1e-12);
}

TEST(RealSpace, SpectrumSymmetricAboutZero) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const auto p = random_ladder(rng, 1 + trial % 4, 2 + trial % 5, trial % 2 ? Boundary::periodic : Boundary::open);
    Eigen::SelfAdjointEigenSolver<RMatrix> es(real_space_hamiltonian(p));
    const auto& e = es.eigenvalues();
    const Eigen::Index n = e.size();
    for (Eigen::Index i = 0; i < n; ++i) EXPECT_NEAR(e(i), -e(n - 1 - i), 1e-10);
  }
}

TEST(RealSpace, ChiralBlocksDecouple) {
  std::mt19937_64 rng(8);
  const auto p = random_ladder(rng, 3, 4);
  const RMatrix h = real_space_hamiltonian(p);
  const RVector g = real_space_chirality(p);
  EXPECT_LT((g.asDiagonal() * h * g.asDiagonal() + h).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(RealSpace, PeriodicSpectrumIsUnionOfBlochSpectra) {
  std::mt19937_64 rng(13);
  for (int M = 1; M <= 3; ++M) {
    const int L = 5;
    const auto p = random_ladder(rng, M, L, Boundary::periodic);
    Eigen::SelfAdjointEigenSolver<RMatrix> es(real_space_hamiltonian(p));
    std::vector<double> bloch;
    for (int n = 0; n < L; ++n) {
      Eigen::SelfAdjointEigenSolver<CMatrix> bk(bloch_hamiltonian(p, 2.0 * kPi * n / L));
      for (Eigen::Index i = 0; i < bk.eigenvalues().size(); ++i) bloch.push_back(bk.eigenvalues()(i));
    }
    std::sort(bloch.begin(), bloch.end());
    ASSERT_EQ(bloch.size(), static_cast<std::size_t>(es.eigenvalues().size()));
    for (std::size_t i = 0; i < bloch.size(); ++i) EXPECT_NEAR(es.eigenvalues()(static_cast<Eigen::Index>(i)), bloch[i], 1e-10);
  }
}

TEST(RealSpace, OpenBoundaryOmitsWrapBond) {
  const auto p = LadderParams::uniform(1, 3, 0.2, 0.0);
  const RMatrix h = real_space_hamiltonian(p);
  const auto a0 = static_cast<Eigen::Index>(mode_index(p, Sublattice::a, 0, 0).value);
  const auto bL = static_cast<Eigen::Index>(mode_index(p, Sublattice::b, 0, 2).value);
  EXPECT_EQ(h(a0, bL), 0.0);
  auto q = p;
  q.boundary = Boundary::periodic;
  EXPECT_DOUBLE_EQ(real_space_hamiltonian(q)(a0, bL), 1.2);
}

TEST(RealSpace, NoCouplingBetweenFirstAndLastLeg) {
  const auto p = LadderParams::uniform(3, 2, 0.1, 0.5);
  const RMatrix h = real_space_hamiltonian(p);
  for (int j = 0; j < 2; ++j) {
    const auto i0 = static_cast<Eigen::Index>(mode_index(p, Sublattice::a, 0, j).value);
    const auto i2 = static_cast<Eigen::Index>(mode_index(p, Sublattice::a, 2, j).value);
    EXPECT_EQ(h(i0, i2), 0.0);
  }
}

TEST(Indexing, RoundTripAndBijection) {
  const auto p = LadderParams::uniform(3, 4, 0.1, 0.2);
  std::vector<bool> seen(p.n_modes(), false);
  for (Sublattice s : {Sublattice::a, Sublattice::b})
    for (int leg = 0; leg < 3; ++leg)
      for (int cell = 0; cell < 4; ++cell) {
        const ModeIndex m = mode_index(p, s, leg, cell);
        ASSERT_LT(m.value, p.n_modes());
        EXPECT_FALSE(seen[m.value]);
        seen[m.value] = true;
        EXPECT_EQ(site_label(p, m), (SiteLabel{s, leg, cell}));
      }
  EXPECT_THROW(mode_index(p, Sublattice::a, 3, 0), InvalidParameters);
  EXPECT_THROW(mode_index(p, Sublattice::b, 0, 4), InvalidParameters);
}

TEST(Indexing, ChiralOrderingOfBlochBasis) {
  // odd M=3: (a1, b2, a3 | b1, a2, b3); even M=2: (a1, b2 | b1, a2)
  EXPECT_EQ(bloch_index(3, Sublattice::a, 0), 0u);
  EXPECT_EQ(bloch_index(3, Sublattice::b, 1), 1u);
  EXPECT_EQ(bloch_index(3, Sublattice::a, 2), 2u);
  EXPECT_EQ(bloch_index(3, Sublattice::b, 0), 3u);
  EXPECT_EQ(bloch_index(3, Sublattice::a, 1), 4u);
  EXPECT_EQ(bloch_index(3, Sublattice::b, 2), 5u);
  EXPECT_EQ(bloch_index(2, Sublattice::b, 1), 1u);
  EXPECT_EQ(bloch_index(2, Sublattice::a, 1), 3u);
}

TEST(Params, Validation) {
  LadderParams p = LadderParams::uniform(3, 2, 0.1, 0.2);
  p.deltas.pop_back();
  EXPECT_THROW(p.validate(), InvalidParameters);
  EXPECT_THROW(real_space_hamiltonian(p), InvalidParameters);
  LadderParams q = LadderParams::uniform(2, 2, 1.2, 0.2);
  EXPECT_NO_THROW(q.validate());
  EXPECT_TRUE(q.has_extreme_dimerization());
}

TEST(Chiral, StandardUnitary) {
  for (int M = 1; M <= 4; ++M) {
    const auto p = LadderParams::uniform(M, 1, 0.3, 0.2);
    const CMatrix U = chiral_unitary(p, SymmetryKind::S);
    for (int i = 0; i < 2 * M; ++i) EXPECT_EQ(U(i, i), cplx(i < M ? 1.0 : -1.0, 0.0));
    EXPECT_LT(max_abs(U - CMatrix(U.diagonal().asDiagonal())), 1e-15);
  }
}

TEST(Chiral, S2MatrixIsAntidiagonal) {
  const auto p = LadderParams::uniform(2, 1, 0.4, 0.3);
  const CMatrix U = chiral_unitary(p, SymmetryKind::S2);
  CMatrix expected = CMatrix::Zero(4, 4);
  expected(0, 3) = I_unit;
  expected(1, 2) = I_unit;
  expected(2, 1) = -I_unit;
  expected(3, 0) = -I_unit;
  EXPECT_LT(max_abs(U - expected), 1e-15);
}

TEST(Chiral, AnticommutesWithBlochHamiltonian) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-0.95, 0.95);
  for (int trial = 0; trial < 20; ++trial) {
    LadderParams p = random_ladder(rng, 1 + trial % 4, 1);
    std::vector<SymmetryKind> kinds{SymmetryKind::S};
    if (p.legs == 2) {
      p.deltas[1] = p.deltas[0];
      kinds.push_back(SymmetryKind::S2);
    }
    if (p.legs == 3) {
      p.deltas[2] = p.deltas[0];
      kinds.push_back(SymmetryKind::S3);
    }
    for (auto kind : kinds) {
      const CMatrix U = chiral_unitary(p, kind);
      const auto n = U.rows();
      EXPECT_LT(max_abs(U * U.adjoint() - CMatrix::Identity(n, n)), 1e-14);
      EXPECT_NEAR(std::abs(U.trace()), 0.0, 1e-14);
      for (double k : {0.0, 0.5, 1.7, kPi, 5.0}) {
        const CMatrix H = bloch_hamiltonian(p, k);
        EXPECT_LT(max_abs(U * H * U.adjoint() + H), 1e-13) << to_string(kind) << " k=" << k;
      }
    }
  }
}

TEST(Chiral, InvalidSymmetryIsRejected) {
  LadderParams p{3, 1, 1.0, {0.2, 0.1, 0.5}, 0.3, Boundary::open};
  EXPECT_THROW(chiral_unitary(p, SymmetryKind::S3), InvalidSymmetry);
  EXPECT_THROW(chiral_unitary(p, SymmetryKind::S2), InvalidSymmetry);
  LadderParams q{2, 1, 1.0, {0.2, 0.3}, 0.3, Boundary::open};
  EXPECT_THROW(chiral_unitary(q, SymmetryKind::S2), InvalidSymmetry);
  EXPECT_EQ(symmetry_from_string("S3"), SymmetryKind::S3);
  EXPECT_THROW(symmetry_from_string("S4"), InvalidParameters);
}
