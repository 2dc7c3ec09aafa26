#include "support/helpers.hpp"

#include <gtest/gtest.h>

using namespace sshent;
using namespace testing_support;

TEST(Winding, SingleChainTopological) {
  const auto p = LadderParams::uniform(1, 1, 0.5, 0.0);
  EXPECT_EQ(winding_green(p).value, 1);
  EXPECT_EQ(winding_projector(p).value, 1);
}

TEST(Winding, TwoLegDimerizedIsTrivial) {
  const auto p = LadderParams::uniform(2, 1, 0.5, 0.0);
  EXPECT_EQ(winding_green(p).value, 0);
  EXPECT_EQ(winding_projector(p).value, 0);
}

TEST(Winding, NegativeDimerizationThreeLegs) {
  const auto p = LadderParams::uniform(3, 1, -0.5, 0.2);
  EXPECT_EQ(winding_green(p).value, 0);
  EXPECT_EQ(winding_projector(p).value, 0);
}

TEST(Winding, GaplessPointsThrow) {
  for (int M = 1; M <= 3; ++M) {
    const auto p = LadderParams::uniform(M, 1, 0.0, 0.0);
    EXPECT_THROW(winding_green(p), GaplessSpectrum);
    EXPECT_THROW(winding_projector(p), GaplessSpectrum);
  }
}

TEST(Winding, OffGridGapClosingIsDetected) {
  // One transverse channel has |x(k)| = 2 z cos(pi/4) between grid points.
  const auto p = LadderParams::uniform(3, 1, 0.5, 0.9);
  EXPECT_GT(band_gap(p), 1e-4);
  EXPECT_LT(refined_gap(p), 1e-10);
  EXPECT_THROW(winding_green(p), GaplessSpectrum);
  EXPECT_THROW(winding_projector(p, SymmetryKind::S3), GaplessSpectrum);
}

TEST(Winding, ProjectorConvergesOnSingleChain) {
  const auto p = LadderParams::uniform(1, 1, 0.5, 0.0);
  const auto r512 = winding_projector(p, SymmetryKind::S, 512);
  const auto r1024 = winding_projector(p, SymmetryKind::S, 1024);
  EXPECT_NEAR(r512.raw, 1.0, 1e-6);
  EXPECT_LT(r512.residual, 1e-6);
  EXPECT_NEAR(r512.raw, r1024.raw, 1e-6);
}

TEST(Winding, ThreeLegProjectorBlockIsDiagonalPhase) {
  // Uniform topological regime: q(k) is diagonal with unit-modulus entries.
  const auto p = LadderParams::uniform(3, 1, 0.8, 0.2);
  const CMatrix W = chiral_frame(chiral_unitary(p, SymmetryKind::S));
  for (double k : {0.4, 2.0, 3.5}) {
    const CMatrix q = flattened_block(bloch_hamiltonian(p, k), W);
    // q is unitary
    EXPECT_LT(max_abs(q * q.adjoint() - CMatrix::Identity(3, 3)), 1e-12);
  }
  EXPECT_EQ(winding_projector(p).value, 1);
}

TEST(Winding, SignConvention) {
  EXPECT_EQ(winding_green(LadderParams::uniform(1, 1, 0.3, 0.0)).value, 1);
  EXPECT_EQ(winding_green(LadderParams::uniform(1, 1, -0.3, 0.0)).value, 0);
}

TEST(Winding, InvalidSymmetryPropagates) {
  LadderParams p{3, 1, 1.0, {0.5, 0.2, 0.6}, 0.3, Boundary::open};
  EXPECT_THROW(winding_green(p, SymmetryKind::S3), InvalidSymmetry);
  EXPECT_THROW(winding_projector(p, SymmetryKind::S3), InvalidSymmetry);
}

TEST(Winding, GridTooSmall) {
  EXPECT_THROW(winding_green(LadderParams::uniform(1, 1, 0.5, 0.0), SymmetryKind::S, 2), InvalidParameters);
}

TEST(Analytic, ClosedForm) {
  EXPECT_EQ(winding_analytic(LadderParams::uniform(3, 1, 0.5, 0.2)), std::optional<int>(1));
  EXPECT_EQ(winding_analytic(LadderParams::uniform(4, 1, 0.5, 0.2)), std::optional<int>(0));
  EXPECT_EQ(winding_analytic(LadderParams::uniform(3, 1, -0.5, 0.2)), std::optional<int>(0));
  EXPECT_FALSE(winding_analytic(LadderParams::uniform(3, 1, 0.1, 0.9)).has_value());
  LadderParams p{3, 1, 1.0, {0.5, 0.4, 0.5}, 0.0, Boundary::open};
  EXPECT_FALSE(winding_analytic(p).has_value());
}

TEST(Analytic, NumericRoutesAgreeWithClosedForm) {
  for (int M = 1; M <= 4; ++M)
    for (double d : {-0.9, -0.6, -0.3, 0.3, 0.6, 0.9})
      for (double z : {-0.5, 0.0, 0.2, 0.6}) {
        const auto p = LadderParams::uniform(M, 1, d, z);
        const auto a = winding_analytic(p);
        if (!a) continue;
        EXPECT_EQ(winding_green(p).value, *a) << p;
        EXPECT_EQ(winding_projector(p).value, *a) << p;
      }
}

TEST(BandGap, Examples) {
  EXPECT_NEAR(band_gap(LadderParams::uniform(1, 1, 0.5, 0.0)), 1.0, 1e-12);
  EXPECT_NEAR(band_gap(LadderParams::uniform(1, 1, 0.0, 0.0)), 0.0, 1e-12);
  EXPECT_NEAR(band_gap(LadderParams::uniform(3, 1, 0.5, 0.1)), 1.0 - 0.2 * std::cos(kPi / 4), 1e-10);
}

TEST(Equivalence, RandomGappedDraws) {
  std::mt19937_64 rng(2024);
  int checked = 0;
  while (checked < 100) {
    const auto p = random_ladder(rng, 1 + checked % 3, 1);
    if (refined_gap(p) < 0.05) continue;
    const auto g = winding_green(p);
    const auto q = winding_projector(p);
    EXPECT_EQ(g.value, q.value) << p;
    ++checked;
  }
}

TEST(Equivalence, GridRefinementStable) {
  std::mt19937_64 rng(99);
  int checked = 0;
  while (checked < 20) {
    const auto p = random_ladder(rng, 1 + checked % 3, 1);
    if (refined_gap(p) < 0.05) continue;
    const auto a = winding_green(p, SymmetryKind::S, 256);
    const auto b = winding_green(p, SymmetryKind::S, 512);
    EXPECT_EQ(a.value, b.value);
    EXPECT_LE(b.residual, std::max(a.residual, 1e-9));
    ++checked;
  }
}

TEST(ExtraSymmetry, TwoLegInvariantVanishes) {
  for (double d : {-0.8, -0.3, 0.3, 0.8})
    for (double z : {-0.6, 0.2, 0.6}) {
      const auto p = LadderParams::uniform(2, 1, d, z);
      try {
        EXPECT_EQ(winding_green(p, SymmetryKind::S2).value, 0);
        EXPECT_EQ(winding_projector(p, SymmetryKind::S2).value, 0);
      } catch (const GaplessSpectrum&) {
      }
    }
}

TEST(ExtraSymmetry, ThreeLegAnomalyExists) {
  // Appears with delta1 = delta3 > 0 and delta2 > 0 at z = 0.9.
  LadderParams p{3, 1, 1.0, {0.9, 0.9, 0.9}, 0.9, Boundary::periodic};
  p.deltas = {0.5, 0.7, 0.5};
  EXPECT_EQ(winding_green(p, SymmetryKind::S).value, 0);
  EXPECT_EQ(winding_green(p, SymmetryKind::S3).value, -2);
  EXPECT_EQ(winding_projector(p, SymmetryKind::S3).value, -2);
}

TEST(PhaseGrid, SingleCellEqualsDirectCall) {
  const auto base = LadderParams::uniform(2, 1, 0.0, 0.3);
  const PhaseGrid g = phase_grid(base, Axis{"delta1", 0.4, 0.4, 1}, Axis{"delta2", -0.6, -0.6, 1});
  ASSERT_EQ(g.cells.size(), 1u);
  LadderParams p = base;
  p.deltas = {0.4, -0.6};
  EXPECT_EQ(g.at(0, 0), std::optional<int>(winding_green(p).value));
}

TEST(PhaseGrid, TwoLegZeroCouplingDiagonalIsTrivial) {
  const auto base = LadderParams::uniform(2, 1, 0.0, 0.0);
  const PhaseGrid g = phase_grid(base, Axis{"delta1", -0.95, 0.95, 21}, Axis{"delta2", -0.95, 0.95, 21}, SymmetryKind::S, 128, 2);
  for (std::size_t i = 0; i < g.rows(); ++i) {
    if (i == 10) {
      EXPECT_FALSE(g.at(i, i).has_value());  // delta = 0 is gapless
      continue;
    }
    ASSERT_TRUE(g.at(i, i).has_value());
    EXPECT_EQ(*g.at(i, i), 0);
  }
}

TEST(PhaseGrid, ThreeLegsContainTwoEdgeStateRegion) {
  const LadderParams base{3, 1, 1.0, {0.0, -0.75, 0.0}, 0.9, Boundary::periodic};
  const PhaseGrid g = phase_grid(base, Axis{"delta1", -0.95, 0.95, 11}, Axis{"delta3", -0.95, 0.95, 11});
  EXPECT_TRUE(std::any_of(g.cells.begin(), g.cells.end(), [](const auto& c) { return c && *c == 2; }));
}

TEST(PhaseGrid, WorkerCountDoesNotChangeResult) {
  const LadderParams base{3, 1, 1.0, {0.0, -0.25, 0.0}, 0.9, Boundary::periodic};
  const Axis a{"delta1", -0.9, 0.9, 7}, b{"delta3", -0.9, 0.9, 7};
  const auto g1 = phase_grid(base, a, b, SymmetryKind::S, 128, 1);
  const auto g3 = phase_grid(base, a, b, SymmetryKind::S, 128, 3);
  EXPECT_EQ(g1.cells, g3.cells);
}

TEST(PhaseGrid, TiedAxisAndUnknownAxis) {
  const LadderParams base{3, 1, 1.0, {0.0, 0.0, 0.0}, 0.9, Boundary::periodic};
  const auto g = phase_grid(base, Axis{"delta1+delta3", 0.5, 0.5, 1}, Axis{"delta2", 0.7, 0.7, 1}, SymmetryKind::S3);
  EXPECT_EQ(g.at(0, 0), std::optional<int>(-2));
  EXPECT_THROW(phase_grid(base, Axis{"delta4", 0, 1, 2}, Axis{"z", 0, 1, 2}), InvalidParameters);
  EXPECT_THROW(phase_grid(base, Axis{"detla1", 0, 1, 2}, Axis{"z", 0, 1, 2}), InvalidParameters);
}

TEST(Axis, Values) {
  EXPECT_EQ(Axis({"z", 0.3, 0.9, 1}).values(), std::vector<double>{0.3});
  const auto v = Axis{"z", -1.0, 1.0, 5}.values();
  ASSERT_EQ(v.size(), 5u);
  EXPECT_DOUBLE_EQ(v[0], -1.0);
  EXPECT_DOUBLE_EQ(v[2], 0.0);
  EXPECT_DOUBLE_EQ(v[4], 1.0);
  EXPECT_THROW(Axis({"z", 0, 1, 0}).values(), InvalidParameters);
}

TEST(AnalyticOracle, BoundaryPointsAreExcluded) {
  // |z| cos(pi/3) = |delta| up to roundoff: gapless, so no closed form.
  const double d = -0.95 + 1.9 * 9 / 20;
  const double z = -0.95 + 1.9 * 12 / 20;
  const LadderParams p = LadderParams::uniform(2, 4, d, z);
  EXPECT_FALSE(winding_analytic(p).has_value());
  EXPECT_THROW(winding_green(p), GaplessSpectrum);
  EXPECT_EQ(winding_analytic(LadderParams::uniform(2, 4, d, 0.9 * z)), 0);
}
