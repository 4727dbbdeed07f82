#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oscgraph/graph.hpp"
#include "test_support.hpp"

using namespace oscgraph;
using oscgraph::testing::kSeed;
using oscgraph::testing::random_complex;

namespace {

GraphBasis grid_basis(const ModeDims& dims, int n = 5, double half = 1.5) {
  const auto betas = grid_betas(-half, half, n);
  const auto ops = projectors_for(betas, dims);
  return hs_orthonormalize(ops);
}

}  // namespace

TEST(QProjector, IsOrthogonalProjectionWithCmTrace) {
  const ModeDims dims{3, 10};
  std::mt19937_64 rng(kSeed);
  for (int i = 0; i < 10; ++i) {
    const TwoModeOperator Q = q_projector(random_complex(rng, 1.5), dims);
    EXPECT_LT(projection_defect(Q), 1e-13);
    EXPECT_NEAR(Q.entries.trace().real(), 3.0, 1e-13);
    EXPECT_NEAR(hs_inner(Q, Q).real(), 3.0, 1e-13);
  }
}

TEST(QProjector, TailBudgetIsOptional) {
  EXPECT_THROW(q_projector(2.5, {2, 6}, 1e-8), std::invalid_argument);
  EXPECT_NO_THROW(q_projector(2.5, {2, 6}));
}

TEST(Covariance, RotatesTheAmplitude) {
  EXPECT_LT(covariance_defect(1.5, 0.7, {4, 16}), 1e-10);
  std::mt19937_64 rng(kSeed + 1);
  std::uniform_real_distribution<double> dt(-5, 5);
  for (int i = 0; i < 10; ++i) {
    EXPECT_LT(covariance_defect(random_complex(rng, 1.2), dt(rng), {3, 8}), 1e-10);
  }
}

TEST(Covariance, WrongRotationSenseFails) {
  // The orbit rotates beta clockwise; the counter-rotated projector is far.
  const ModeDims dims{2, 12};
  const double t = 0.7;
  const Complex beta = 1.5;
  const PropagatorMatrix p = propagator_matrix(t, dims, PropagatorLimits::unrestricted());
  const CMatrix moved = p.U.entries * q_projector(beta, dims).entries * p.U.entries.adjoint();
  const Complex wrong = std::polar(1.0, std::numbers::sqrt2 * t) * beta;
  EXPECT_GT((moved - q_projector(wrong, dims).entries).norm(), 0.5);
}

TEST(GraphSpan, GridSpansFullRelativeAlgebra) {
  const ModeDims dims{2, 4};
  const GraphBasis b = grid_basis(dims);
  EXPECT_EQ(b.numerical_rank, 16);
  ASSERT_GT(b.singular_values.size(), 16u);
  EXPECT_GT(b.singular_values[15] / b.singular_values[16], 1e6);
  EXPECT_LT(identity_residual(b), 1e-8);
  for (std::size_t i = 0; i < b.ops.size(); ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      EXPECT_NEAR(std::abs(hs_inner(b.ops[i], b.ops[j])), i == j ? 1.0 : 0.0, 1e-10);
    }
  }
}

TEST(GraphSpan, RandomSpreadSamplesSaturate) {
  const ModeDims dims{2, 4};
  std::mt19937_64 rng(kSeed + 2);
  std::vector<Complex> betas;
  for (int i = 0; i < 40; ++i) betas.push_back(random_complex(rng, 1.8));
  const GraphBasis b = hs_orthonormalize(projectors_for(betas, dims));
  EXPECT_EQ(b.numerical_rank, 16);
  EXPECT_LT(subspace_residual(b, grid_basis(dims)), 1e-8);
}

TEST(GraphSpan, OrbitSamplesStayInTheSameSpan) {
  const ModeDims dims{2, 4};
  // Four radii: the diagonal block of |beta><beta| depends on |beta| only and
  // has d_rel = 4 entries, so fewer circles cannot reach rank 16.
  GraphSampleSpec spec{{0.3, 0.9, 1.4, 1.9}, {0.0, 0.37}, {0.1, 0.8, 1.7}, dims};
  const auto ops = sample_graph(spec);
  const GraphBasis orbit = hs_orthonormalize(ops);
  EXPECT_EQ(orbit.numerical_rank, 16);
  EXPECT_LT(subspace_residual(orbit, grid_basis(dims)), 1e-8);
  EXPECT_LT(identity_residual(orbit), 1e-8);
}

TEST(GraphSpan, RankCurveIsMonotoneAndSaturates) {
  const ModeDims dims{2, 3};
  const auto ops = projectors_for(grid_betas(-1.5, 1.5, 4), dims);
  const auto curve = rank_curve(ops);
  ASSERT_EQ(curve.size(), ops.size());
  for (std::size_t i = 1; i < curve.size(); ++i) EXPECT_GE(curve[i].second, curve[i - 1].second);
  EXPECT_EQ(curve.front().second, 1);
  EXPECT_EQ(curve.back().second, 9);
}

TEST(IdentityMembership, SingleProjectorResidual) {
  for (int d_rel : {3, 6}) {
    const ModeDims dims{2, d_rel};
    const std::vector<Complex> one{Complex(0.7, -0.2)};
    const GraphBasis b = hs_orthonormalize(projectors_for(one, dims));
    EXPECT_EQ(b.numerical_rank, 1);
    EXPECT_NEAR(identity_residual(b), std::sqrt(1.0 - 1.0 / d_rel), 1e-12);
  }
}

TEST(IdentityMembership, ProjectionResidualOfMemberVanishes) {
  const GraphBasis b = grid_basis({2, 4});
  const CMatrix A = q_projector(Complex(0.33, 0.91), {2, 4}).entries;
  EXPECT_LT(projection_residual(A, b), 1e-8);
}

TEST(SampleBetas, DeduplicatesRepeats) {
  // t = 0 and t = 2 pi / sqrt2 give the same beta.
  GraphSampleSpec spec{{0.5}, {0.0}, {0.0, 2.0 * std::numbers::pi / std::numbers::sqrt2}, {2, 4}};
  EXPECT_EQ(sample_betas(spec).size(), 1u);
  GraphSampleSpec zero{{0.0, 0.0}, {0.0, 1.0}, {0.0, 0.5}, {2, 4}};
  EXPECT_EQ(sample_betas(zero).size(), 1u);
}

TEST(SampleBetas, EmptySetThrows) {
  GraphSampleSpec spec{{}, {0.0}, {0.0}, {2, 4}};
  EXPECT_THROW(sample_betas(spec), std::invalid_argument);
  EXPECT_THROW(hs_orthonormalize(std::vector<TwoModeOperator>{}), std::invalid_argument);
}

TEST(HsOrthonormalize, RejectsBadTolerance) {
  const auto ops = projectors_for(grid_betas(-1, 1, 2), {2, 2});
  EXPECT_THROW(hs_orthonormalize(ops, 0.0), std::invalid_argument);
  EXPECT_THROW(hs_orthonormalize(ops, 1.0), std::invalid_argument);
}

TEST(Resolution, CoherentIntegralGivesIdentity) {
  const int d_rel = 8;
  const DiskRule rule = disk_rule(8.0, 96, 4 * d_rel);
  EXPECT_LT(coherent_resolution_check(d_rel, rule), 1e-8);
  const DiskRule scalar_rule = disk_rule(8.0, 96, 4);
  EXPECT_LT(coherent_resolution_deviation(1, scalar_rule), 1e-10);
}

TEST(Resolution, UnderResolvedAngleLeavesOffDiagonals) {
  const int d_rel = 8;
  const DiskRule coarse = disk_rule(8.0, 96, d_rel / 2);
  EXPECT_GT(coherent_resolution_deviation(d_rel, coarse), 1e-3);
  EXPECT_THROW(coherent_resolution_check(d_rel, coarse), std::invalid_argument);
}

TEST(Resolution, SmallRadiusRejected) {
  EXPECT_THROW(coherent_resolution_check(8, disk_rule(5.0, 96, 32)), std::invalid_argument);
  EXPECT_THROW(coherent_resolution_deviation(0, disk_rule(5.0, 16, 4)), std::invalid_argument);
}
