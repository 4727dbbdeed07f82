#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oscgraph/dynamics.hpp"
#include "test_support.hpp"

using namespace oscgraph;
using oscgraph::testing::integrate_plane;
using oscgraph::testing::kSeed;
using std::numbers::sqrt2;

TEST(KineticMatrix, Entries) {
  const RMatrix K = cm_kinetic_matrix(6);
  EXPECT_NEAR(K(0, 0), 1.0 / (2 * sqrt2), 1e-15);
  EXPECT_NEAR(K(0, 0), 0.353553, 1e-6);
  EXPECT_NEAR(K(2, 0), -0.5, 1e-15);
  EXPECT_EQ(K, K.transpose());
}

TEST(Propagator, IdentityAtZero) {
  const PropagatorMatrix p = propagator_matrix(0.0, {5, 4});
  EXPECT_LT((p.U.entries - CMatrix::Identity(20, 20)).norm(), 1e-14);
}

TEST(Propagator, GroupInverseAndSemigroup) {
  const ModeDims dims{12, 6};
  // Exact in any truncation, so no spreading guard.
  const auto any = PropagatorLimits::unrestricted();
  const CMatrix a = propagator_matrix(1.3, dims, any).U.entries;
  const CMatrix b = propagator_matrix(-1.3, dims, any).U.entries;
  EXPECT_LT((a * b - CMatrix::Identity(72, 72)).norm(), 1e-10);
  const CMatrix s = propagator_matrix(0.4, dims, any).U.entries;
  const CMatrix t = propagator_matrix(0.9, dims, any).U.entries;
  const CMatrix st = propagator_matrix(1.3, dims, any).U.entries;
  EXPECT_LT((s * t - st).norm(), 1e-10);
}

TEST(Propagator, UnitaryProperty) {
  std::mt19937_64 rng(kSeed);
  std::uniform_real_distribution<double> dt(-4.0, 4.0);
  const ModeDims dims{64, 4};
  for (int i = 0; i < 5; ++i) {
    const double t = dt(rng);
    const CMatrix U = propagator_matrix(t, dims, PropagatorLimits::unrestricted()).U.entries;
    EXPECT_LT((U.adjoint() * U - CMatrix::Identity(dims.total(), dims.total())).norm(), 1e-10) << t;
  }
}

TEST(Propagator, EnergyConserved) {
  const ModeDims dims{24, 14};
  const RMatrix H = two_mode_hamiltonian(dims);
  const CVector psi = two_mode_product_state(Complex(0.4, 0.1), Complex(-0.5, 0.7), dims).flatten();
  const double e0 = psi.dot(H.cast<Complex>() * psi).real();
  for (double t : {0.3, 1.0, 2.5}) {
    const CVector phi = propagator_matrix(t, dims, PropagatorLimits::unrestricted()).U.entries * psi;
    EXPECT_NEAR(phi.dot(H.cast<Complex>() * phi).real(), e0, 1e-8);
  }
}

TEST(Propagator, ApplyMatchesMatrixProduct) {
  const ModeDims dims{10, 5};
  const PropagatorMatrix p = propagator_matrix(0.8, dims, PropagatorLimits::unrestricted());
  const TwoModeState s = two_mode_product_state(0.3, Complex(0, 0.4), dims, 1e-3);
  const TwoModeState out = apply(p, s);
  EXPECT_LT((out.flatten() - p.U.entries * s.flatten()).norm(), 1e-13);
}

TEST(Propagator, LimitsEnforced) {
  EXPECT_THROW(propagator_matrix(4.5, {64, 4}), std::invalid_argument);
  // The evolved CM vacuum does not fit 4 levels at t = 2.
  EXPECT_THROW(propagator_matrix(2.0, {4, 4}), std::invalid_argument);
  EXPECT_NO_THROW(propagator_matrix(2.0, {4, 4}, PropagatorLimits::unrestricted()));
}

TEST(Propagator, SpreadingTailAgreesWithTruncatedEvolution) {
  // Weight the exact evolved vacuum leaves beyond d_cm, against the mass
  // a much larger truncation places there.
  const int d = 20;
  const double t = 1.2;
  const CMatrix big = cm_propagator(t, 160);
  const double outside = big.col(0).tail(160 - d).squaredNorm();
  EXPECT_NEAR(cm_spreading_tail(t, d), outside, 1e-12);
}

TEST(EvolvedGaussian, Fields) {
  const EvolvedGaussian g0 = evolve_product_state(0.5, Complex(0.2, 0.3), 0.0);
  EXPECT_EQ(g0.width, Complex(1.0));
  EXPECT_EQ(g0.beta_rotated, Complex(0.2, 0.3));
  EXPECT_EQ(g0.phase, Complex(1.0));
  const EvolvedGaussian gp = evolve_product_state(0.5, Complex(0.2, 0.3), std::numbers::pi * sqrt2);
  EXPECT_NEAR(std::abs(gp.beta_rotated - Complex(0.2, 0.3)), 0.0, 1e-14);
  std::mt19937_64 rng(kSeed);
  std::uniform_real_distribution<double> dt(-4, 4);
  for (int i = 0; i < 20; ++i) {
    const EvolvedGaussian g = evolve_product_state(0.1, Complex(1.1, -0.7), dt(rng));
    EXPECT_NEAR(std::abs(g.beta_rotated), std::abs(Complex(1.1, -0.7)), 1e-15);
    EXPECT_EQ(g.width.real(), 1.0);
    EXPECT_NEAR(std::abs(g.phase), 1.0, 1e-15);
  }
}

TEST(EvolvedGaussian, ReducesToProductStateAtZero) {
  const EvolvedGaussian g = evolve_product_state(Complex(0.5, 0.1), Complex(0, 0.8), 0.0);
  for (double x : {-1.0, 0.3}) {
    for (double y : {0.0, 0.9}) {
      EXPECT_NEAR(std::abs(evolved_state_position(g, x, y) - product_state_position(Complex(0.5, 0.1), Complex(0, 0.8), x, y)),
                  0.0, 1e-14);
    }
  }
}

TEST(EvolvedGaussian, MatchesKernelReference) {
  // Free-particle kernel quadrature in numpy at (x, y) = (0.4, -0.9).
  const EvolvedGaussian g = evolve_product_state(Complex(0.5, 0.3), Complex(0, 0.8), 0.7);
  const Complex v = evolved_state_position(g, 0.4, -0.9);
  EXPECT_NEAR(v.real(), 0.290193475258953, 1e-12);
  EXPECT_NEAR(v.imag(), -0.095799596683677671, 1e-12);
}

TEST(EvolvedGaussian, StaysNormalized) {
  const EvolvedGaussian g = evolve_product_state(0.5, Complex(0, 0.8), 0.7);
  const double n = integrate_plane([&](double x, double y) { return std::norm(evolved_state_position(g, x, y)); },
                                   14.0, 16, 2.0);
  EXPECT_NEAR(n, 1.0, 1e-8);
}

TEST(EvolvedGaussian, MatchesMatrixPropagation) {
  const ModeDims dims{64, 16};
  const Complex a = 0.5, b(0, 0.8);
  const double t = 0.5;
  const TwoModeState s = apply(propagator_matrix(t, dims), two_mode_product_state(a, b, dims));
  const EvolvedGaussian g = evolve_product_state(a, b, t);
  double sup = 0.0;
  for (double x = -6.0; x <= 6.0; x += 0.5) {
    for (double y = -6.0; y <= 6.0; y += 0.5) {
      sup = std::max(sup, std::abs(state_position_eval(s, x, y) - evolved_state_position(g, x, y)));
    }
  }
  EXPECT_LE(sup, 1e-5);
}

TEST(EvolvedGaussian, WidthOnlyRescalingDisagreesForNonzeroAlpha) {
  // The CM factor xi_alpha(u / sqrt w) / sqrt w is right only at alpha = 0.
  const double t = 0.7 / sqrt2;
  const Complex w(1.0, sqrt2 * t);
  const double x = 0.4, y = -0.9;
  const double s = std::pow(2.0, 0.25);
  const double u = (x + y) / s, v = (x - y) / s;
  const EvolvedGaussian g = evolve_product_state(Complex(0.5, 0.3), 0.0, t);
  const Complex rel = g.phase * coherent_position(g.beta_rotated, v);
  auto naive = [&](Complex alpha) {
    const Complex z = u / std::sqrt(w);
    const Complex xi = std::pow(std::numbers::pi, -0.25) * std::exp(-std::norm(alpha) / 2.0) *
                       std::exp(-(z * z - 2.0 * sqrt2 * alpha * z + alpha * alpha) / 2.0);
    return s * xi / std::sqrt(w) * rel;
  };
  const EvolvedGaussian g_vac = evolve_product_state(0.0, 0.0, t);
  EXPECT_NEAR(std::abs(naive(0.0) - evolved_state_position(g_vac, x, y)), 0.0, 1e-13);
  EXPECT_GT(std::abs(naive(Complex(0.5, 0.3)) - evolved_state_position(g, x, y)), 1e-2);
}

TEST(BasisClosedForm, ReducesToBasisAtZero) {
  for (int l = 0; l < 3; ++l) {
    for (int m = 0; m < 3; ++m) {
      EXPECT_NEAR(std::abs(evolve_basis_closed_form(l, m, 0.0, 0.3, -0.8) - basis_wavefunction(l, m, 0.3, -0.8)),
                  0.0, 1e-14);
    }
  }
}

TEST(BasisClosedForm, VacuumPeakDecays) {
  for (double t : {0.5, 1.0, 2.0}) {
    const double w = std::abs(Complex(1.0, sqrt2 * t));
    EXPECT_NEAR(std::abs(evolve_basis_closed_form(0, 0, t, 0.0, 0.0)),
                basis_wavefunction(0, 0, 0.0, 0.0) / std::sqrt(w), 1e-14);
  }
}

TEST(BasisClosedForm, OverlapMatchesMomentumReference) {
  // <psi_{1,2}|U_t psi_{1,0}> at t = 0.6 from a momentum-space integral in numpy.
  const Complex ref(0.25283844200647759, -0.07928455434708552);
  const double t = 0.6;
  const Complex overlap = integrate_plane([&](double x, double y) {
    return basis_wavefunction(1, 2, x, y) * evolve_basis_closed_form(1, 0, t, x, y);
  });
  EXPECT_NEAR(std::abs(overlap - ref), 0.0, 1e-10);
  const ModeDims dims{64, 4};
  const Complex entry = propagator_matrix(t, dims).U.entries(dims.index(2, 1), dims.index(0, 1));
  EXPECT_NEAR(std::abs(entry - ref), 0.0, 1e-5);
}

TEST(FresnelHermite, MatchesIndependentQuadrature) {
  struct Case {
    int n;
    double t, x, re, im;
  };
  // Dense composite Gauss-Legendre in numpy (tests/oracles/oracles.py).
  const Case cases[] = {{0, 0.5, 1.0, 1.2204907225032382, 0.17535477566865443},
                        {4, 1.0, 0.3, -0.49076819358884205, 0.8750789645160868},
                        {1, 0.5, 1.0, 0.98701181724606024, -0.73902271526855745},
                        {5, 0.3, 1.7, 0.56784087536095773, -0.60388467856187156},
                        {10, 2.0, 0.5, -0.6574950809502107, 0.42250579737541261}};
  for (const Case& c : cases) {
    const Complex ref(c.re, c.im);
    EXPECT_NEAR(std::abs(fresnel_hermite_rhs(c.n, c.t, c.x) - ref), 0.0, 1e-11) << c.n;
    EXPECT_NEAR(std::abs(fresnel_hermite_lhs(c.n, c.t, c.x).value - ref), 0.0, 1e-9) << c.n;
  }
}

TEST(FresnelHermite, CalibrationAndStatedCases) {
  EXPECT_LE(std::abs(fresnel_hermite_rhs(0, 0.5, 1.0) - fresnel_hermite_lhs(0, 0.5, 1.0).value), 1e-8);
  EXPECT_LE(std::abs(fresnel_hermite_rhs(4, 1.0, 0.3) - fresnel_hermite_lhs(4, 1.0, 0.3).value), 1e-7);
  EXPECT_EQ(std::abs(fresnel_hermite_rhs(1, 0.7, 0.0)), 0.0);
}

TEST(FresnelHermite, ComplexArgumentHermiteDisagreesBeyondGroundState) {
  // Using H_n(x / sqrt(1 + 2ti)) in place of c^n H_n(x / |1 + 2ti|) agrees at n = 0 only.
  auto naive = [](int n, double t, double x) {
    const Complex w(1.0, 2.0 * t);
    const Complex pre = std::sqrt(Complex(0.0, 4.0 * std::numbers::pi * t)) /
                        (std::pow(std::numbers::pi, 0.25) * std::sqrt(w));
    return pre * std::exp(Complex(0.0, -x * x / (4 * t))) * normalized_hermite(n, x / std::sqrt(w)) *
           std::exp(-x * x / (2.0 * w));
  };
  EXPECT_NEAR(std::abs(naive(0, 0.5, 1.0) - fresnel_hermite_rhs(0, 0.5, 1.0)), 0.0, 1e-14);
  EXPECT_GT(std::abs(naive(1, 0.5, 1.0) - fresnel_hermite_lhs(1, 0.5, 1.0).value), 0.5);
}

TEST(FresnelHermite, RejectsZeroTime) {
  EXPECT_THROW(fresnel_hermite_rhs(0, 0.0, 1.0), std::invalid_argument);
}

TEST(FresnelHermite, WindowTailIsNegligible) {
  // Beyond L the Gaussian envelope of f_n is below 1e-16 of its peak scale.
  for (int n : {0, 5, 10}) {
    const double L = fresnel_window(n);
    EXPECT_LT(std::abs(hermite_function(n, L)), 1e-16);
  }
}

TEST(FresnelHermite, ConvergenceFailureReportsError) {
  FresnelOptions opts;
  opts.rel_tol = 1e-30;
  opts.abs_tol = 0.0;
  opts.max_refinements = 1;
  EXPECT_THROW(fresnel_hermite_lhs(3, 0.4, 1.0, opts), ConvergenceError);
}

TEST(KernelRoute, AgreesWithClosedFormForCoherentInput) {
  const ModeDims dims{24, 12};
  const TwoModeState s = two_mode_product_state(0.5, Complex(0, 0.8), dims);
  const EvolvedGaussian g = evolve_product_state(0.5, Complex(0, 0.8), 0.5);
  for (auto [x, y] : {std::pair{0.0, 0.0}, std::pair{0.6, -0.2}}) {
    EXPECT_NEAR(std::abs(propagate_via_kernel(s, 0.5, x, y) - evolved_state_position(g, x, y)), 0.0, 1e-6);
  }
}

TEST(KernelRoute, AgreesWithMatrixForBasisInput) {
  const ModeDims dims{24, 4};
  TwoModeState s{CMatrix::Zero(24, 4), dims, 0.0};
  s.coefficients(1, 0) = 1.0;  // CM level 1, relative level 0
  const TwoModeState evolved = apply(propagator_matrix(0.5, dims), s);
  for (auto [x, y] : {std::pair{0.2, 0.4}, std::pair{-0.7, 0.1}}) {
    EXPECT_NEAR(std::abs(propagate_via_kernel(s, 0.5, x, y) - state_position_eval(evolved, x, y)), 0.0, 1e-5);
  }
}

TEST(KernelRoute, SmallTimeAgreesWithMatrix) {
  const ModeDims dims{8, 4};
  const double t = 0.02;
  const TwoModeState s = two_mode_product_state(0.3, 0.2, dims, 1e-4);
  const TwoModeState evolved = apply(propagator_matrix(t, dims), s);
  for (auto [x, y] : {std::pair{0.1, 0.3}, std::pair{-0.5, 0.2}}) {
    EXPECT_NEAR(std::abs(propagate_via_kernel(s, t, x, y) - state_position_eval(evolved, x, y)), 0.0, 1e-6);
  }
}

TEST(Eigencheck, SpectrumOfRelativeOscillator) {
  const auto ev = eigencheck(16);
  ASSERT_EQ(ev.size(), 14u);
  EXPECT_NEAR(ev[0], 0.7071068, 1e-7);
  EXPECT_NEAR(ev[0], sqrt2 / 2.0, 1e-10);
  EXPECT_NEAR(ev[1] - ev[0], sqrt2, 1e-10);
  EXPECT_NEAR(ev[3], 7.0 * sqrt2 / 2.0, 1e-10);
  for (std::size_t n = 0; n <= 12; ++n) EXPECT_NEAR(ev[n], rel_eigenvalue(static_cast<int>(n)), 1e-10);
}

TEST(Eigencheck, SmallTruncations) {
  EXPECT_TRUE(eigencheck(2).empty());
  EXPECT_THROW(eigencheck(1), std::invalid_argument);
}
