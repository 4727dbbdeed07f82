#pragma once

// The unitary group U_t = exp(-itH) for H = p1^2/2 + p2^2/2 + (q2 - q1)^2/2.
//
// In the CM/relative coordinates the Hamiltonian splits into a free CM part
// and a relative oscillator of frequency sqrt 2. Three interchangeable routes
// are provided:
//   * closed forms for Hermite basis functions and coherent products,
//   * the truncated matrix exponential exp(-itK) (x) diag(e^{-i sqrt2 t (n+1/2)}),
//   * a Fresnel-kernel quadrature route (slow, used as an oracle).
//
// Free spreading of the CM factor uses the complex width w = 1 + sqrt2 t i and
// the unimodular phase c = conj(w)/|w|: a Hermite function f_m(u) evolves into
// w^{-1/2} c^m pi^{-1/4} h_m(u/|w|) e^{-u^2/(2w)} with h_m = H_m/sqrt(2^m m!).

#include <memory>
#include <vector>

#include "oscgraph/fock.hpp"
#include "oscgraph/quadrature.hpp"

namespace oscgraph {

/// Closed-form record of U_t applied to a coherent product state.
struct EvolvedGaussian {
  Complex alpha;         // CM amplitude (unchanged)
  Complex beta_rotated;  // e^{-i sqrt2 t} beta
  Complex width;         // 1 + sqrt2 t i
  Complex phase;         // e^{-i t / sqrt2}
  double t = 0.0;
};

struct PropagatorLimits {
  double t_max = 4.0;
  /// Largest allowed weight of the exactly evolved CM vacuum beyond d_cm.
  double tail_budget = 1e-8;

  /// For identities that hold exactly in any truncation (covariance,
  /// code orthogonality): no time or spreading limit.
  static PropagatorLimits unrestricted() { return {1e300, 1.0}; }
};

struct PropagatorMatrix {
  TwoModeOperator U;
  double t = 0.0;
  ModeDims dims;
  CMatrix cm_factor;   // exp(-itK), d_cm x d_cm
  CVector rel_phases;  // e^{-i sqrt2 t (n + 1/2)}
};

/// -d^2/dx~^2 in the reference Hermite basis: (2N + 1 - a^2 - a^dagger^2)/(2 sqrt2).
RMatrix cm_kinetic_matrix(int d_cm);

/// exp(-itK) from a cached eigendecomposition of K.
CMatrix cm_propagator(double t, int d_cm);

/// Weight the exactly evolved CM vacuum places on levels >= d_cm. The evolved
/// vacuum is a squeezed vacuum with |mu|^2 = tau^2 / (4 + tau^2), tau = sqrt2 t.
double cm_spreading_tail(double t, int d_cm);

/// K (x) I + I (x) sqrt2 (N + 1/2).
RMatrix two_mode_hamiltonian(const ModeDims& dims);

PropagatorMatrix propagator_matrix(double t, const ModeDims& dims,
                                   const PropagatorLimits& limits = {});

/// U c, applied factor-wise: cm_factor * C * diag(rel_phases).
TwoModeState apply(const PropagatorMatrix& prop, const TwoModeState& state);

EvolvedGaussian evolve_product_state(Complex alpha, Complex beta, double t);

/// Unit-norm wavefunction of U_t applied to the coherent product state.
Complex evolved_state_position(const EvolvedGaussian& g, double x, double y);

/// U_t psi_{lm} at (x, y); l relative level, m CM level.
Complex evolve_basis_closed_form(int l, int m, double t, double x, double y);

/// Closed form of int e^{-ixy/2t} e^{iy^2/4t} f_n(y) dy with unit-norm f_n:
///   sqrt(4 pi t i) / (pi^{1/4} sqrt w) e^{-ix^2/4t} c^n h_n(x/|w|) e^{-x^2/(2w)},
/// w = 1 + 2ti, c = conj(w)/|w|, principal branches.
Complex fresnel_hermite_rhs(int n, double t, double x);

struct FresnelOptions {
  int n_base = 10;
  double rel_tol = 1e-9;
  double abs_tol = 1e-14;
  int max_refinements = 8;
  /// Half-width is sqrt(2(2n+1)) + tail_margin (in f_n's natural variable).
  double tail_margin = 12.0;
};

/// Truncation half-width for f_n under which its tail is negligible.
double fresnel_window(int n, double tail_margin = 12.0);

/// Quadrature value of the same integral with refinement to rel_tol.
/// Throws ConvergenceError when refinement does not settle.
AdaptiveResult<Complex> fresnel_hermite_lhs(int n, double t, double x,
                                            const FresnelOptions& opts = {});

/// U_t state at (x, y) via relative-mode expansion, a Fresnel integral for
/// each coefficient function, and resummation. Slow; for cross-checks.
Complex propagate_via_kernel(const TwoModeState& state, double t, double x,
                             double y, const FresnelOptions& opts = {});

/// Eigenvalues of (p^2 + q^2)/sqrt2 built from truncated ladder matrices,
/// restricted to the top-left (d_rel - 2) block, ascending.
std::vector<double> eigencheck(int d_rel);

}  // namespace oscgraph
