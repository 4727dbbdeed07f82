#pragma once

// Truncated non-commutative graph generated by orbits of the coherent
// projections Q_beta = I_cm (x) |beta><beta| under U_t.
//
// Q_beta uses the normalized truncated coherent vector, so Q = Q^dagger = Q^2
// holds to rounding in any truncation. Raw (unnormalized) vectors are used
// only for the resolution-of-identity integral, where they make that
// identity exact instead.

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "oscgraph/dynamics.hpp"
#include "oscgraph/quadrature.hpp"

namespace oscgraph {

/// Samples beta = r e^{i(-sqrt2 t + phi)} over radii x angles x times.
struct GraphSampleSpec {
  std::vector<double> radii;
  std::vector<double> angles;
  std::vector<double> times;
  ModeDims dims;
};

/// HS-orthonormal basis of a span of operators.
struct GraphBasis {
  std::vector<TwoModeOperator> ops;
  std::vector<double> singular_values;  // descending, all of them
  int numerical_rank = 0;
  double tol = 0.0;
};

inline constexpr double kDefaultRankTol = 1e-10;
inline constexpr double kBetaDedupTol = 1e-12;

TwoModeOperator q_projector(Complex beta, const ModeDims& dims,
                            std::optional<double> tail_budget = std::nullopt,
                            double alpha_max = kDefaultAlphaMax);

/// max(||Q^2 - Q||_F, ||Q - Q^dagger||_F).
double projection_defect(const TwoModeOperator& Q);

/// ||U_t Q_beta U_t^dagger - Q_{e^{-i sqrt2 t} beta}||_F.
double covariance_defect(Complex beta, double t, const ModeDims& dims);

/// Effective sample points of a spec, deduplicated within kBetaDedupTol in
/// first-seen order. Throws if the set is empty.
std::vector<Complex> sample_betas(const GraphSampleSpec& spec);

std::vector<TwoModeOperator> sample_graph(const GraphSampleSpec& spec);

/// Projectors for an explicit beta list.
std::vector<TwoModeOperator> projectors_for(std::span<const Complex> betas,
                                            const ModeDims& dims);

/// n x n square grid of beta values on [lo, hi]^2 (row-major in Im, Re).
std::vector<Complex> grid_betas(double lo, double hi, int n);

/// Thin SVD of the vectorized family; keeps directions with
/// sigma_k > tol * sigma_1. Deterministic in the input order.
GraphBasis hs_orthonormalize(std::span<const TwoModeOperator> ops,
                             double tol = kDefaultRankTol);

/// Numerical rank of every prefix of ops: (prefix length, rank).
std::vector<std::pair<int, int>> rank_curve(std::span<const TwoModeOperator> ops,
                                            double tol = kDefaultRankTol);

/// Relative Frobenius residual of projecting A onto span(basis).
double projection_residual(const CMatrix& A, const GraphBasis& basis);

/// ||I - P_span I||_F / ||I||_F.
double identity_residual(const GraphBasis& basis);

/// Largest projection residual of an element of `from` onto span(onto).
double subspace_residual(const GraphBasis& from, const GraphBasis& onto);

/// (1/pi) int_{|beta| <= R} |beta_raw><beta_raw| d^2 beta on a d_rel level
/// truncation, with no resolution checks.
CMatrix coherent_resolution_integral(int d_rel, const DiskRule& rule);

/// Frobenius deviation of the integral above from the identity.
double coherent_resolution_deviation(int d_rel, const DiskRule& rule);

/// Validated form: requires R >= sqrt(2 d_rel) + 4 and at least 4 d_rel
/// angular nodes.
double coherent_resolution_check(int d_rel, const DiskRule& rule);

}  // namespace oscgraph
