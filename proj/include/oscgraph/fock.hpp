#pragma once

// Truncated Fock spaces for the two-mode oscillator.
//
// Mode order is (center of mass) x (relative) everywhere: a two-mode
// coefficient c(m, n) has m the CM level and n the relative level, and the
// flattened index is m * d_rel + n, matching Eigen's row-major reading of a
// Kronecker product A_cm (x) B_rel.
//
// Coordinates: u = (x + y) / 2^{1/4} (CM), v = (x - y) / 2^{1/4} (relative).
// All stored states are unit norm in L^2(R^2, dx dy). The unit-norm basis
// function is psi_{lm}(x, y) = 2^{1/4} f_l(v) f_m(u); it is the closed-form
// product of Hermite functions rescaled by 2^{3/4} relative to the classical
// constant 1/(sqrt2 sqrt(pi 2^l l! 2^m m!)), which has norm 2^{-3/4}.

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>

#include "oscgraph/special_functions.hpp"

namespace oscgraph {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;
using RMatrix = Eigen::MatrixXd;

/// Default bound on coherent amplitudes.
inline constexpr double kDefaultAlphaMax = 4.0;
/// Default truncation tail budget for states.
inline constexpr double kDefaultTailBudget = 1e-8;

struct ModeDims {
  int d_cm = 2;
  int d_rel = 2;

  int total() const { return d_cm * d_rel; }
  int index(int m_cm, int n_rel) const { return m_cm * d_rel + n_rel; }

  /// Throws std::invalid_argument unless both truncations are >= 2 and the
  /// product fits the memory budget.
  void validate(int max_total = 1 << 14) const;

  friend bool operator==(const ModeDims&, const ModeDims&) = default;
};

/// Truncated single-mode vector with the untruncated weight it is missing.
struct ModeVector {
  CVector coefficients;
  double tail_mass = 0.0;
  bool normalized = false;
};
using RelVector = ModeVector;
using CmVector = ModeVector;

struct TwoModeState {
  CMatrix coefficients;  // d_cm x d_rel
  ModeDims dims;
  double tail_mass = 0.0;

  /// Flattened CM-major vector (index m * d_rel + n).
  CVector flatten() const;
  static TwoModeState from_flat(const CVector& flat, const ModeDims& dims);
  double norm() const { return coefficients.norm(); }
};

struct TwoModeOperator {
  CMatrix entries;
  ModeDims dims;
  bool hermitian_flag = false;

  /// max |A - A^dagger| <= tol * max |A|.
  bool is_hermitian(double tol = 1e-12) const;
};

struct LadderOps {
  RMatrix a;
  RMatrix a_dagger;
  RMatrix number;
};

/// Truncated coherent vector c_n = e^{-|alpha|^2/2} alpha^n / sqrt(n!), n < d.
/// tail_mass is the Poisson weight of the levels >= d. With normalize set the
/// kept coefficients are rescaled to unit norm (tail still reported).
ModeVector coherent_fock(Complex alpha, int d, bool normalize,
                         double alpha_max = kDefaultAlphaMax);

/// Poisson tail sum_{n >= d} e^{-mean} mean^n / n!, summed directly.
double poisson_tail(double mean, int d);

/// Position-space coherent state
/// xi_alpha(u) = pi^{-1/4} e^{-|alpha|^2/2} exp(-(u^2 - 2 sqrt2 alpha u + alpha^2)/2).
Complex coherent_position(Complex alpha, double u);

/// Unit-norm two-mode basis function; l is the relative level, m the CM level.
double basis_wavefunction(int l, int m, double x, double y);

/// Unit-norm product state: coherent alpha on the CM factor and beta on the
/// relative factor, each truncated with tail <= tail_budget.
TwoModeState two_mode_product_state(Complex alpha, Complex beta,
                                    const ModeDims& dims,
                                    double tail_budget = kDefaultTailBudget);

/// Unit-norm wavefunction 2^{1/4} xi_alpha(u) xi_beta(v) of the product state.
Complex product_state_position(Complex alpha, Complex beta, double x, double y);

/// Same wavefunction in lab-frame factorized form,
/// 2^{1/4} xi_{(alpha+beta)/sqrt2}(2^{1/4} x) xi_{(alpha-beta)/sqrt2}(2^{1/4} y).
Complex product_state_position_lab(Complex alpha, Complex beta, double x,
                                   double y);

/// Ladder matrices with a|n> = sqrt(n)|n-1>, i.e. a(n, n+1) = sqrt(n+1).
LadderOps mode_operators(int d);

/// Evaluates sum_{m,n} c(m, n) psi_{nm}(x, y).
Complex state_position_eval(const TwoModeState& state, double x, double y);

/// Tr(A^dagger B) for any two conformable Eigen matrices.
template <typename DerivedA, typename DerivedB>
Complex hs_inner(const Eigen::MatrixBase<DerivedA>& A,
                 const Eigen::MatrixBase<DerivedB>& B) {
  if (A.rows() != B.rows() || A.cols() != B.cols()) {
    throw std::invalid_argument("hs_inner: shape mismatch");
  }
  return (A.derived().array().conjugate().template cast<Complex>() *
          B.derived().array().template cast<Complex>())
      .sum();
}

Complex hs_inner(const TwoModeOperator& A, const TwoModeOperator& B);

/// Kronecker product A (x) B, CM factor first.
template <typename DerivedA, typename DerivedB>
auto kron(const Eigen::MatrixBase<DerivedA>& A,
          const Eigen::MatrixBase<DerivedB>& B) {
  using Scalar = typename Eigen::ScalarBinaryOpTraits<
      typename DerivedA::Scalar, typename DerivedB::Scalar>::ReturnType;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> out(A.rows() * B.rows(),
                                                            A.cols() * B.cols());
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    for (Eigen::Index j = 0; j < A.cols(); ++j) {
      out.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) =
          A(i, j) * B.template cast<Scalar>();
    }
  }
  return out;
}

/// Column-stacked view of an operator as an HS vector.
inline CVector vectorize(const CMatrix& A) {
  return Eigen::Map<const CVector>(A.data(), A.size());
}

}  // namespace oscgraph
