#pragma once

// Hermite polynomials and Hermite functions.
//
// All routines are templated on the argument scalar so the same recurrences
// serve real evaluation and the complex-argument forms used by the Fresnel
// closed forms. Normalized quantities are computed by recurrences on the
// normalized values themselves; no factorials are formed, so levels up to
// several hundred stay finite.

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

namespace oscgraph {

namespace detail {

template <typename T>
struct is_complex : std::false_type {};
template <typename T>
struct is_complex<std::complex<T>> : std::true_type {};

template <typename T>
bool is_finite_scalar(const T& x) {
  if constexpr (is_complex<T>::value) {
    return std::isfinite(x.real()) && std::isfinite(x.imag());
  } else {
    return std::isfinite(x);
  }
}

inline void require_level(int n, const char* what) {
  if (n < 0) {
    throw std::invalid_argument(std::string(what) +
                                ": Hermite index must be non-negative, got " +
                                std::to_string(n));
  }
}

}  // namespace detail

/// Physicists' Hermite polynomial H_n(x) via H_{n+1} = 2x H_n - 2n H_{n-1}.
template <typename T>
T hermite_poly(int n, const T& x) {
  detail::require_level(n, "hermite_poly");
  if (!detail::is_finite_scalar(x)) {
    throw std::invalid_argument("hermite_poly: non-finite argument");
  }
  T prev(1);
  if (n == 0) return prev;
  T curr = T(2) * x;
  for (int k = 1; k < n; ++k) {
    T next = T(2) * x * curr - T(2 * k) * prev;
    prev = curr;
    curr = next;
  }
  return curr;
}

/// H_n(z) / sqrt(2^n n!), by h_{n+1} = z sqrt(2/(n+1)) h_n - sqrt(n/(n+1)) h_{n-1}.
/// Values for all levels 0..n_max are returned.
template <typename T>
std::vector<T> normalized_hermite_table(int n_max, const T& z) {
  detail::require_level(n_max, "normalized_hermite_table");
  std::vector<T> h(static_cast<std::size_t>(n_max) + 1);
  h[0] = T(1);
  if (n_max >= 1) h[1] = std::sqrt(2.0) * z;
  for (int k = 1; k < n_max; ++k) {
    const double a = std::sqrt(2.0 / (k + 1));
    const double b = std::sqrt(static_cast<double>(k) / (k + 1));
    h[k + 1] = a * z * h[k] - b * h[k - 1];
  }
  return h;
}

template <typename T>
T normalized_hermite(int n, const T& z) {
  return normalized_hermite_table(n, z).back();
}

/// Unit-norm Hermite functions f_k(x) = pi^{-1/4} (2^k k!)^{-1/2} H_k(x) e^{-x^2/2}
/// for k = 0..n_max. The Gaussian factor seeds the recurrence, so large |x|
/// underflows gracefully instead of producing inf * 0.
template <typename Real>
std::vector<Real> hermite_function_table(int n_max, Real x) {
  detail::require_level(n_max, "hermite_function_table");
  std::vector<Real> f(static_cast<std::size_t>(n_max) + 1);
  const Real quarter_pi = std::pow(std::numbers::pi_v<Real>, Real(-0.25));
  f[0] = quarter_pi * std::exp(-x * x / 2);
  if (n_max >= 1) f[1] = std::sqrt(Real(2)) * x * f[0];
  for (int k = 1; k < n_max; ++k) {
    f[k + 1] = x * std::sqrt(Real(2) / (k + 1)) * f[k] -
               std::sqrt(Real(k) / (k + 1)) * f[k - 1];
  }
  return f;
}

template <typename Real>
Real hermite_function(int n, Real x) {
  detail::require_level(n, "hermite_function");
  return hermite_function_table(n, x).back();
}

/// Stationary states of -d^2/dy^2 + y^2/2 (frequency sqrt 2, mass 1/2):
/// psi_n(y) = 2^{-1/8} f_n(y / 2^{1/4}), unit norm in y.
template <typename Real>
Real rel_eigenfunction(int n, Real ytilde) {
  detail::require_level(n, "rel_eigenfunction");
  const Real scale = std::pow(Real(2), Real(0.25));
  return hermite_function(n, ytilde / scale) / std::pow(Real(2), Real(0.125));
}

/// Energy of rel_eigenfunction(n): sqrt(2) (n + 1/2).
inline double rel_eigenvalue(int n) {
  detail::require_level(n, "rel_eigenvalue");
  return std::numbers::sqrt2 * (n + 0.5);
}

}  // namespace oscgraph
