#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

namespace oscgraph {

enum class RuleKind { gauss_hermite, gauss_legendre, composite_legendre };

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  RuleKind kind = RuleKind::gauss_legendre;
  std::optional<std::pair<double, double>> interval;
  // Nodes are stored in ascending order and mirror-symmetric about 0. The
  // integrator then pairs x with -x before summing.
  bool symmetric = false;

  std::size_t size() const { return nodes.size(); }
};

/// Nodes/weights for weight e^{-x^2} on the real line, 2 <= n <= 512.
/// Golub-Welsch eigendecomposition followed by a Newton polish of each node.
QuadratureRule gauss_hermite(int n);

/// n-point Gauss-Legendre rule on [a, b].
QuadratureRule gauss_legendre(int n, double a = -1.0, double b = 1.0);

/// Composite Gauss-Legendre panels on [-L, L].
///
/// The panel width is at most a quarter period of the fastest oscillation
/// `omega_max` (radians per unit length) expected in the integrand; each
/// refinement doubles the panel count. At least 8 panels are always used.
QuadratureRule oscillatory_line_rule(int n_base, double L, int refinement,
                                     double omega_max = 0.0);

/// Largest total node count oscillatory_line_rule will build.
inline constexpr std::size_t kMaxLineRuleNodes = std::size_t{1} << 24;

/// Product rule on the disk |beta| <= R: Gauss-Legendre in s = r^2 times the
/// uniform trapezoid in angle. Integrates f(beta) d^2 beta.
struct DiskRule {
  double R = 0.0;
  int radial_nodes = 0;
  int angular_nodes = 0;
  std::vector<double> s_nodes;    // r^2 values
  std::vector<double> s_weights;  // includes the 1/2 from d^2beta = ds dtheta / 2
  std::vector<double> angles;
  double angle_weight = 0.0;

  /// True when the angular trapezoid cancels every Fourier mode e^{ik theta}
  /// with 0 < |k| <= 2 max_fock_index, which is what the Fock-space integrals
  /// over |beta><beta| need.
  bool resolves(int max_fock_index) const {
    return angular_nodes >= 4 * max_fock_index + 2;
  }
};

DiskRule disk_rule(double R, int n_r, int n_theta);

class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double achieved_error)
      : std::runtime_error(what), achieved_error_(achieved_error) {}
  double achieved_error() const { return achieved_error_; }

 private:
  double achieved_error_;
};

namespace detail {

// Pairwise summation over index ranges; evaluation order depends only on the
// rule size, never on threading or timing.
template <typename T, typename Term>
T pairwise_sum(std::size_t lo, std::size_t hi, Term&& term) {
  constexpr std::size_t kBlock = 64;
  if (hi - lo <= kBlock) {
    T acc = term(lo);
    for (std::size_t i = lo + 1; i < hi; ++i) acc += term(i);
    return acc;
  }
  const std::size_t mid = lo + (hi - lo) / 2;
  return pairwise_sum<T>(lo, mid, term) + pairwise_sum<T>(mid, hi, term);
}

template <typename T>
double magnitude(const T& x) {
  if constexpr (requires { x.norm(); }) {
    return x.norm();
  } else {
    return std::abs(x);
  }
}

}  // namespace detail

/// Sum of w_i f(x_i). f may return a scalar or an Eigen vector.
template <typename F>
auto integrate(const QuadratureRule& rule, F&& f) {
  using T = std::decay_t<decltype(f(0.0))>;
  const std::size_t n = rule.size();
  if (rule.symmetric) {
    const std::size_t half = n / 2;
    T acc = detail::pairwise_sum<T>(0, half, [&](std::size_t i) -> T {
      return rule.weights[i] * (f(rule.nodes[i]) + f(rule.nodes[n - 1 - i]));
    });
    if (n % 2 == 1) acc += T(rule.weights[half] * f(rule.nodes[half]));
    return acc;
  }
  return detail::pairwise_sum<T>(
      0, n, [&](std::size_t i) -> T { return rule.weights[i] * f(rule.nodes[i]); });
}

/// Integral of f(beta) over the disk, with f taking std::complex<double>.
template <typename F>
auto integrate(const DiskRule& rule, F&& f) {
  using T = std::decay_t<decltype(f(std::complex<double>{}))>;
  const std::size_t n_a = rule.angles.size();
  const std::size_t total = rule.s_nodes.size() * n_a;
  return detail::pairwise_sum<T>(0, total, [&](std::size_t k) -> T {
    const std::size_t i = k / n_a;
    const std::size_t j = k % n_a;
    const double r = std::sqrt(rule.s_nodes[i]);
    const std::complex<double> beta = std::polar(r, rule.angles[j]);
    return (rule.s_weights[i] * rule.angle_weight) * f(beta);
  });
}

template <typename T>
struct AdaptiveResult {
  T value{};
  double error_estimate = 0.0;
  int refinements = 0;
  std::size_t nodes = 0;
};

struct AdaptiveOptions {
  double rel_tol = 1e-9;
  double abs_tol = 0.0;
  int max_refinements = 10;
};

/// Successive refinement: rule(k) for k = 0, 1, ... until two consecutive
/// estimates agree to rel_tol * |I| + abs_tol. Throws ConvergenceError with the
/// last difference when max_refinements is exhausted.
template <typename RuleFactory, typename F>
auto integrate_adaptive(RuleFactory&& make_rule, F&& f,
                        const AdaptiveOptions& opts = {}) {
  using T = std::decay_t<decltype(f(0.0))>;
  QuadratureRule rule = make_rule(0);
  T previous = integrate(rule, f);
  double diff = 0.0;
  for (int k = 1; k <= opts.max_refinements; ++k) {
    rule = make_rule(k);
    T current = integrate(rule, f);
    diff = detail::magnitude(T(current - previous));
    if (diff <= opts.rel_tol * detail::magnitude(current) + opts.abs_tol) {
      return AdaptiveResult<T>{current, diff, k, rule.size()};
    }
    previous = current;
  }
  throw ConvergenceError(
      "integrate_adaptive: no convergence after " +
          std::to_string(opts.max_refinements) +
          " refinements (last difference " + std::to_string(diff) + ")",
      diff);
}

}  // namespace oscgraph
