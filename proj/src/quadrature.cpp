#include "oscgraph/quadrature.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace oscgraph {

namespace {

constexpr double kSelfTestTol = 1e-12;

void self_test(const QuadratureRule& rule, double expected, const char* what) {
  const double total =
      detail::pairwise_sum<double>(0, rule.weights.size(), [&](std::size_t i) { return rule.weights[i]; });
  if (std::abs(total - expected) > kSelfTestTol * std::max(1.0, std::abs(expected))) {
    throw std::runtime_error(std::string(what) +
                             ": weight normalization self-test failed");
  }
}

// Orthonormal Hermite polynomial p_n and its derivative at x (weight e^{-x^2}).
std::pair<double, double> hermite_orthonormal(int n, double x) {
  double p_prev = 0.0;
  double p = std::pow(std::numbers::pi, -0.25);
  for (int j = 1; j <= n; ++j) {
    const double next = x * std::sqrt(2.0 / j) * p - std::sqrt((j - 1.0) / j) * p_prev;
    p_prev = p;
    p = next;
  }
  return {p, std::sqrt(2.0 * n) * p_prev};
}

}  // namespace

QuadratureRule gauss_hermite(int n) {
  if (n < 2 || n > 512) {
    throw std::invalid_argument("gauss_hermite: n must lie in [2, 512], got " +
                                std::to_string(n));
  }
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd sub(n - 1);
  for (int k = 1; k < n; ++k) sub(k - 1) = std::sqrt(k / 2.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);

  QuadratureRule rule;
  rule.kind = RuleKind::gauss_hermite;
  rule.symmetric = true;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const double sqrt_pi = std::sqrt(std::numbers::pi);
  for (int i = 0; i < n; ++i) {
    double x = solver.eigenvalues()(i);
    for (int it = 0; it < 3; ++it) {
      const auto [p, dp] = hermite_orthonormal(n, x);
      if (dp == 0.0 || !std::isfinite(dp)) break;
      x -= p / dp;
    }
    const auto [p, dp] = hermite_orthonormal(n, x);
    rule.nodes[i] = x;
    const double v0 = solver.eigenvectors()(0, i);
    rule.weights[i] = std::isfinite(dp) && dp != 0.0 ? 2.0 / (dp * dp) : sqrt_pi * v0 * v0;
  }
  // Enforce exact mirror symmetry.
  for (int i = 0; i < n / 2; ++i) {
    const int j = n - 1 - i;
    const double x = 0.5 * (rule.nodes[j] - rule.nodes[i]);
    const double w = 0.5 * (rule.weights[i] + rule.weights[j]);
    rule.nodes[i] = -x;
    rule.nodes[j] = x;
    rule.weights[i] = rule.weights[j] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  self_test(rule, sqrt_pi, "gauss_hermite");
  return rule;
}

QuadratureRule gauss_legendre(int n, double a, double b) {
  if (n < 2) {
    throw std::invalid_argument("gauss_legendre: n must be >= 2");
  }
  if (!(b > a)) {
    throw std::invalid_argument("gauss_legendre: empty interval");
  }
  QuadratureRule rule;
  rule.kind = RuleKind::gauss_legendre;
  rule.interval = std::make_pair(a, b);
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute the derivative at the converged node.
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = mid - half * x;
    rule.nodes[n - 1 - i] = mid + half * x;
    rule.weights[i] = rule.weights[n - 1 - i] = half * w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = mid;
  self_test(rule, b - a, "gauss_legendre");
  return rule;
}

QuadratureRule oscillatory_line_rule(int n_base, double L, int refinement,
                                     double omega_max) {
  if (!(L > 0.0) || !std::isfinite(L)) {
    throw std::invalid_argument("oscillatory_line_rule: L must be positive");
  }
  if (n_base < 2) {
    throw std::invalid_argument("oscillatory_line_rule: n_base must be >= 2");
  }
  if (refinement < 0 || refinement > 30) {
    throw std::invalid_argument("oscillatory_line_rule: refinement out of range");
  }
  double panels = 8.0;
  if (omega_max > 0.0) {
    const double quarter_period = std::numbers::pi / (2.0 * omega_max);
    panels = std::max(panels, std::ceil(2.0 * L / quarter_period));
  }
  panels *= std::ldexp(1.0, refinement);
  if (panels * n_base > static_cast<double>(kMaxLineRuleNodes)) {
    throw std::length_error("oscillatory_line_rule: panel budget exceeded (" +
                            std::to_string(panels * n_base) + " nodes)");
  }
  const auto n_panels = static_cast<std::size_t>(panels);
  const QuadratureRule base = gauss_legendre(n_base);
  const double width = 2.0 * L / static_cast<double>(n_panels);

  QuadratureRule rule;
  rule.kind = RuleKind::composite_legendre;
  rule.interval = std::make_pair(-L, L);
  rule.symmetric = true;
  rule.nodes.resize(n_panels * n_base);
  rule.weights.resize(n_panels * n_base);
  for (std::size_t p = 0; p < n_panels; ++p) {
    const double mid = -L + (static_cast<double>(p) + 0.5) * width;
    for (int k = 0; k < n_base; ++k) {
      const std::size_t idx = p * n_base + k;
      rule.nodes[idx] = mid + 0.5 * width * base.nodes[k];
      rule.weights[idx] = 0.5 * width * base.weights[k];
    }
  }
  // Mirror pairs exactly so the symmetric fold is valid.
  const std::size_t n = rule.nodes.size();
  for (std::size_t i = 0; i < n / 2; ++i) {
    const double x = 0.5 * (rule.nodes[n - 1 - i] - rule.nodes[i]);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[n - 1 - i] = rule.weights[i];
  }
  self_test(rule, 2.0 * L, "oscillatory_line_rule");
  return rule;
}

DiskRule disk_rule(double R, int n_r, int n_theta) {
  if (!(R > 0.0) || !std::isfinite(R)) {
    throw std::invalid_argument("disk_rule: R must be positive");
  }
  if (n_r < 2 || n_theta < 1) {
    throw std::invalid_argument("disk_rule: need n_r >= 2 and n_theta >= 1");
  }
  DiskRule rule;
  rule.R = R;
  rule.radial_nodes = n_r;
  rule.angular_nodes = n_theta;
  const QuadratureRule radial = gauss_legendre(n_r, 0.0, R * R);
  rule.s_nodes = radial.nodes;
  rule.s_weights = radial.weights;
  for (double& w : rule.s_weights) w *= 0.5;
  rule.angles.resize(n_theta);
  for (int j = 0; j < n_theta; ++j) {
    rule.angles[j] = 2.0 * std::numbers::pi * j / n_theta;
  }
  rule.angle_weight = 2.0 * std::numbers::pi / n_theta;

  const double area = integrate(rule, [](std::complex<double>) { return 1.0; });
  const double expected = std::numbers::pi * R * R;
  if (std::abs(area - expected) > kSelfTestTol * expected) {
    throw std::runtime_error("disk_rule: area self-test failed");
  }
  return rule;
}

}  // namespace oscgraph
