#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "oscgraph/quadrature.hpp"

namespace oscgraph::testing {

inline constexpr std::uint64_t kSeed = 20240611;

/// Integrates g(x, y) over the plane with a tensor rule in the CM/relative
/// coordinates u = (x+y)/2^{1/4}, v = (x-y)/2^{1/4} (dx dy = du dv / sqrt2).
template <typename F>
auto integrate_plane(F&& g, double L = 11.0, int n_base = 16, double omega = 1.0) {
  const QuadratureRule r = oscillatory_line_rule(n_base, L, 0, omega);
  const double s = std::pow(2.0, -0.75);
  return integrate(r, [&](double u) {
           return integrate(r, [&](double v) { return g(s * (u + v), s * (u - v)); });
         }) /
         std::numbers::sqrt2;
}

inline std::complex<double> random_complex(std::mt19937_64& rng, double scale) {
  std::uniform_real_distribution<double> d(-scale, scale);
  return {d(rng), d(rng)};
}

}  // namespace oscgraph::testing
