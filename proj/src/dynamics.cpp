#include "oscgraph/dynamics.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

namespace oscgraph {

namespace {

const double kQuarterRoot2 = std::pow(2.0, 0.25);
constexpr Complex kI{0.0, 1.0};

using KSolver = Eigen::SelfAdjointEigenSolver<RMatrix>;

std::shared_ptr<const KSolver> kinetic_eigensystem(int d_cm) {
  static std::mutex mutex;
  static std::map<int, std::shared_ptr<const KSolver>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(d_cm);
  if (it != cache.end()) return it->second;
  auto solver = std::make_shared<const KSolver>(cm_kinetic_matrix(d_cm));
  cache.emplace(d_cm, solver);
  return solver;
}

void require_finite(double t, const char* what) {
  if (!std::isfinite(t)) throw std::invalid_argument(std::string(what) + ": non-finite t");
}

void require_nonzero(double t, const char* what) {
  require_finite(t, what);
  if (t == 0.0) {
    throw std::invalid_argument(std::string(what) + ": t = 0 makes the kernel singular");
  }
}

// pi^{-1/4} w^{-1/2} c^m h_m(u/|w|) e^{-u^2/(2w)}: free evolution of f_m(u)
// under exp(-i tau p^2 / 2), w = 1 + i tau.
Complex spread_hermite_function(int m, Complex w, double u) {
  const double aw = std::abs(w);
  const Complex c = std::conj(w) / aw;
  const double h = normalized_hermite(m, u / aw);
  return std::pow(std::numbers::pi, -0.25) / std::sqrt(w) * std::pow(c, m) * h *
         std::exp(-u * u / (2.0 * w));
}

}  // namespace

RMatrix cm_kinetic_matrix(int d_cm) {
  if (d_cm < 2) throw std::invalid_argument("cm_kinetic_matrix: d_cm must be >= 2");
  const LadderOps ops = mode_operators(d_cm);
  RMatrix two_n_plus_one = 2.0 * ops.number + RMatrix::Identity(d_cm, d_cm);
  RMatrix K = (two_n_plus_one - ops.a * ops.a - ops.a_dagger * ops.a_dagger) /
              (2.0 * std::numbers::sqrt2);
  return K;
}

CMatrix cm_propagator(double t, int d_cm) {
  require_finite(t, "cm_propagator");
  const auto solver = kinetic_eigensystem(d_cm);
  const RMatrix& V = solver->eigenvectors();
  CVector phases(d_cm);
  for (int k = 0; k < d_cm; ++k) phases(k) = std::exp(-kI * t * solver->eigenvalues()(k));
  return V.cast<Complex>() * phases.asDiagonal() * V.transpose().cast<Complex>();
}

double cm_spreading_tail(double t, int d_cm) {
  require_finite(t, "cm_spreading_tail");
  if (d_cm < 1) return 1.0;
  const double tau = std::numbers::sqrt2 * t;
  const double q = tau * tau / (4.0 + tau * tau);
  if (q == 0.0) return 0.0;
  // P(2k) = sqrt(1 - q) q^k (2k)! / (4^k k!^2); sum over 2k >= d_cm.
  const long k0 = (d_cm + 1) / 2;
  double log_term = 0.5 * std::log1p(-q) + k0 * std::log(q) + std::lgamma(2.0 * k0 + 1.0) -
                    2.0 * std::lgamma(k0 + 1.0) - k0 * std::log(4.0);
  double term = std::exp(log_term);
  double sum = 0.0;
  for (long k = k0; k < k0 + 10'000'000; ++k) {
    sum += term;
    if (term <= 1e-18 * sum || term == 0.0) break;
    term *= q * (2.0 * k + 1.0) / (2.0 * k + 2.0);
  }
  return std::min(sum, 1.0);
}

RMatrix two_mode_hamiltonian(const ModeDims& dims) {
  dims.validate();
  const RMatrix K = cm_kinetic_matrix(dims.d_cm);
  RMatrix rel = RMatrix::Zero(dims.d_rel, dims.d_rel);
  for (int n = 0; n < dims.d_rel; ++n) rel(n, n) = rel_eigenvalue(n);
  return kron(K, RMatrix::Identity(dims.d_rel, dims.d_rel)) +
         kron(RMatrix::Identity(dims.d_cm, dims.d_cm), rel);
}

PropagatorMatrix propagator_matrix(double t, const ModeDims& dims,
                                   const PropagatorLimits& limits) {
  require_finite(t, "propagator_matrix");
  dims.validate();
  if (std::abs(t) > limits.t_max) {
    throw std::invalid_argument("propagator_matrix: |t| = " + std::to_string(std::abs(t)) +
                                " exceeds t_max = " + std::to_string(limits.t_max));
  }
  const double tail = cm_spreading_tail(t, dims.d_cm);
  if (tail > limits.tail_budget) {
    throw std::invalid_argument("propagator_matrix: d_cm = " + std::to_string(dims.d_cm) +
                                " too small for t = " + std::to_string(t) +
                                " (CM spreading tail " + std::to_string(tail) + ")");
  }
  PropagatorMatrix prop;
  prop.t = t;
  prop.dims = dims;
  prop.cm_factor = cm_propagator(t, dims.d_cm);
  prop.rel_phases.resize(dims.d_rel);
  for (int n = 0; n < dims.d_rel; ++n) {
    prop.rel_phases(n) = std::exp(-kI * t * rel_eigenvalue(n));
  }
  prop.U.dims = dims;
  prop.U.entries = kron(prop.cm_factor, CMatrix(prop.rel_phases.asDiagonal()));
  return prop;
}

TwoModeState apply(const PropagatorMatrix& prop, const TwoModeState& state) {
  if (!(prop.dims == state.dims)) throw std::invalid_argument("apply: dims mismatch");
  TwoModeState out = state;
  out.coefficients = prop.cm_factor * state.coefficients * prop.rel_phases.asDiagonal();
  return out;
}

EvolvedGaussian evolve_product_state(Complex alpha, Complex beta, double t) {
  EvolvedGaussian g;
  g.alpha = alpha;
  g.beta_rotated = beta * std::exp(-kI * (std::numbers::sqrt2 * t));
  g.width = Complex(1.0, std::numbers::sqrt2 * t);
  g.phase = std::exp(-kI * (t / std::numbers::sqrt2));
  g.t = t;
  return g;
}

Complex evolved_state_position(const EvolvedGaussian& g, double x, double y) {
  const double u = (x + y) / kQuarterRoot2;
  const double v = (x - y) / kQuarterRoot2;
  const Complex w = g.width;
  const Complex a = g.alpha;
  const Complex cm = std::pow(std::numbers::pi, -0.25) * std::exp(-std::norm(a) / 2.0) /
                     std::sqrt(w) *
                     std::exp(-u * u / (2.0 * w) + std::numbers::sqrt2 * a * u / w -
                              a * a * std::conj(w) / (2.0 * w));
  return kQuarterRoot2 * g.phase * cm * coherent_position(g.beta_rotated, v);
}

Complex evolve_basis_closed_form(int l, int m, double t, double x, double y) {
  detail::require_level(l, "evolve_basis_closed_form");
  detail::require_level(m, "evolve_basis_closed_form");
  require_finite(t, "evolve_basis_closed_form");
  const double u = (x + y) / kQuarterRoot2;
  const double v = (x - y) / kQuarterRoot2;
  const Complex w(1.0, std::numbers::sqrt2 * t);
  const Complex rel_phase = std::exp(-kI * t * rel_eigenvalue(l));
  return kQuarterRoot2 * rel_phase * hermite_function(l, v) * spread_hermite_function(m, w, u);
}

Complex fresnel_hermite_rhs(int n, double t, double x) {
  detail::require_level(n, "fresnel_hermite_rhs");
  require_nonzero(t, "fresnel_hermite_rhs");
  const Complex w(1.0, 2.0 * t);
  const double aw = std::abs(w);
  const Complex c = std::conj(w) / aw;
  const Complex pref = std::sqrt(4.0 * std::numbers::pi * t * kI) /
                       (std::pow(std::numbers::pi, 0.25) * std::sqrt(w));
  return pref * std::exp(-kI * x * x / (4.0 * t)) * std::pow(c, n) *
         normalized_hermite(n, x / aw) * std::exp(-x * x / (2.0 * w));
}

double fresnel_window(int n, double tail_margin) {
  return std::sqrt(2.0 * (2.0 * n + 1.0)) + tail_margin;
}

AdaptiveResult<Complex> fresnel_hermite_lhs(int n, double t, double x,
                                            const FresnelOptions& opts) {
  detail::require_level(n, "fresnel_hermite_lhs");
  require_nonzero(t, "fresnel_hermite_lhs");
  const double L = fresnel_window(n, opts.tail_margin);
  const double omega = (L + std::abs(x)) / (2.0 * std::abs(t));
  auto integrand = [&](double y) -> Complex {
    return std::exp(kI * (y * y / (4.0 * t) - x * y / (2.0 * t))) * hermite_function(n, y);
  };
  auto make_rule = [&](int k) { return oscillatory_line_rule(opts.n_base, L, k, omega); };
  return integrate_adaptive(make_rule, integrand,
                            AdaptiveOptions{opts.rel_tol, opts.abs_tol, opts.max_refinements});
}

Complex propagate_via_kernel(const TwoModeState& state, double t, double x, double y,
                             const FresnelOptions& opts) {
  require_nonzero(t, "propagate_via_kernel");
  const int d_cm = state.dims.d_cm;
  const int d_rel = state.dims.d_rel;
  const double xt = x + y;
  const double yt = x - y;
  // c_n(0, v) = 2^{3/8} sum_m c(m, n) f_m(v / 2^{1/4}) as a vector over n.
  const double coeff_scale = std::pow(2.0, 0.375);
  const CMatrix coeff_t = state.coefficients.transpose();
  const double L = kQuarterRoot2 * fresnel_window(d_cm - 1, opts.tail_margin);
  const double omega = (L + std::abs(xt)) / (2.0 * std::abs(t));
  auto integrand = [&](double v) -> CVector {
    const auto f = hermite_function_table(d_cm - 1, v / kQuarterRoot2);
    const Eigen::Map<const RVector> fm(f.data(), d_cm);
    const Complex kernel = std::exp(kI * ((xt - v) * (xt - v) / (4.0 * t)));
    return (coeff_scale * kernel) * (coeff_t * fm.cast<Complex>());
  };
  auto make_rule = [&](int k) { return oscillatory_line_rule(opts.n_base, L, k, omega); };
  const auto integrals = integrate_adaptive(
      make_rule, integrand, AdaptiveOptions{opts.rel_tol, opts.abs_tol, opts.max_refinements});

  const Complex kernel_norm = 1.0 / std::sqrt(4.0 * std::numbers::pi * kI * t);
  Complex acc = 0.0;
  for (int n = 0; n < d_rel; ++n) {
    const Complex cn = kernel_norm * std::exp(-kI * t * rel_eigenvalue(n)) * integrals.value(n);
    acc += cn * rel_eigenfunction(n, yt);
  }
  return acc;
}

std::vector<double> eigencheck(int d_rel) {
  if (d_rel < 2) throw std::invalid_argument("eigencheck: d_rel must be >= 2");
  const LadderOps ops = mode_operators(d_rel);
  const RMatrix q = (ops.a + ops.a_dagger) / std::numbers::sqrt2;
  const RMatrix dq = ops.a_dagger - ops.a;  // p = i dq / sqrt2, p^2 = -dq^2 / 2
  const RMatrix p2 = -(dq * dq) / 2.0;
  const RMatrix H = (p2 + q * q) / std::numbers::sqrt2;
  const int k = d_rel - 2;
  if (k == 0) return {};
  Eigen::SelfAdjointEigenSolver<RMatrix> solver(H.topLeftCorner(k, k), Eigen::EigenvaluesOnly);
  std::vector<double> out(solver.eigenvalues().data(), solver.eigenvalues().data() + k);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace oscgraph
