#include "oscgraph/fock.hpp"

#include <cmath>
#include <numbers>

namespace oscgraph {

namespace {

const double kQuarterRoot2 = std::pow(2.0, 0.25);

}  // namespace

void ModeDims::validate(int max_total) const {
  if (d_cm < 2 || d_rel < 2) {
    throw std::invalid_argument("ModeDims: both truncations must be >= 2 (got d_cm=" +
                                std::to_string(d_cm) + ", d_rel=" +
                                std::to_string(d_rel) + ")");
  }
  if (static_cast<long long>(d_cm) * d_rel > max_total) {
    throw std::invalid_argument("ModeDims: d_cm * d_rel exceeds the memory budget of " +
                                std::to_string(max_total));
  }
}

CVector TwoModeState::flatten() const {
  CVector flat(dims.total());
  for (int m = 0; m < dims.d_cm; ++m) {
    for (int n = 0; n < dims.d_rel; ++n) flat(dims.index(m, n)) = coefficients(m, n);
  }
  return flat;
}

TwoModeState TwoModeState::from_flat(const CVector& flat, const ModeDims& dims) {
  if (flat.size() != dims.total()) {
    throw std::invalid_argument("TwoModeState::from_flat: size mismatch");
  }
  TwoModeState s;
  s.dims = dims;
  s.coefficients.resize(dims.d_cm, dims.d_rel);
  for (int m = 0; m < dims.d_cm; ++m) {
    for (int n = 0; n < dims.d_rel; ++n) s.coefficients(m, n) = flat(dims.index(m, n));
  }
  return s;
}

bool TwoModeOperator::is_hermitian(double tol) const {
  const double scale = entries.cwiseAbs().maxCoeff();
  if (scale == 0.0) return true;
  return (entries - entries.adjoint()).cwiseAbs().maxCoeff() <= tol * scale;
}

double poisson_tail(double mean, int d) {
  if (mean < 0.0 || !std::isfinite(mean)) {
    throw std::invalid_argument("poisson_tail: mean must be finite and >= 0");
  }
  if (d <= 0) return 1.0;
  if (mean == 0.0) return 0.0;
  double term = std::exp(-mean + d * std::log(mean) - std::lgamma(d + 1.0));
  double sum = 0.0;
  for (int n = d; n < d + 100000; ++n) {
    sum += term;
    if (n > mean && term <= 1e-18 * sum) break;
    term *= mean / (n + 1);
  }
  return sum;
}

ModeVector coherent_fock(Complex alpha, int d, bool normalize, double alpha_max) {
  if (d < 1) throw std::invalid_argument("coherent_fock: d must be >= 1");
  if (!std::isfinite(alpha.real()) || !std::isfinite(alpha.imag())) {
    throw std::invalid_argument("coherent_fock: non-finite amplitude");
  }
  if (std::abs(alpha) > alpha_max) {
    throw std::invalid_argument("coherent_fock: |alpha| = " +
                                std::to_string(std::abs(alpha)) +
                                " exceeds alpha_max = " + std::to_string(alpha_max));
  }
  ModeVector out;
  out.coefficients.resize(d);
  Complex c = std::exp(-std::norm(alpha) / 2.0);
  out.coefficients(0) = c;
  for (int n = 1; n < d; ++n) {
    c *= alpha / std::sqrt(static_cast<double>(n));
    out.coefficients(n) = c;
  }
  out.tail_mass = poisson_tail(std::norm(alpha), d);
  if (normalize) {
    out.coefficients.normalize();
    out.normalized = true;
  }
  return out;
}

Complex coherent_position(Complex alpha, double u) {
  if (!std::isfinite(u) || !std::isfinite(alpha.real()) || !std::isfinite(alpha.imag())) {
    throw std::invalid_argument("coherent_position: non-finite input");
  }
  const double pref = std::pow(std::numbers::pi, -0.25) * std::exp(-std::norm(alpha) / 2.0);
  return pref * std::exp(-(u * u - 2.0 * std::numbers::sqrt2 * alpha * u + alpha * alpha) / 2.0);
}

double basis_wavefunction(int l, int m, double x, double y) {
  const double u = (x + y) / kQuarterRoot2;
  const double v = (x - y) / kQuarterRoot2;
  return kQuarterRoot2 * hermite_function(l, v) * hermite_function(m, u);
}

TwoModeState two_mode_product_state(Complex alpha, Complex beta, const ModeDims& dims,
                                    double tail_budget) {
  dims.validate();
  const ModeVector cm = coherent_fock(alpha, dims.d_cm, false);
  const ModeVector rel = coherent_fock(beta, dims.d_rel, false);
  if (cm.tail_mass > tail_budget || rel.tail_mass > tail_budget) {
    throw std::invalid_argument(
        "two_mode_product_state: truncation too small for tail budget (cm tail " +
        std::to_string(cm.tail_mass) + ", rel tail " + std::to_string(rel.tail_mass) + ")");
  }
  TwoModeState s;
  s.dims = dims;
  s.coefficients = cm.coefficients * rel.coefficients.transpose();
  s.coefficients /= s.coefficients.norm();
  s.tail_mass = 1.0 - (1.0 - cm.tail_mass) * (1.0 - rel.tail_mass);
  return s;
}

Complex product_state_position(Complex alpha, Complex beta, double x, double y) {
  const double u = (x + y) / kQuarterRoot2;
  const double v = (x - y) / kQuarterRoot2;
  return kQuarterRoot2 * coherent_position(alpha, u) * coherent_position(beta, v);
}

Complex product_state_position_lab(Complex alpha, Complex beta, double x, double y) {
  const double s = std::numbers::sqrt2;
  return kQuarterRoot2 * coherent_position((alpha + beta) / s, kQuarterRoot2 * x) *
         coherent_position((alpha - beta) / s, kQuarterRoot2 * y);
}

LadderOps mode_operators(int d) {
  if (d < 2) throw std::invalid_argument("mode_operators: d must be >= 2");
  LadderOps ops;
  ops.a = RMatrix::Zero(d, d);
  for (int n = 0; n + 1 < d; ++n) ops.a(n, n + 1) = std::sqrt(n + 1.0);
  ops.a_dagger = ops.a.transpose();
  ops.number = RMatrix::Zero(d, d);
  for (int n = 0; n < d; ++n) ops.number(n, n) = n;
  return ops;
}

Complex state_position_eval(const TwoModeState& state, double x, double y) {
  const double u = (x + y) / kQuarterRoot2;
  const double v = (x - y) / kQuarterRoot2;
  const auto fu = hermite_function_table(state.dims.d_cm - 1, u);
  const auto fv = hermite_function_table(state.dims.d_rel - 1, v);
  Complex acc = 0.0;
  for (int m = 0; m < state.dims.d_cm; ++m) {
    Complex row = 0.0;
    for (int n = 0; n < state.dims.d_rel; ++n) row += state.coefficients(m, n) * fv[n];
    acc += row * fu[m];
  }
  return kQuarterRoot2 * acc;
}

Complex hs_inner(const TwoModeOperator& A, const TwoModeOperator& B) {
  if (!(A.dims == B.dims)) throw std::invalid_argument("hs_inner: dims mismatch");
  return hs_inner(A.entries, B.entries);
}

}  // namespace oscgraph
