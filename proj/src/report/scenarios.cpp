#include "oscgraph/report/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

#include "oscgraph/anticlique.hpp"
#include "oscgraph/dynamics.hpp"
#include "oscgraph/graph.hpp"
#include "oscgraph/report/parallel.hpp"

namespace oscgraph::report {

namespace {

using Json = nlohmann::ordered_json;

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

template <typename T>
void fill(std::optional<T>& field, T value) {
  if (!field) field = value;
}

template <typename T>
void fill(std::vector<T>& field, std::vector<T> value) {
  if (field.empty()) field = std::move(value);
}

ModeDims dims_of(const ScenarioConfig& c) { return {*c.d_cm, *c.d_rel}; }

double max_of(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, x);
  return m;
}

CVector g0_vector(const ScenarioConfig& c, int d_rel) {
  CVector g = CVector::Zero(d_rel);
  if (c.g0.empty()) {
    g(0) = 1.0;
    return g;
  }
  require(static_cast<int>(c.g0.size()) == d_rel,
          "g0 has " + std::to_string(c.g0.size()) + " coefficients, d_rel = " + std::to_string(d_rel));
  for (int i = 0; i < d_rel; ++i) g(i) = c.g0[static_cast<std::size_t>(i)];
  require(g.norm() > 0.0, "g0 is the zero vector");
  return g / g.norm();
}

AnticliqueSpec anticlique_spec(const ScenarioConfig& c) {
  AnticliqueSpec spec;
  spec.dims = dims_of(c);
  spec.K = *c.K;
  spec.g0 = g0_vector(c, spec.dims.d_rel);
  return spec;
}

Json state_json(const CVector& v) {
  Json arr = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    arr.push_back(v(i).real());
    arr.push_back(v(i).imag());
  }
  return arr;
}

Table sigma_table(const std::vector<double>& sigma) {
  Table t{"sigmas.csv", {"index", "sigma"}, {}};
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    t.rows.push_back({static_cast<double>(i + 1), sigma[i]});
  }
  return t;
}

GraphBasis grid_basis(const ScenarioConfig& c, const ModeDims& dims) {
  const auto betas = grid_betas(*c.grid_lo, *c.grid_hi, *c.grid_n);
  const auto ops = projectors_for(betas, dims);
  return hs_orthonormalize(ops);
}

void require_grid(const ScenarioConfig& c) {
  require(*c.grid_n >= 1, "grid_n must be >= 1");
  require(std::isfinite(*c.grid_lo) && std::isfinite(*c.grid_hi) && *c.grid_lo <= *c.grid_hi,
          "grid_lo/grid_hi must be finite with grid_lo <= grid_hi");
}

void require_dims(const ScenarioConfig& c) {
  try {
    dims_of(c).validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

void require_finite(const std::vector<double>& v, const char* name) {
  for (double x : v) require(std::isfinite(x), std::string(name) + " has a non-finite entry");
}

// ---------------------------------------------------------------- eigencheck

void eigencheck_defaults(ScenarioConfig& c) {
  fill(c.d_cm, 2);
  fill(c.d_rel, 16);
}

ScenarioOutcome run_eigencheck(const ScenarioConfig& c) {
  const auto ev = eigencheck(*c.d_rel);
  ScenarioOutcome out;
  double err = 0.0;
  for (std::size_t n = 0; n < ev.size(); ++n) {
    err = std::max(err, std::abs(ev[n] - rel_eigenvalue(static_cast<int>(n))));
  }
  out.metrics["n_checked"] = static_cast<double>(ev.size());
  out.metrics["max_abs_error"] = err;
  if (!ev.empty()) out.metrics["lambda0"] = ev[0];
  if (ev.size() > 1) out.metrics["spacing"] = ev[1] - ev[0];
  out.checks = {{"max_abs_error", Bound::at_most, 1e-10}, {"n_checked", Bound::at_least, 1}};
  return out;
}

// -------------------------------------------------------------------- lemma1

void lemma1_defaults(ScenarioConfig& c) {
  fill(c.d_cm, 2);
  fill(c.d_rel, 2);
  fill(c.n_list, {0, 1, 2, 5, 10});
  fill(c.t_grid, {0.3, 0.5, 1.0, 2.0});
  fill(c.x_list, {0.0, 0.5, 1.7});
  for (double t : c.t_grid) {
    require(std::isfinite(t) && t != 0.0, "lemma1: t = 0 makes the kernel singular");
  }
  require_finite(c.x_list, "x_list");
  for (int n : c.n_list) require(n >= 0 && n <= 400, "lemma1: n must lie in [0, 400]");
}

struct FresnelPoint {
  int n = 0;
  double t = 0.0;
  double x = 0.0;
  Complex lhs;
  Complex rhs;
  bool converged = false;
};

ScenarioOutcome run_lemma1(const ScenarioConfig& c) {
  std::vector<FresnelPoint> points;
  std::size_t n_calibration = 0;
  for (double t : c.t_grid) {
    for (double x : c.x_list) points.push_back({0, t, x, {}, {}, false});
  }
  n_calibration = points.size();
  for (int n : c.n_list) {
    for (double t : c.t_grid) {
      for (double x : c.x_list) points.push_back({n, t, x, {}, {}, false});
    }
  }
  parallel_for(points.size(), c.jobs, [&](std::size_t i) {
    FresnelPoint& p = points[i];
    p.rhs = fresnel_hermite_rhs(p.n, p.t, p.x);
    try {
      p.lhs = fresnel_hermite_lhs(p.n, p.t, p.x).value;
      p.converged = true;
    } catch (const ConvergenceError&) {
      p.converged = false;
    }
  });

  ScenarioOutcome out;
  double calibration = 0.0;
  double scaled = 0.0;
  double absolute = 0.0;
  int failures = 0;
  Table table{"lemma1.csv", {"n", "t", "x", "lhs_re", "lhs_im", "rhs_re", "rhs_im", "abs_err"}, {}};
  for (std::size_t i = 0; i < points.size(); ++i) {
    const FresnelPoint& p = points[i];
    if (!p.converged) {
      ++failures;
      continue;
    }
    const double err = std::abs(p.lhs - p.rhs);
    const double rel = err / (1.0 + std::abs(p.rhs));
    if (i < n_calibration) {
      calibration = std::max(calibration, rel);
      continue;
    }
    scaled = std::max(scaled, rel);
    absolute = std::max(absolute, err);
    table.rows.push_back({static_cast<double>(p.n), p.t, p.x, p.lhs.real(), p.lhs.imag(),
                          p.rhs.real(), p.rhs.imag(), err});
  }
  out.metrics["calibration_error"] = calibration;
  out.metrics["max_scaled_error"] = scaled;
  out.metrics["max_abs_error"] = absolute;
  out.metrics["convergence_failures"] = failures;
  out.metrics["points"] = static_cast<double>(points.size() - n_calibration);
  out.checks = {{"calibration_error", Bound::at_most, 1e-7},
                {"max_scaled_error", Bound::at_most, 1e-7},
                {"convergence_failures", Bound::equals, 0}};
  out.tables.push_back(std::move(table));
  return out;
}

// ---------------------------------------------------------- prop1-crosscheck

void prop1_defaults(ScenarioConfig& c) {
  fill(c.d_cm, 64);
  fill(c.d_rel, 4);
  fill(c.t_grid, {0.25, 0.5, 1.0});
  fill(c.n_list, {0, 1, 2, 3});
  require_dims(c);
  require_finite(c.t_grid, "t_grid");
  for (int n : c.n_list) {
    require(n >= 0 && n < *c.d_rel && n < *c.d_cm,
            "prop1-crosscheck: levels in n_list must be below d_rel and d_cm");
  }
}

ScenarioOutcome run_prop1(const ScenarioConfig& c) {
  const ModeDims dims = dims_of(c);
  const auto& levels = c.n_list;
  // Tensor rule in (u, v); dx dy = du dv / sqrt2.
  const QuadratureRule ru = oscillatory_line_rule(16, 12.0, 0, 1.0);
  const QuadratureRule rv = oscillatory_line_rule(16, 10.0, 0, 1.0);
  const double scale = std::pow(2.0, -0.75);
  const Eigen::Index n_pts = static_cast<Eigen::Index>(ru.size() * rv.size());
  RVector weights(n_pts);
  std::vector<std::pair<double, double>> xy(static_cast<std::size_t>(n_pts));
  for (std::size_t i = 0; i < ru.size(); ++i) {
    for (std::size_t j = 0; j < rv.size(); ++j) {
      const std::size_t k = i * rv.size() + j;
      const double u = ru.nodes[i];
      const double v = rv.nodes[j];
      xy[k] = {scale * (u + v), scale * (u - v)};
      weights(static_cast<Eigen::Index>(k)) = ru.weights[i] * rv.weights[j] / std::numbers::sqrt2;
    }
  }
  std::vector<std::pair<int, int>> lm;  // (rel level l, CM level m)
  for (int l : levels) {
    for (int m : levels) lm.emplace_back(l, m);
  }
  const Eigen::Index n_lm = static_cast<Eigen::Index>(lm.size());
  RMatrix basis(n_pts, n_lm);
  for (Eigen::Index k = 0; k < n_pts; ++k) {
    const auto [x, y] = xy[static_cast<std::size_t>(k)];
    for (Eigen::Index a = 0; a < n_lm; ++a) {
      basis(k, a) = basis_wavefunction(lm[a].first, lm[a].second, x, y);
    }
  }
  const RMatrix weighted = weights.asDiagonal() * basis;
  const RMatrix gram = weighted.transpose() * basis;
  const double norm_error = (gram - RMatrix::Identity(n_lm, n_lm)).cwiseAbs().maxCoeff();

  std::vector<double> errors(c.t_grid.size());
  parallel_for(c.t_grid.size(), c.jobs, [&](std::size_t ti) {
    const double t = c.t_grid[ti];
    CMatrix evolved(n_pts, n_lm);
    for (Eigen::Index k = 0; k < n_pts; ++k) {
      const auto [x, y] = xy[static_cast<std::size_t>(k)];
      for (Eigen::Index a = 0; a < n_lm; ++a) {
        evolved(k, a) = evolve_basis_closed_form(lm[a].first, lm[a].second, t, x, y);
      }
    }
    const CMatrix overlaps = weighted.transpose().cast<Complex>() * evolved;
    const PropagatorMatrix prop = propagator_matrix(t, dims);
    double err = 0.0;
    for (Eigen::Index a = 0; a < n_lm; ++a) {
      for (Eigen::Index b = 0; b < n_lm; ++b) {
        const Complex entry = prop.U.entries(dims.index(lm[a].second, lm[a].first),
                                             dims.index(lm[b].second, lm[b].first));
        err = std::max(err, std::abs(overlaps(a, b) - entry));
      }
    }
    errors[ti] = err;
  });

  ScenarioOutcome out;
  out.metrics["max_overlap_error"] = max_of(errors);
  out.metrics["basis_norm_error"] = norm_error;
  out.metrics["quadrature_points"] = static_cast<double>(n_pts);
  out.checks = {{"max_overlap_error", Bound::at_most, 1e-5},
                {"basis_norm_error", Bound::at_most, 1e-10}};
  return out;
}

// ----------------------------------------------------- corollary1-crosscheck

void corollary1_defaults(ScenarioConfig& c) {
  fill(c.d_cm, 64);
  fill(c.d_rel, 16);
  fill(c.alpha_list, {Complex(0.5, 0.0)});
  fill(c.beta_list, {Complex(0.0, 0.8)});
  fill(c.t_grid, {0.25, 0.5, 1.0});
  fill(c.grid_lo, -6.0);
  fill(c.grid_hi, 6.0);
  fill(c.grid_n, 121);
  require_dims(c);
  require_grid(c);
  require_finite(c.t_grid, "t_grid");
}

ScenarioOutcome run_corollary1(const ScenarioConfig& c) {
  const ModeDims dims = dims_of(c);
  const int n = *c.grid_n;
  const double step = n > 1 ? (*c.grid_hi - *c.grid_lo) / (n - 1) : 0.0;
  std::vector<double> axis(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) axis[static_cast<std::size_t>(i)] = *c.grid_lo + i * step;

  struct Case {
    Complex alpha, beta;
    double t;
  };
  std::vector<Case> cases;
  for (Complex a : c.alpha_list) {
    for (Complex b : c.beta_list) {
      for (double t : c.t_grid) cases.push_back({a, b, t});
    }
  }
  std::vector<double> sup(cases.size());
  std::vector<double> norm_err(cases.size());
  parallel_for(cases.size(), c.jobs, [&](std::size_t i) {
    const Case& k = cases[i];
    const TwoModeState state = two_mode_product_state(k.alpha, k.beta, dims);
    const TwoModeState evolved = apply(propagator_matrix(k.t, dims), state);
    const EvolvedGaussian g = evolve_product_state(k.alpha, k.beta, k.t);
    double worst = 0.0;
    for (double x : axis) {
      for (double y : axis) {
        worst = std::max(worst, std::abs(state_position_eval(evolved, x, y) -
                                         evolved_state_position(g, x, y)));
      }
    }
    sup[i] = worst;
    norm_err[i] = std::abs(evolved.norm() - 1.0);
  });

  // Initial synthesis and the lab-frame factorization, on the same grid.
  double initial = 0.0;
  double lab = 0.0;
  for (Complex a : c.alpha_list) {
    for (Complex b : c.beta_list) {
      const TwoModeState state = two_mode_product_state(a, b, dims);
      for (double x : axis) {
        for (double y : axis) {
          const Complex ref = product_state_position(a, b, x, y);
          initial = std::max(initial, std::abs(state_position_eval(state, x, y) - ref));
          lab = std::max(lab, std::abs(product_state_position_lab(a, b, x, y) - ref));
        }
      }
    }
  }

  // Kernel route at a few points for the first case, on a smaller CM truncation.
  const Case& first = cases.front();
  const ModeDims kdims{std::min(*c.d_cm, 24), *c.d_rel};
  const TwoModeState kstate = two_mode_product_state(first.alpha, first.beta, kdims);
  const EvolvedGaussian kg = evolve_product_state(first.alpha, first.beta, first.t);
  const std::vector<std::pair<double, double>> kpoints = {{0.0, 0.0}, {0.7, -0.4}, {-1.1, 0.9}};
  std::vector<double> kerr(kpoints.size());
  parallel_for(kpoints.size(), c.jobs, [&](std::size_t i) {
    const auto [x, y] = kpoints[i];
    kerr[i] = std::abs(propagate_via_kernel(kstate, first.t, x, y) - evolved_state_position(kg, x, y));
  });

  ScenarioOutcome out;
  out.metrics["max_sup_error"] = max_of(sup);
  out.metrics["max_norm_error"] = max_of(norm_err);
  out.metrics["initial_synthesis_error"] = initial;
  out.metrics["lab_form_error"] = lab;
  out.metrics["kernel_route_error"] = max_of(kerr);
  out.checks = {{"max_sup_error", Bound::at_most, 1e-5},
                {"max_norm_error", Bound::at_most, 1e-10},
                {"initial_synthesis_error", Bound::at_most, 1e-8},
                {"lab_form_error", Bound::at_most, 1e-12},
                {"kernel_route_error", Bound::at_most, 1e-6}};
  return out;
}

// ---------------------------------------------------- resolution-of-identity

void resolution_defaults(ScenarioConfig& c) {
  fill(c.d_cm, 2);
  fill(c.d_rel, 8);
  fill(c.disk_radius, 8.0);
  fill(c.radial_nodes, 96);
  fill(c.angular_nodes, 4 * *c.d_rel);
  fill(c.control_angular_nodes, std::max(1, *c.d_rel / 2));
  require(*c.d_rel >= 1, "d_rel must be >= 1");
  require(*c.disk_radius > 0.0 && std::isfinite(*c.disk_radius), "disk_radius must be positive");
  require(*c.radial_nodes >= 2 && *c.angular_nodes >= 1 && *c.control_angular_nodes >= 1,
          "node counts must be positive");
}

ScenarioOutcome run_resolution(const ScenarioConfig& c) {
  const int d = *c.d_rel;
  const double R = *c.disk_radius;
  ScenarioOutcome out;
  const DiskRule rule = disk_rule(R, *c.radial_nodes, *c.angular_nodes);
  const DiskRule control = disk_rule(R, *c.radial_nodes, *c.control_angular_nodes);
  const DiskRule scalar = disk_rule(R, *c.radial_nodes, std::max(4, *c.angular_nodes));
  out.metrics["deviation"] = coherent_resolution_check(d, rule);
  out.metrics["control_deviation"] = coherent_resolution_deviation(d, control);
  out.metrics["scalar_deviation"] = coherent_resolution_check(1, scalar);
  out.checks = {{"deviation", Bound::at_most, 1e-8},
                {"control_deviation", Bound::at_least, 1e-3},
                {"scalar_deviation", Bound::at_most, 1e-10}};
  return out;
}

// ---------------------------------------------------------------- covariance

void covariance_defaults(ScenarioConfig& c) {
  fill(c.d_cm, 4);
  fill(c.d_rel, 12);
  fill(c.beta_list, {Complex(0.3, 0.0), Complex(1.5, 0.0), Complex(-0.7, 0.4), Complex(0.0, 1.1),
                     Complex(2.0, -1.0)});
  fill(c.t_grid, {0.0, 0.3, 0.7, 2.1, std::numbers::pi * std::numbers::sqrt2});
  require_dims(c);
  require_finite(c.t_grid, "t_grid");
}

ScenarioOutcome run_covariance(const ScenarioConfig& c) {
  const ModeDims dims = dims_of(c);
  const std::size_t nt = c.t_grid.size();
  const std::size_t total = c.beta_list.size() * nt;
  std::vector<double> cov(total);
  std::vector<double> proj(c.beta_list.size());
  parallel_for(total, c.jobs, [&](std::size_t i) {
    const Complex beta = c.beta_list[i / nt];
    cov[i] = covariance_defect(beta, c.t_grid[i % nt], dims);
  });
  parallel_for(c.beta_list.size(), c.jobs, [&](std::size_t i) {
    proj[i] = projection_defect(q_projector(c.beta_list[i], dims));
  });
  ScenarioOutcome out;
  out.metrics["max_covariance_defect"] = max_of(cov);
  out.metrics["max_projection_defect"] = max_of(proj);
  out.metrics["pairs"] = static_cast<double>(total);
  out.checks = {{"max_covariance_defect", Bound::at_most, 1e-10},
                {"max_projection_defect", Bound::at_most, 1e-12}};
  return out;
}

// --------------------------------------------------------------- graph-span

void span_defaults(ScenarioConfig& c) {
  fill(c.d_cm, 2);
  fill(c.d_rel, 4);
  fill(c.grid_lo, -1.5);
  fill(c.grid_hi, 1.5);
  fill(c.grid_n, 5);
  fill(c.r_grid, {0.3, 0.7, 1.1, 1.5, 1.9});
  fill(c.t_grid, {0.1, 0.5, 0.9, 1.3, 1.7});
  fill(c.phi_grid, {0.0, 0.37});
  require_dims(c);
  require_grid(c);
  require_finite(c.r_grid, "r_grid");
  require_finite(c.t_grid, "t_grid");
  require_finite(c.phi_grid, "phi_grid");
}

ScenarioOutcome run_graph_span(const ScenarioConfig& c) {
  const ModeDims dims = dims_of(c);
  const int expected = dims.d_rel * dims.d_rel;
  const auto grid_ops = projectors_for(grid_betas(*c.grid_lo, *c.grid_hi, *c.grid_n), dims);
  const GraphBasis basis = hs_orthonormalize(grid_ops);

  const std::vector<double>& s = basis.singular_values;
  double gap = 0.0;
  if (static_cast<int>(s.size()) > expected && expected >= 1) {
    gap = s[expected - 1] / std::max(s[expected], std::numeric_limits<double>::min());
  } else if (static_cast<int>(s.size()) == expected) {
    gap = std::numeric_limits<double>::max();
  }

  GraphSampleSpec extra{c.r_grid, {c.phi_grid.front()}, c.t_grid, dims};
  std::vector<TwoModeOperator> combined = grid_ops;
  for (auto& op : sample_graph(extra)) combined.push_back(std::move(op));
  const GraphBasis saturated = hs_orthonormalize(combined);
  const auto curve = rank_curve(combined);

  std::vector<GraphBasis> phi_bases(c.phi_grid.size());
  parallel_for(c.phi_grid.size(), c.jobs, [&](std::size_t i) {
    phi_bases[i] = hs_orthonormalize(sample_graph({c.r_grid, {c.phi_grid[i]}, c.t_grid, dims}));
  });
  double phi_residual = 0.0;
  int phi_min_rank = std::numeric_limits<int>::max();
  for (std::size_t i = 0; i < phi_bases.size(); ++i) {
    phi_min_rank = std::min(phi_min_rank, phi_bases[i].numerical_rank);
    for (std::size_t j = 0; j < phi_bases.size(); ++j) {
      if (i != j) phi_residual = std::max(phi_residual, subspace_residual(phi_bases[i], phi_bases[j]));
    }
  }

  ScenarioOutcome out;
  out.metrics["numerical_rank"] = basis.numerical_rank;
  out.metrics["sigma_gap"] = gap;
  out.metrics["saturated_rank"] = saturated.numerical_rank;
  out.metrics["added_samples"] = static_cast<double>(combined.size() - grid_ops.size());
  out.metrics["identity_residual"] = identity_residual(basis);
  out.metrics["phi_residual"] = phi_residual;
  out.metrics["phi_min_rank"] = phi_min_rank;
  out.checks = {{"numerical_rank", Bound::equals, static_cast<double>(expected)},
                {"sigma_gap", Bound::at_least, 1e6},
                {"saturated_rank", Bound::equals, static_cast<double>(expected)},
                {"identity_residual", Bound::at_most, 1e-8},
                {"phi_residual", Bound::at_most, 1e-8}};
  out.tables.push_back(sigma_table(basis.singular_values));
  Table rv{"rank_vs_samples.csv", {"n_samples", "rank"}, {}};
  for (const auto& [n, r] : curve) rv.rows.push_back({static_cast<double>(n), static_cast<double>(r)});
  out.tables.push_back(std::move(rv));
  return out;
}

// ------------------------------------------------------- identity-membership

void membership_defaults(ScenarioConfig& c) {
  span_defaults(c);
  fill(c.beta_list, {Complex(0.7, -0.2)});
}

ScenarioOutcome run_membership(const ScenarioConfig& c) {
  const ModeDims dims = dims_of(c);
  const GraphBasis basis = grid_basis(c, dims);
  const auto single_ops = projectors_for(std::span<const Complex>(c.beta_list.data(), 1), dims);
  const GraphBasis single = hs_orthonormalize(single_ops);
  const double single_res = identity_residual(single);
  ScenarioOutcome out;
  out.metrics["numerical_rank"] = basis.numerical_rank;
  out.metrics["identity_residual"] = identity_residual(basis);
  out.metrics["single_q_residual"] = single_res;
  out.metrics["single_q_formula_error"] = std::abs(single_res - std::sqrt(1.0 - 1.0 / dims.d_rel));
  out.checks = {{"identity_residual", Bound::at_most, 1e-8},
                {"single_q_residual", Bound::at_least, 0.8},
                {"single_q_formula_error", Bound::at_most, 1e-12}};
  out.tables.push_back(sigma_table(basis.singular_values));
  return out;
}

// ---------------------------------------------------------------- anticlique

void anticlique_defaults(ScenarioConfig& c) {
  fill(c.d_cm, 3);
  fill(c.d_rel, 4);
  fill(c.K, *c.d_cm);
  fill(c.grid_lo, -1.5);
  fill(c.grid_hi, 1.5);
  fill(c.grid_n, 5);
  fill(c.d_rel_lambda, 24);
  fill(c.t_grid, {0.0, 0.4, 1.3});
  require_dims(c);
  require_grid(c);
  require_finite(c.t_grid, "t_grid");
  require(*c.K >= 2 && *c.K <= *c.d_cm, "K must lie in [2, d_cm]");
  require(*c.d_rel_lambda >= 2, "d_rel_lambda must be >= 2");
  g0_vector(c, *c.d_rel);
}

ScenarioOutcome run_anticlique(const ScenarioConfig& c) {
  const ModeDims dims = dims_of(c);
  const AnticliqueSpec spec = anticlique_spec(c);
  const TwoModeOperator P = anticlique_projector(spec);
  const auto betas = grid_betas(*c.grid_lo, *c.grid_hi, *c.grid_n);
  const auto ops = projectors_for(betas, dims);
  const GraphBasis basis = hs_orthonormalize(ops);

  std::vector<LabeledOperator> generators;
  for (std::size_t i = 0; i < betas.size(); ++i) {
    generators.push_back({"beta[" + format_complex(betas[i]) + "]", ops[i]});
  }
  const CompressionReport report = compression_dimension(P, basis, kDefaultCompressionTol, generators);

  double lambda_err = 0.0;
  for (std::size_t i = 0; i < betas.size(); ++i) {
    const CVector b = coherent_fock(betas[i], dims.d_rel, true).coefficients;
    const double expected = std::norm(b.dot(spec.g0));
    lambda_err = std::max(lambda_err, std::abs(report.coefficients.at(generators[i].label) - expected));
  }

  ScenarioOutcome out;
  out.checks = {{"compression_rank", Bound::equals, 1},
                {"sigma_ratio", Bound::at_most, 1e-8},
                {"max_lambda_error", Bound::at_most, 1e-10},
                {"max_kl_defect", Bound::at_most, 1e-10},
                {"wrong_assignment_rank", Bound::at_least, 2}};

  if (c.g0.empty()) {
    // Vacuum g0: lambda = e^{-|beta|^2} along each orbit, on a large relative truncation.
    const ModeDims big{2, *c.d_rel_lambda};
    const TwoModeOperator P_big = anticlique_projector(AnticliqueSpec::vacuum(big));
    std::vector<double> errs(betas.size() * c.t_grid.size());
    parallel_for(errs.size(), c.jobs, [&](std::size_t i) {
      const Complex beta = betas[i / c.t_grid.size()];
      const double t = c.t_grid[i % c.t_grid.size()];
      const Complex rotated = beta * std::exp(Complex(0.0, -std::numbers::sqrt2 * t));
      const Complex lambda = kl_scalar_check(P_big, q_projector(rotated, big)).lambda;
      errs[i] = std::abs(lambda - std::exp(-std::norm(beta)));
    });
    out.metrics["vacuum_lambda_error"] = max_of(errs);
    out.checks.push_back({"vacuum_lambda_error", Bound::at_most, 1e-10});
  }

  // The same construction with g0 placed on the CM factor is not an anticlique.
  const int k_wrong = std::min(*c.K, dims.d_rel);
  CMatrix pi_rel = CMatrix::Zero(dims.d_rel, dims.d_rel);
  for (int k = 0; k < k_wrong; ++k) pi_rel(k, k) = 1.0;
  CMatrix vac_cm = CMatrix::Zero(dims.d_cm, dims.d_cm);
  vac_cm(0, 0) = 1.0;
  TwoModeOperator wrong;
  wrong.dims = dims;
  wrong.hermitian_flag = true;
  wrong.entries = kron(vac_cm, pi_rel);
  const int wrong_rank = compression_dimension(wrong, basis).numerical_rank;

  out.metrics["compression_rank"] = report.numerical_rank;
  out.metrics["sigma_ratio"] = report.sigma_ratio();
  out.metrics["max_lambda_error"] = lambda_err;
  out.metrics["max_kl_defect"] = report.max_defect;
  out.metrics["graph_rank"] = basis.numerical_rank;
  out.metrics["wrong_assignment_rank"] = wrong_rank;

  Json doc;
  doc["rank"] = report.numerical_rank;
  doc["sigmas"] = report.singular_values;
  doc["lambda_by_sample"] = Json::object();
  for (const auto& g : generators) doc["lambda_by_sample"][g.label] = report.coefficients.at(g.label);
  doc["max_defect"] = report.max_defect;
  out.documents["compression.json"] = std::move(doc);
  out.tables.push_back(sigma_table(basis.singular_values));
  return out;
}

// ---------------------------------------------------------------- maximality

void maximality_defaults(ScenarioConfig& c) {
  fill(c.d_cm, 2);
  fill(c.d_rel, 6);
  fill(c.K, *c.d_cm);
  fill(c.grid_lo, -2.0);
  fill(c.grid_hi, 2.0);
  fill(c.grid_n, 7);
  fill(c.n_probes, 64);
  fill(c.probe_levels, {1, 2, 3, 4, 5});
  require_dims(c);
  require_grid(c);
  require(*c.n_probes >= 0, "n_probes must be >= 0");
  require(*c.K >= 2 && *c.K <= *c.d_cm, "K must lie in [2, d_cm]");
  for (int level : c.probe_levels) {
    require(level >= 0 && level < *c.d_rel, "probe_levels must lie below d_rel");
  }
  g0_vector(c, *c.d_rel);
}

ScenarioOutcome run_maximality(const ScenarioConfig& c) {
  const ModeDims dims = dims_of(c);
  const AnticliqueSpec spec = anticlique_spec(c);
  const TwoModeOperator P = anticlique_projector(spec);
  const GraphBasis basis = grid_basis(c, dims);
  const auto structured = structured_probes(spec, c.probe_levels);
  const MaximalityReport rep = maximality_probe(P, basis, *c.n_probes, c.seed.value_or(0), structured);
  const CompressionReport base = compression_dimension(P, basis);

  ScenarioOutcome out;
  out.metrics["min_probe_rank"] = rep.min_rank;
  out.metrics["min_sigma_ratio"] = rep.min_sigma_ratio;
  out.metrics["anticlique_rank"] = base.numerical_rank;
  out.metrics["probes_evaluated"] = static_cast<double>(rep.probes.size());
  out.metrics["graph_rank"] = basis.numerical_rank;
  out.checks = {{"min_probe_rank", Bound::at_least, 2},
                {"min_sigma_ratio", Bound::at_least, 1e-2},
                {"anticlique_rank", Bound::equals, 1}};
  Json doc;
  doc["label"] = rep.weakest.label;
  doc["rank"] = rep.weakest.rank;
  doc["sigma_ratio"] = rep.weakest.sigma_ratio;
  doc["d_cm"] = dims.d_cm;
  doc["d_rel"] = dims.d_rel;
  doc["state"] = state_json(rep.weakest.witness);
  out.documents["probe_witness.json"] = std::move(doc);
  return out;
}

// ---------------------------------------------------------------- error-demo

void error_demo_defaults(ScenarioConfig& c) {
  fill(c.d_cm, 6);
  fill(c.d_rel, 12);
  fill(c.K, 4);
  fill(c.t_grid, {0.25, 0.5, 1.0});
  fill(c.beta_list, {Complex(0.5, 0.0), Complex(1.0, 0.5), Complex(0.0, -0.8)});
  require_dims(c);
  require_finite(c.t_grid, "t_grid");
  require(*c.K >= 2 && *c.K <= *c.d_cm, "K must lie in [2, d_cm]");
  g0_vector(c, *c.d_rel);
}

ScenarioOutcome run_error_demo(const ScenarioConfig& c) {
  const AnticliqueSpec spec = anticlique_spec(c);
  const std::size_t nb = c.beta_list.size();
  const std::size_t total = c.t_grid.size() * nb;
  struct Point {
    double offdiag = 0.0;
    double success = 0.0;
    double spread = 0.0;
    double trace_mismatch = 0.0;
    bool degenerate = false;
  };
  std::vector<Point> pts(total);
  parallel_for(total, c.jobs, [&](std::size_t i) {
    const double t = c.t_grid[i / nb];
    const Complex beta = c.beta_list[i % nb];
    Point& p = pts[i];
    CodeCheck check;
    try {
      check = code_orthogonality_check(spec, t, beta);
    } catch (const DegenerateCodeError&) {
      p.degenerate = true;
      return;
    }
    p.offdiag = check.max_offdiag;
    const auto [lo, hi] = std::minmax_element(check.diagonals.begin(), check.diagonals.end());
    p.success = *lo;
    p.spread = *hi - *lo;
    CVector phi = CVector::Zero(spec.dims.d_cm);
    phi(0) = 1.0;
    const CVector eta = kron(phi, spec.g0);
    TwoModeOperator rho;
    rho.dims = spec.dims;
    rho.hermitian_flag = true;
    rho.entries = eta * eta.adjoint();
    const double trace = elementary_error(rho, t, beta, spec.dims).entries.trace().real();
    p.trace_mismatch = std::abs(trace - check.diagonals.front());
  });
  double offdiag = 0.0;
  double success = std::numeric_limits<double>::max();
  double spread = 0.0;
  double mismatch = 0.0;
  int degenerate = 0;
  for (const Point& p : pts) {
    if (p.degenerate) {
      ++degenerate;
      continue;
    }
    offdiag = std::max(offdiag, p.offdiag);
    success = std::min(success, p.success);
    spread = std::max(spread, p.spread);
    mismatch = std::max(mismatch, p.trace_mismatch);
  }
  if (degenerate == static_cast<int>(total)) success = 0.0;
  ScenarioOutcome out;
  out.metrics["max_offdiag"] = offdiag;
  out.metrics["min_success_probability"] = success;
  out.metrics["max_diag_spread"] = spread;
  out.metrics["max_trace_mismatch"] = mismatch;
  out.metrics["degenerate_points"] = degenerate;
  out.metrics["points"] = static_cast<double>(total);
  out.checks = {{"max_offdiag", Bound::at_most, 1e-10},
                {"min_success_probability", Bound::at_least, 1e-6},
                {"max_diag_spread", Bound::at_most, 1e-10},
                {"max_trace_mismatch", Bound::at_most, 1e-12},
                {"degenerate_points", Bound::equals, 0}};
  return out;
}

// ------------------------------------------------------------------ registry

struct Entry {
  std::string name;
  std::vector<std::string> tol_keys;
  std::function<void(ScenarioConfig&)> defaults;
  std::function<ScenarioOutcome(const ScenarioConfig&)> run;
};

const std::vector<Entry>& registry() {
  static const std::vector<Entry> entries = {
      {"eigencheck", {"max_abs_error", "n_checked"}, eigencheck_defaults, run_eigencheck},
      {"lemma1",
       {"calibration_error", "max_scaled_error", "convergence_failures"},
       lemma1_defaults,
       run_lemma1},
      {"prop1-crosscheck", {"max_overlap_error", "basis_norm_error"}, prop1_defaults, run_prop1},
      {"corollary1-crosscheck",
       {"max_sup_error", "max_norm_error", "initial_synthesis_error", "lab_form_error",
        "kernel_route_error"},
       corollary1_defaults,
       run_corollary1},
      {"resolution-of-identity",
       {"deviation", "control_deviation", "scalar_deviation"},
       resolution_defaults,
       run_resolution},
      {"covariance",
       {"max_covariance_defect", "max_projection_defect"},
       covariance_defaults,
       run_covariance},
      {"graph-span",
       {"numerical_rank", "sigma_gap", "saturated_rank", "identity_residual", "phi_residual"},
       span_defaults,
       run_graph_span},
      {"identity-membership",
       {"identity_residual", "single_q_residual", "single_q_formula_error"},
       membership_defaults,
       run_membership},
      {"anticlique",
       {"compression_rank", "sigma_ratio", "max_lambda_error", "max_kl_defect",
        "vacuum_lambda_error", "wrong_assignment_rank"},
       anticlique_defaults,
       run_anticlique},
      {"maximality",
       {"min_probe_rank", "min_sigma_ratio", "anticlique_rank"},
       maximality_defaults,
       run_maximality},
      {"error-demo",
       {"max_offdiag", "min_success_probability", "max_diag_spread", "max_trace_mismatch",
        "degenerate_points"},
       error_demo_defaults,
       run_error_demo},
  };
  return entries;
}

const Entry& entry_for(const std::string& name) {
  for (const auto& e : registry()) {
    if (e.name == name) return e;
  }
  throw ConfigError("unknown scenario '" + name + "'");
}

}  // namespace

const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& e : registry()) out.push_back(e.name);
    return out;
  }();
  return names;
}

bool is_scenario(const std::string& name) {
  const auto& names = scenario_names();
  return std::find(names.begin(), names.end(), name) != names.end();
}

std::vector<std::string> tolerance_keys(const std::string& scenario) {
  return entry_for(scenario).tol_keys;
}

ScenarioConfig resolve_defaults(const ScenarioConfig& config) {
  ScenarioConfig resolved = config;
  entry_for(config.scenario).defaults(resolved);
  return resolved;
}

ScenarioOutcome execute_scenario(const ScenarioConfig& resolved) {
  const Entry& e = entry_for(resolved.scenario);
  try {
    return e.run(resolved);
  } catch (const std::invalid_argument& err) {
    throw ConfigError(resolved.scenario + ": " + err.what());
  }
}

}  // namespace oscgraph::report
