// Acceptance run: one PASS/FAIL line per criterion, exit status 1 on any FAIL.
#include <chrono>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "oscgraph/report/report.hpp"
#include "oscgraph/report/scenarios.hpp"

using namespace oscgraph::report;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
};

void require(Outcome& o, bool cond, const std::string& what) {
  if (!cond) {
    o.ok = false;
    o.detail += (o.detail.empty() ? "" : "; ") + what;
  }
}

double metric(const Report& r, const std::string& name) {
  const auto it = r.metrics.find(name);
  return it == r.metrics.end() ? std::numeric_limits<double>::quiet_NaN() : it->second;
}

Report run(const std::string& text) { return run_scenario(parse_config_text(text)); }

std::map<std::string, Report> g_first_runs;

Report run_default(const std::string& scenario) {
  Report r = run("scenario = " + scenario + "\n");
  g_first_runs.emplace(scenario, r);
  return r;
}

Outcome eigenvalues() {
  Outcome o;
  const Report r = run_default("eigencheck");
  require(o, r.pass, "scenario checks failed");
  require(o, metric(r, "max_abs_error") <= 1e-10, "eigenvalue error above 1e-10");
  require(o, metric(r, "n_checked") >= 13, "fewer than 13 levels checked");
  return o;
}

Outcome fresnel_identity() {
  Outcome o;
  const Report r = run_default("lemma1");
  require(o, r.pass, "scenario checks failed");
  require(o, metric(r, "calibration_error") <= 1e-7, "n = 0 calibration above tolerance");
  require(o, metric(r, "max_scaled_error") <= 1e-7, "scaled error above 1e-7");
  require(o, metric(r, "points") == 60, "expected 60 grid points");
  return o;
}

Outcome propagator_crosscheck() {
  Outcome o;
  const Report p = run_default("prop1-crosscheck");
  const Report c = run_default("corollary1-crosscheck");
  require(o, p.pass && c.pass, "scenario checks failed");
  require(o, metric(p, "max_overlap_error") <= 1e-5, "basis overlap error above 1e-5");
  require(o, metric(c, "max_sup_error") <= 1e-5, "position sup error above 1e-5");
  return o;
}

Outcome projection_covariance() {
  Outcome o;
  const Report r = run_default("covariance");
  require(o, r.pass, "scenario checks failed");
  require(o, metric(r, "max_projection_defect") <= 1e-12, "projection defect above 1e-12");
  require(o, metric(r, "max_covariance_defect") <= 1e-10, "covariance defect above 1e-10");
  return o;
}

Outcome resolution() {
  Outcome o;
  const Report r = run_default("resolution-of-identity");
  require(o, r.pass, "scenario checks failed");
  require(o, metric(r, "deviation") <= 1e-8, "deviation above 1e-8");
  require(o, metric(r, "control_deviation") > 1e-3, "negative control did not fail");
  return o;
}

Outcome graph_span() {
  Outcome o;
  const Report r = run_default("graph-span");
  const Report m = run_default("identity-membership");
  require(o, r.pass && m.pass, "scenario checks failed");
  require(o, metric(r, "numerical_rank") == 16, "rank is not 16");
  require(o, metric(r, "sigma_gap") >= 1e6, "sigma_16/sigma_17 below 1e6");
  require(o, metric(r, "saturated_rank") == 16, "rank grew with extra samples");
  require(o, metric(r, "identity_residual") <= 1e-8, "identity residual above 1e-8");
  require(o, metric(r, "phi_residual") <= 1e-8, "phi residual above 1e-8");
  return o;
}

Outcome anticlique() {
  Outcome o;
  const Report r = run_default("anticlique");
  require(o, r.pass, "scenario checks failed");
  require(o, metric(r, "compression_rank") == 1, "compression rank is not 1");
  require(o, metric(r, "sigma_ratio") <= 1e-8, "sigma_2/sigma_1 above 1e-8");
  require(o, metric(r, "max_lambda_error") <= 1e-10, "lambda error above 1e-10");
  require(o, metric(r, "vacuum_lambda_error") <= 1e-10, "vacuum lambda error above 1e-10");
  return o;
}

Outcome maximality() {
  Outcome o;
  const Report r = run_default("maximality");
  require(o, r.pass, "scenario checks failed");
  require(o, metric(r, "probes_evaluated") >= 69, "fewer than 64 random plus 5 structured probes");
  require(o, metric(r, "min_probe_rank") >= 2, "a probe kept compression rank 1");
  require(o, metric(r, "min_sigma_ratio") >= 1e-2, "sigma_2/sigma_1 below 1e-2");
  return o;
}

Outcome error_demo() {
  Outcome o;
  const Report r = run_default("error-demo");
  require(o, r.pass, "scenario checks failed");
  require(o, metric(r, "max_offdiag") <= 1e-10, "off-diagonal above 1e-10");
  require(o, metric(r, "min_success_probability") > 1e-6, "success probability at or below 1e-6");
  return o;
}

Outcome determinism() {
  Outcome o;
  for (const std::string& name : scenario_names()) {
    auto it = g_first_runs.find(name);
    const Report first = it != g_first_runs.end() ? it->second : run_default(name);
    const Report again = run("scenario = " + name + "\n");
    require(o, again.metrics == first.metrics, name + ": rerun differs");
    const Report replay = run_scenario(config_from_params(first.params));
    require(o, replay.metrics == first.metrics, name + ": replay differs");
  }
  for (const char* name : {"graph-span", "maximality", "covariance"}) {
    const Report one = run("scenario = " + std::string(name) + "\njobs = 1\n");
    const Report four = run("scenario = " + std::string(name) + "\njobs = 4\n");
    require(o, one.metrics == four.metrics, std::string(name) + ": --jobs changes metrics");
  }
  return o;
}

struct Criterion {
  int id;
  const char* name;
  double limit_s;  // <= 0: no runtime limit
  std::function<Outcome()> body;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "relative-oscillator eigenvalues", 1.0, eigenvalues},
      {2, "Fresnel-Hermite identity", 30.0, fresnel_identity},
      {3, "propagator cross-check", 300.0, propagator_crosscheck},
      {4, "projection and covariance", 30.0, projection_covariance},
      {5, "resolution of identity", 10.0, resolution},
      {6, "graph span", 60.0, graph_span},
      {7, "anticlique", 60.0, anticlique},
      {8, "maximality", 120.0, maximality},
      {9, "error-correction demo", 30.0, error_demo},
      {10, "determinism", 0.0, determinism},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      o = c.body();
    } catch (const std::exception& e) {
      o.ok = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.limit_s > 0 && seconds >= c.limit_s) {
      require(o, false, "runtime limit exceeded");
    }
    if (!o.ok) ++failures;
    std::printf("%s criterion %d (%s): %.3f s%s%s\n", o.ok ? "PASS" : "FAIL", c.id, c.name, seconds,
                c.limit_s > 0 ? "" : " (no limit)", o.detail.empty() ? "" : (" - " + o.detail).c_str());
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
