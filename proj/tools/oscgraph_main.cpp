// oscgraph: batch runner for the verification scenarios.
//
// Exit codes: 0 all checks pass, 1 a check failed, 2 usage/config error.

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "oscgraph/report/report.hpp"
#include "oscgraph/report/scenarios.hpp"

namespace {

using namespace oscgraph::report;

const char* bound_symbol(Bound b) {
  switch (b) {
    case Bound::at_most:
      return "<=";
    case Bound::at_least:
      return ">=";
    case Bound::equals:
      return "==";
  }
  return "?";
}

void print_summary(const Report& report) {
  std::cerr << report.scenario << ": " << (report.pass ? "PASS" : "FAIL") << " ("
            << report.runtime_ms << " ms, seed " << report.seed << ")\n";
  for (const auto& r : report.checks) {
    std::cerr << "  " << (r.ok ? "ok  " : "FAIL") << " " << r.check.metric << " = "
              << format_double(r.value) << " " << bound_symbol(r.check.kind) << " "
              << format_double(r.check.limit) << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Truncated Fock-space checks for the two-mode coupled oscillator graph"};
  app.set_version_flag("--version", "oscgraph 0.1.0");

  std::string scenario;
  std::string config_path;
  std::string replay_path;
  std::string out_path;
  std::string csv_dir;
  int d_cm = 0;
  int d_rel = 0;
  std::uint64_t seed = 0;
  int jobs = 1;
  bool deterministic = true;
  bool list = false;
  std::vector<std::string> sets;

  app.add_option("scenario", scenario, "Scenario name (see --list)");
  app.add_option("--config", config_path, "Key-value config file")->check(CLI::ExistingFile);
  app.add_option("--replay", replay_path, "Re-run from a report's params echo")
      ->check(CLI::ExistingFile)
      ->excludes("--config");
  auto* d_cm_opt = app.add_option("--d-cm", d_cm, "CM truncation");
  auto* d_rel_opt = app.add_option("--d-rel", d_rel, "Relative truncation");
  app.add_option("--out", out_path, "Report JSON path (default: stdout)");
  app.add_option("--csv-dir", csv_dir, "Directory for CSV and JSON side files");
  auto* seed_opt = app.add_option("--seed", seed, "RNG seed");
  auto* det_opt = app.add_flag("--deterministic,!--no-deterministic", deterministic,
                               "Deterministic mode (default on)");
  auto* jobs_opt = app.add_option("--jobs", jobs, "Worker threads for grid points")
                       ->check(CLI::PositiveNumber);
  app.add_option("--set", sets, "Override any config key: key=value")->take_all();
  app.add_flag("--list", list, "List scenarios and exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (list) {
    for (const auto& name : scenario_names()) std::cout << name << "\n";
    return 0;
  }

  try {
    ScenarioConfig config;
    if (!replay_path.empty()) {
      config = config_from_report_file(replay_path);
    } else if (!config_path.empty()) {
      config = load_config_file(config_path);
    }
    if (!scenario.empty()) config.scenario = scenario;
    if (config.scenario.empty()) throw ConfigError("no scenario given (see --list)");
    if (*d_cm_opt) config.d_cm = d_cm;
    if (*d_rel_opt) config.d_rel = d_rel;
    if (*seed_opt) config.seed = seed;
    if (*det_opt) config.deterministic = deterministic;
    if (*jobs_opt) config.jobs = jobs;
    for (const auto& kv : sets) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + kv + "'");
      set_config_value(config, kv.substr(0, eq), kv.substr(eq + 1));
    }

    const Report report = run_scenario(config);
    if (out_path.empty()) {
      std::cout << report.to_json().dump(2) << "\n";
    } else {
      write_report(report, out_path);
    }
    if (!csv_dir.empty()) write_side_files(report, csv_dir);
    print_summary(report);
    return report.pass ? 0 : 1;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
