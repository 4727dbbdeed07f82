#pragma once

// Scenario configuration: flat `key = value` text, `#` comments, lists
// comma-separated, complex numbers written as "re+imj" (also "2j", "-0.5").
//
// Recognized keys:
//   scenario, d_cm, d_rel, K, t_grid, r_grid, phi_grid, beta_list,
//   alpha_list, n_list, x_list, g0 ("vacuum" or a complex list), seed,
//   deterministic, jobs, n_probes, probe_levels, grid_lo, grid_hi, grid_n,
//   disk_radius, radial_nodes, angular_nodes, control_angular_nodes,
//   d_rel_lambda, tol.<metric>

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "oscgraph/fock.hpp"

namespace oscgraph::report {

/// Usage or configuration problem; maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ScenarioConfig {
  std::string scenario;
  std::optional<int> d_cm;
  std::optional<int> d_rel;
  std::optional<int> K;
  std::vector<double> t_grid;
  std::vector<double> r_grid;
  std::vector<double> phi_grid;
  std::vector<Complex> beta_list;
  std::vector<Complex> alpha_list;
  std::vector<int> n_list;
  std::vector<double> x_list;
  std::vector<Complex> g0;  // empty means vacuum
  std::map<std::string, double> tolerances;
  std::optional<std::uint64_t> seed;
  bool deterministic = true;
  int jobs = 1;

  std::optional<int> n_probes;
  std::vector<int> probe_levels;
  std::optional<double> grid_lo;
  std::optional<double> grid_hi;
  std::optional<int> grid_n;
  std::optional<double> disk_radius;
  std::optional<int> radial_nodes;
  std::optional<int> angular_nodes;
  std::optional<int> control_angular_nodes;
  std::optional<int> d_rel_lambda;
};

Complex parse_complex(const std::string& text);
std::string format_complex(Complex z);
std::string format_double(double x);

/// Applies one key/value pair; unknown keys and malformed values throw ConfigError.
void set_config_value(ScenarioConfig& config, const std::string& key, const std::string& value);

ScenarioConfig parse_config_text(const std::string& text);
ScenarioConfig load_config_file(const std::string& path);

/// Every set field as key -> value text in the same syntax the parser reads.
std::map<std::string, std::string> to_key_values(const ScenarioConfig& config);

}  // namespace oscgraph::report
