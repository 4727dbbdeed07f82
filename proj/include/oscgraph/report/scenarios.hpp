#pragma once

#include <map>
#include <string>
#include <vector>

#include "oscgraph/report/report.hpp"

namespace oscgraph::report {

struct ScenarioOutcome {
  std::map<std::string, double> metrics;
  std::vector<Check> checks;
  std::vector<Table> tables;
  std::map<std::string, nlohmann::ordered_json> documents;
};

const std::vector<std::string>& scenario_names();
bool is_scenario(const std::string& name);

/// Metric names that accept a tol.<name> override for this scenario.
std::vector<std::string> tolerance_keys(const std::string& scenario);

/// Copy of config with every unset parameter filled from the scenario
/// defaults and the cross-field preconditions checked (throws ConfigError).
ScenarioConfig resolve_defaults(const ScenarioConfig& config);

/// Runs a resolved config; checks carry default limits before overrides.
ScenarioOutcome execute_scenario(const ScenarioConfig& resolved);

}  // namespace oscgraph::report
