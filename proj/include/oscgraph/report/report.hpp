#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "oscgraph/report/config.hpp"

namespace oscgraph::report {

enum class Bound { at_most, at_least, equals };

struct Check {
  std::string metric;  // also the tolerance key: tol.<metric>
  Bound kind = Bound::at_most;
  double limit = 0.0;
};

struct CheckResult {
  Check check;
  double value = 0.0;
  bool ok = false;
};

/// Plot-ready table written as <csv-dir>/<filename>.
struct Table {
  std::string filename;
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

struct Report {
  std::string scenario;
  nlohmann::ordered_json params;  // resolved config, key -> config text
  std::map<std::string, double> metrics;
  bool pass = false;
  double runtime_ms = 0.0;
  nlohmann::ordered_json versions;
  std::uint64_t seed = 0;

  // Side outputs, not part of the JSON document.
  std::vector<CheckResult> checks;
  std::vector<Table> tables;
  std::map<std::string, nlohmann::ordered_json> documents;  // filename -> JSON

  nlohmann::ordered_json to_json() const;
};

bool evaluate(const Check& check, double value);

/// Validates the config, fills scenario defaults, runs, and grades the
/// metrics. Config problems throw ConfigError; failed checks set pass = false.
Report run_scenario(const ScenarioConfig& config);

/// Config rebuilt from a report's params echo.
ScenarioConfig config_from_params(const nlohmann::json& params);
ScenarioConfig config_from_report_file(const std::string& path);

void write_report(const Report& report, const std::string& path);
/// Writes every table as CSV and every document as JSON into dir.
void write_side_files(const Report& report, const std::string& dir);

std::string csv_text(const Table& table);

nlohmann::ordered_json version_info();

}  // namespace oscgraph::report
