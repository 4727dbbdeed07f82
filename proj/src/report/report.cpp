#include "oscgraph/report/report.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "oscgraph/report/scenarios.hpp"

namespace oscgraph::report {

namespace {

constexpr const char* kVersion = "0.1.0";

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out << text;
  if (!out) throw ConfigError("write failed for '" + path + "'");
}

}  // namespace

nlohmann::ordered_json version_info() {
  nlohmann::ordered_json v;
  v["oscgraph"] = kVersion;
  v["eigen"] = std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) +
               "." + std::to_string(EIGEN_MINOR_VERSION);
  v["nlohmann_json"] = std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                       std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                       std::to_string(NLOHMANN_JSON_VERSION_PATCH);
#if defined(__VERSION__)
  v["compiler"] = __VERSION__;
#endif
  v["cxx_standard"] = static_cast<long>(__cplusplus);
  return v;
}

nlohmann::ordered_json Report::to_json() const {
  nlohmann::ordered_json j;
  j["scenario"] = scenario;
  j["params"] = params;
  j["metrics"] = nlohmann::ordered_json::object();
  for (const auto& [name, value] : metrics) j["metrics"][name] = value;
  j["pass"] = pass;
  j["runtime_ms"] = runtime_ms;
  j["versions"] = versions;
  j["seed"] = seed;
  return j;
}

bool evaluate(const Check& check, double value) {
  switch (check.kind) {
    case Bound::at_most:
      return value <= check.limit;
    case Bound::at_least:
      return value >= check.limit;
    case Bound::equals:
      return value == check.limit;
  }
  return false;
}

Report run_scenario(const ScenarioConfig& config) {
  if (!is_scenario(config.scenario)) {
    throw ConfigError("unknown scenario '" + config.scenario + "'");
  }
  const auto known = tolerance_keys(config.scenario);
  for (const auto& [name, value] : config.tolerances) {
    if (std::find(known.begin(), known.end(), name) == known.end()) {
      throw ConfigError("unknown tolerance key 'tol." + name + "' for scenario " + config.scenario);
    }
    if (!std::isfinite(value)) throw ConfigError("tolerance tol." + name + " is not finite");
  }

  ScenarioConfig resolved = resolve_defaults(config);
  if (!resolved.seed) {
    resolved.seed = resolved.deterministic ? 0 : std::random_device{}();
  }

  Report report;
  report.scenario = resolved.scenario;
  report.seed = *resolved.seed;
  report.versions = version_info();
  report.params = nlohmann::ordered_json::object();
  for (const auto& [key, value] : to_key_values(resolved)) report.params[key] = value;

  const auto start = std::chrono::steady_clock::now();
  ScenarioOutcome outcome = execute_scenario(resolved);
  const auto stop = std::chrono::steady_clock::now();
  report.runtime_ms = std::chrono::duration<double, std::milli>(stop - start).count();

  report.metrics = std::move(outcome.metrics);
  report.tables = std::move(outcome.tables);
  report.documents = std::move(outcome.documents);
  report.pass = true;
  for (Check check : outcome.checks) {
    if (auto it = resolved.tolerances.find(check.metric); it != resolved.tolerances.end()) {
      check.limit = it->second;
    }
    CheckResult result;
    result.check = check;
    auto m = report.metrics.find(check.metric);
    result.value = m == report.metrics.end() ? std::nan("") : m->second;
    result.ok = m != report.metrics.end() && evaluate(check, result.value);
    report.pass = report.pass && result.ok;
    report.checks.push_back(result);
  }
  for (const auto& [name, value] : report.metrics) {
    if (!std::isfinite(value)) report.pass = false;
  }
  return report;
}

ScenarioConfig config_from_params(const nlohmann::json& params) {
  if (!params.is_object()) throw ConfigError("params echo must be a JSON object");
  ScenarioConfig config;
  for (const auto& [key, value] : params.items()) {
    if (!value.is_string()) throw ConfigError("params." + key + " must be a string");
    set_config_value(config, key, value.get<std::string>());
  }
  return config;
}

ScenarioConfig config_from_report_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open report '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("report '" + path + "' is not valid JSON: " + e.what());
  }
  if (!j.contains("params")) throw ConfigError("report '" + path + "' has no params echo");
  return config_from_params(j["params"]);
}

void write_report(const Report& report, const std::string& path) {
  write_text(path, report.to_json().dump(2) + "\n");
}

std::string csv_text(const Table& table) {
  std::ostringstream out;
  for (std::size_t i = 0; i < table.header.size(); ++i) {
    out << (i ? "," : "") << table.header[i];
  }
  out << "\n";
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_double(row[i]);
    out << "\n";
  }
  return out.str();
}

void write_side_files(const Report& report, const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create directory '" + dir + "': " + ec.message());
  const std::filesystem::path base(dir);
  for (const auto& table : report.tables) write_text((base / table.filename).string(), csv_text(table));
  for (const auto& [name, doc] : report.documents) {
    write_text((base / name).string(), doc.dump(2) + "\n");
  }
}

}  // namespace oscgraph::report
