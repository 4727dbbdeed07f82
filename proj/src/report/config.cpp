#include "oscgraph/report/config.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

namespace oscgraph::report {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double parse_double(const std::string& text) {
  const std::string s = trim(text);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw ConfigError("not a number: '" + text + "'");
  }
  if (used != s.size()) throw ConfigError("trailing characters in number: '" + text + "'");
  return v;
}

long long parse_integer(const std::string& text) {
  const std::string s = trim(text);
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(s, &used);
  } catch (const std::exception&) {
    throw ConfigError("not an integer: '" + text + "'");
  }
  if (used != s.size()) throw ConfigError("trailing characters in integer: '" + text + "'");
  return v;
}

int parse_int(const std::string& text) { return static_cast<int>(parse_integer(text)); }

bool parse_bool(const std::string& text) {
  const std::string s = trim(text);
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  throw ConfigError("not a boolean: '" + text + "'");
}

template <typename T, typename Parse>
std::vector<T> parse_list(const std::string& value, Parse parse) {
  std::vector<T> out;
  for (const auto& item : split_list(value)) out.push_back(parse(item));
  return out;
}

template <typename T, typename Format>
std::string join(const std::vector<T>& values, Format format) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ", ";
    out += format(values[i]);
  }
  return out;
}

}  // namespace

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string format_complex(Complex z) {
  if (z.imag() == 0.0) return format_double(z.real());
  std::string im = format_double(z.imag());
  if (im.front() != '-') im = "+" + im;
  return format_double(z.real()) + im + "j";
}

Complex parse_complex(const std::string& text) {
  std::string s;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  }
  if (s.empty()) throw ConfigError("empty complex number");
  const char last = s.back();
  if (last != 'j' && last != 'i') return {parse_double(s), 0.0};
  s.pop_back();
  // Split at the last sign that is not the leading sign or an exponent sign.
  std::size_t split = std::string::npos;
  for (std::size_t k = s.size(); k-- > 1;) {
    if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  auto imag_part = [](const std::string& t) {
    if (t.empty() || t == "+") return 1.0;
    if (t == "-") return -1.0;
    return parse_double(t);
  };
  if (split == std::string::npos) return {0.0, imag_part(s)};
  return {parse_double(s.substr(0, split)), imag_part(s.substr(split))};
}

void set_config_value(ScenarioConfig& c, const std::string& raw_key, const std::string& value) {
  const std::string key = trim(raw_key);
  static const std::map<std::string, std::function<void(ScenarioConfig&, const std::string&)>>
      setters = {
          {"scenario", [](ScenarioConfig& c, const std::string& v) { c.scenario = trim(v); }},
          {"d_cm", [](ScenarioConfig& c, const std::string& v) { c.d_cm = parse_int(v); }},
          {"d_rel", [](ScenarioConfig& c, const std::string& v) { c.d_rel = parse_int(v); }},
          {"K", [](ScenarioConfig& c, const std::string& v) { c.K = parse_int(v); }},
          {"t_grid",
           [](ScenarioConfig& c, const std::string& v) { c.t_grid = parse_list<double>(v, parse_double); }},
          {"r_grid",
           [](ScenarioConfig& c, const std::string& v) { c.r_grid = parse_list<double>(v, parse_double); }},
          {"phi_grid",
           [](ScenarioConfig& c, const std::string& v) { c.phi_grid = parse_list<double>(v, parse_double); }},
          {"beta_list",
           [](ScenarioConfig& c, const std::string& v) { c.beta_list = parse_list<Complex>(v, parse_complex); }},
          {"alpha_list",
           [](ScenarioConfig& c, const std::string& v) { c.alpha_list = parse_list<Complex>(v, parse_complex); }},
          {"n_list", [](ScenarioConfig& c, const std::string& v) { c.n_list = parse_list<int>(v, parse_int); }},
          {"x_list",
           [](ScenarioConfig& c, const std::string& v) { c.x_list = parse_list<double>(v, parse_double); }},
          {"g0",
           [](ScenarioConfig& c, const std::string& v) {
             if (trim(v) == "vacuum") {
               c.g0.clear();
             } else {
               c.g0 = parse_list<Complex>(v, parse_complex);
               if (c.g0.empty()) throw ConfigError("g0: empty coefficient list");
             }
           }},
          {"seed",
           [](ScenarioConfig& c, const std::string& v) {
             const long long s = parse_integer(v);
             if (s < 0) throw ConfigError("seed must be non-negative");
             c.seed = static_cast<std::uint64_t>(s);
           }},
          {"deterministic", [](ScenarioConfig& c, const std::string& v) { c.deterministic = parse_bool(v); }},
          {"jobs",
           [](ScenarioConfig& c, const std::string& v) {
             c.jobs = parse_int(v);
             if (c.jobs < 1) throw ConfigError("jobs must be >= 1");
           }},
          {"n_probes", [](ScenarioConfig& c, const std::string& v) { c.n_probes = parse_int(v); }},
          {"probe_levels",
           [](ScenarioConfig& c, const std::string& v) { c.probe_levels = parse_list<int>(v, parse_int); }},
          {"grid_lo", [](ScenarioConfig& c, const std::string& v) { c.grid_lo = parse_double(v); }},
          {"grid_hi", [](ScenarioConfig& c, const std::string& v) { c.grid_hi = parse_double(v); }},
          {"grid_n", [](ScenarioConfig& c, const std::string& v) { c.grid_n = parse_int(v); }},
          {"disk_radius", [](ScenarioConfig& c, const std::string& v) { c.disk_radius = parse_double(v); }},
          {"radial_nodes", [](ScenarioConfig& c, const std::string& v) { c.radial_nodes = parse_int(v); }},
          {"angular_nodes", [](ScenarioConfig& c, const std::string& v) { c.angular_nodes = parse_int(v); }},
          {"control_angular_nodes",
           [](ScenarioConfig& c, const std::string& v) { c.control_angular_nodes = parse_int(v); }},
          {"d_rel_lambda", [](ScenarioConfig& c, const std::string& v) { c.d_rel_lambda = parse_int(v); }},
      };
  if (key.rfind("tol.", 0) == 0) {
    const std::string name = key.substr(4);
    if (name.empty()) throw ConfigError("empty tolerance name");
    c.tolerances[name] = parse_double(value);
    return;
  }
  auto it = setters.find(key);
  if (it == setters.end()) throw ConfigError("unknown config key '" + key + "'");
  try {
    it->second(c, value);
  } catch (const ConfigError& e) {
    throw ConfigError(key + ": " + e.what());
  }
}

ScenarioConfig parse_config_text(const std::string& text) {
  ScenarioConfig config;
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    }
    set_config_value(config, line.substr(0, eq), line.substr(eq + 1));
  }
  return config;
}

ScenarioConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

std::map<std::string, std::string> to_key_values(const ScenarioConfig& c) {
  std::map<std::string, std::string> kv;
  auto put_int = [&](const char* k, const std::optional<int>& v) {
    if (v) kv[k] = std::to_string(*v);
  };
  auto put_double = [&](const char* k, const std::optional<double>& v) {
    if (v) kv[k] = format_double(*v);
  };
  auto put_doubles = [&](const char* k, const std::vector<double>& v) {
    if (!v.empty()) kv[k] = join(v, format_double);
  };
  auto put_complexes = [&](const char* k, const std::vector<Complex>& v) {
    if (!v.empty()) kv[k] = join(v, format_complex);
  };
  auto put_ints = [&](const char* k, const std::vector<int>& v) {
    if (!v.empty()) kv[k] = join(v, [](int i) { return std::to_string(i); });
  };
  kv["scenario"] = c.scenario;
  put_int("d_cm", c.d_cm);
  put_int("d_rel", c.d_rel);
  put_int("K", c.K);
  put_doubles("t_grid", c.t_grid);
  put_doubles("r_grid", c.r_grid);
  put_doubles("phi_grid", c.phi_grid);
  put_complexes("beta_list", c.beta_list);
  put_complexes("alpha_list", c.alpha_list);
  put_ints("n_list", c.n_list);
  put_doubles("x_list", c.x_list);
  kv["g0"] = c.g0.empty() ? "vacuum" : join(c.g0, format_complex);
  for (const auto& [name, value] : c.tolerances) kv["tol." + name] = format_double(value);
  if (c.seed) kv["seed"] = std::to_string(*c.seed);
  kv["deterministic"] = c.deterministic ? "true" : "false";
  kv["jobs"] = std::to_string(c.jobs);
  put_int("n_probes", c.n_probes);
  put_ints("probe_levels", c.probe_levels);
  put_double("grid_lo", c.grid_lo);
  put_double("grid_hi", c.grid_hi);
  put_int("grid_n", c.grid_n);
  put_double("disk_radius", c.disk_radius);
  put_int("radial_nodes", c.radial_nodes);
  put_int("angular_nodes", c.angular_nodes);
  put_int("control_angular_nodes", c.control_angular_nodes);
  put_int("d_rel_lambda", c.d_rel_lambda);
  return kv;
}

}  // namespace oscgraph::report
