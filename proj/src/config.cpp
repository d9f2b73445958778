#include "bathsim/config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

#include "bathsim/format.hpp"

namespace bathsim {

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "gamma",     "epsilon",     "length",      "potential", "c_left",      "c_right",
      "flux_mode", "fixed_flux",  "rate_model",  "dt",        "protocol",    "mode",
      "trajectories", "total_time", "warmup_time", "seed",    "bins",        "strip_width",
      "strip_sample_fraction", "max_steps", "blocks", "threads"};
  return keys;
}

namespace {

bool known_key(const std::string& key) {
  const auto& k = config_keys();
  return std::find(k.begin(), k.end(), key) != k.end();
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::uint64_t parse_count(const std::string& text, const std::string& key) {
  const long long v = parse_integer(text, key);
  if (v < 0) throw ConfigError(key + " must be non-negative, got " + text);
  return static_cast<std::uint64_t>(v);
}

int parse_int(const std::string& text, const std::string& key) {
  const long long v = parse_integer(text, key);
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max())
    throw ConfigError(key + " out of range: " + text);
  return static_cast<int>(v);
}

std::string flux_mode_name(FluxMode::Kind k) {
  switch (k) {
    case FluxMode::Kind::Zero: return "zero";
    case FluxMode::Kind::Analytic: return "analytic";
    case FluxMode::Kind::Fixed: return "fixed";
  }
  return "analytic";
}

}  // namespace

ConfigMap parse_config_text(const std::string& text, const std::string& origin) {
  ConfigMap out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = origin + ":" + std::to_string(lineno);
    if (eq == std::string::npos) throw ConfigError(where + ": expected key = value");
    const std::string key = lower(trim(line.substr(0, eq)));
    const std::string value = trim(line.substr(eq + 1));
    if (!known_key(key)) throw ConfigError(where + ": unknown key '" + key + "'");
    if (value.empty()) throw ConfigError(where + ": empty value for '" + key + "'");
    if (!out.emplace(key, value).second) throw ConfigError(where + ": duplicate key '" + key + "'");
  }
  return out;
}

ConfigMap read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path);
}

ConfigMap environment_overrides() {
  ConfigMap out;
  for (const auto& key : config_keys()) {
    std::string name = "BATHSIM_" + key;
    std::transform(name.begin(), name.end(), name.begin(), [](unsigned char c) { return std::toupper(c); });
    if (const char* v = std::getenv(name.c_str()); v != nullptr && *v != '\0') out[key] = trim(v);
  }
  return out;
}

ConfigMap parse_overrides(const std::vector<std::string>& assignments) {
  ConfigMap out;
  for (const auto& a : assignments) {
    const auto eq = a.find('=');
    if (eq == std::string::npos) throw ConfigError("override '" + a + "' is not of the form key=value");
    const std::string key = lower(trim(a.substr(0, eq)));
    if (!known_key(key)) throw ConfigError("unknown key '" + key + "' in override");
    out[key] = trim(a.substr(eq + 1));
  }
  return out;
}

SimConfig apply_config(SimConfig c, const ConfigMap& values) {
  for (const auto& [key, value] : values) {
    if (key == "gamma") c.params.gamma = parse_double(value, key);
    else if (key == "epsilon") c.params.epsilon = parse_double(value, key);
    else if (key == "length") c.params.length = parse_double(value, key);
    else if (key == "potential") c.params.potential = Potential::parse(value);
    else if (key == "c_left") c.bath.c_left = parse_double(value, key);
    else if (key == "c_right") c.bath.c_right = parse_double(value, key);
    else if (key == "flux_mode") {
      const std::string m = lower(value);
      if (m == "zero") c.bath.flux_mode.kind = FluxMode::Kind::Zero;
      else if (m == "analytic") c.bath.flux_mode.kind = FluxMode::Kind::Analytic;
      else if (m == "fixed") c.bath.flux_mode.kind = FluxMode::Kind::Fixed;
      else throw ConfigError("flux_mode must be zero, analytic or fixed, got '" + value + "'");
    } else if (key == "fixed_flux") c.bath.flux_mode.value = parse_double(value, key);
    else if (key == "rate_model") c.rate_model = parse_rate_model(value);
    else if (key == "dt") c.dt = parse_double(value, key);
    else if (key == "protocol") c.protocol = parse_protocol(value);
    else if (key == "mode") c.mode = parse_mode(value);
    else if (key == "trajectories") c.trajectories = parse_count(value, key);
    else if (key == "total_time") c.total_time = parse_double(value, key);
    else if (key == "warmup_time") c.warmup_time = parse_double(value, key);
    else if (key == "seed") c.seed = parse_count(value, key);
    else if (key == "bins") c.bins = parse_int(value, key);
    else if (key == "strip_width") c.strip_width = parse_double(value, key);
    else if (key == "strip_sample_fraction") c.strip_sample_fraction = parse_double(value, key);
    else if (key == "max_steps") c.max_steps_per_trajectory = parse_count(value, key);
    else if (key == "blocks") c.blocks = parse_int(value, key);
    else if (key == "threads") c.threads = parse_int(value, key);
    else throw ConfigError("unknown key '" + key + "'");
  }
  c.validate();
  return c;
}

ConfigMap to_config_map(const SimConfig& c) {
  return {
      {"gamma", format_exact(c.params.gamma)},
      {"epsilon", format_exact(c.params.epsilon)},
      {"length", format_exact(c.params.length)},
      {"potential", c.params.potential.describe()},
      {"c_left", format_exact(c.bath.c_left)},
      {"c_right", format_exact(c.bath.c_right)},
      {"flux_mode", flux_mode_name(c.bath.flux_mode.kind)},
      {"fixed_flux", format_exact(c.bath.flux_mode.value)},
      {"rate_model", to_string(c.rate_model)},
      {"dt", format_exact(c.dt)},
      {"protocol", to_string(c.protocol)},
      {"mode", to_string(c.mode)},
      {"trajectories", std::to_string(c.trajectories)},
      {"total_time", format_exact(c.total_time)},
      {"warmup_time", format_exact(c.warmup_time)},
      {"seed", std::to_string(c.seed)},
      {"bins", std::to_string(c.bins)},
      {"strip_width", format_exact(c.strip_width)},
      {"strip_sample_fraction", format_exact(c.strip_sample_fraction)},
      {"max_steps", std::to_string(c.max_steps_per_trajectory)},
      {"blocks", std::to_string(c.blocks)},
      {"threads", std::to_string(c.threads)},
  };
}

SimConfig resolve_config(const std::string& path, const std::vector<std::string>& overrides) {
  ConfigMap merged;
  if (!path.empty()) merged = read_config_file(path);
  for (const auto& [k, v] : environment_overrides()) merged[k] = v;
  for (const auto& [k, v] : parse_overrides(overrides)) merged[k] = v;
  return apply_config(SimConfig{}, merged);
}

}  // namespace bathsim
