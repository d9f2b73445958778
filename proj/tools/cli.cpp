#include "cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <optional>
#include <ostream>
#include <sstream>

#include "bathsim/analytic.hpp"
#include "bathsim/config.hpp"
#include "bathsim/format.hpp"
#include "bathsim/observables.hpp"

#ifndef BATHSIM_VERSION
#define BATHSIM_VERSION "0.0.0"
#endif

namespace bathsim::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::ofstream open_output(const fs::path& path) {
  std::ofstream f(path);
  if (!f) throw ConfigError("cannot write '" + path.string() + "'");
  f.imbue(std::locale::classic());
  return f;
}

void write_json(const fs::path& path, const json& j) {
  auto f = open_output(path);
  f << j.dump(2) << '\n';
}

json read_json(const fs::path& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot read '" + path.string() + "'");
  try {
    return json::parse(f);
  } catch (const json::exception& e) {
    throw ConfigError("malformed JSON in '" + path.string() + "': " + e.what());
  }
}

Side parse_side(const std::string& s) {
  if (s == "left") return Side::Left;
  if (s == "right") return Side::Right;
  throw UsageError("side must be left or right, got '" + s + "'");
}

// ------------------------------------------------------------------ run

json gof_json(const std::function<GofResult()>& test) {
  try {
    const GofResult r = test();
    return {{"test", to_string(r.kind)}, {"statistic", r.statistic}, {"p_value", r.p_value}, {"n_samples", r.n_samples}};
  } catch (const InsufficientData& e) {
    return {{"error", e.what()}};
  } catch (const DomainError& e) {
    return {{"error", e.what()}};
  }
}

json layer_json(const LayerReport& r) {
  return {{"layer_width", r.layer_width},
          {"layer_deviation", r.layer_deviation},
          {"systematic_sign", r.systematic_sign},
          {"interior_slope", r.interior_fit.slope},
          {"interior_intercept", r.interior_fit.intercept}};
}

json summarize(const RawStats& stats, const SimConfig& config, const ProfileSet& profiles) {
  json s;
  const double analytic_j = analytic::smoluchowski_flux(config.params, config.bath);
  const double measured_j = stats.measured_flux();
  s["flux"] = {{"measured", measured_j},
               {"analytic", analytic_j},
               {"relative_error", analytic_j != 0.0 ? std::fabs(measured_j - analytic_j) / std::fabs(analytic_j)
                                                    : std::fabs(measured_j)}};

  std::optional<double> worst;
  const LinearFit line = interior_fit(profiles.bulk, config.params.length);
  s["interior_fit"] = {{"slope", line.slope}, {"intercept", line.intercept}};
  for (const Side side : {Side::Left, Side::Right}) {
    try {
      const LayerReport r = boundary_layer_metric(profiles, config.params, side);
      s["layers"][to_string(side)] = layer_json(r);
      worst = std::max(worst.value_or(0.0), r.layer_deviation);
    } catch (const DomainError& e) {
      s["layers"][to_string(side)] = {{"error", e.what()}};
    }
  }
  s["layer_deviation"] = worst ? json(*worst) : json(nullptr);

  for (const Side side : {Side::Left, Side::Right}) {
    const auto name = to_string(side);
    s["gof"][name]["interface_law"] =
        gof_json([&] { return strip_velocity_gof(stats, side, config.bath, config.params); });
    s["gof"][name]["half_maxwellian"] = gof_json([&] {
      const auto& v = stats.strip_velocities[index_of(side)];
      if (v.size() < kMinStripSamples) throw InsufficientData("too few strip velocity samples");
      return ks_test(v, [&](double u) {
        return analytic::interface_velocity_cdf(u, side, config.bath, 0.0, config.params.epsilon);
      });
    });
  }

  s["mass_balance"] = {{"injected_left", stats.injected[0]},
                       {"injected_right", stats.injected[1]},
                       {"absorbed_left", stats.absorbed[0]},
                       {"absorbed_right", stats.absorbed[1]},
                       {"in_flight", stats.in_flight},
                       {"capped", stats.capped},
                       {"balanced", stats.mass_balanced()}};
  s["capped_fraction"] = stats.capped_fraction();
  s["valid"] = stats.valid();
  s["mean_population"] = stats.mean_population();
  s["steps"] = stats.steps;
  return s;
}

void write_profile_csv(const fs::path& path, const ConcentrationProfile& p) {
  auto f = open_output(path);
  f << "bin_center,concentration,std_error\n";
  for (std::size_t i = 0; i < p.size(); ++i)
    f << format_short(p.bin_centers[i]) << ',' << format_short(p.values[i]) << ',' << format_short(p.std_errors[i])
      << '\n';
}

void write_layer_csv(const fs::path& path, const ProfileSet& ps) {
  auto f = open_output(path);
  f << "side,bin_center,concentration,std_error\n";
  for (const auto& [name, p] : {std::pair{"left", &ps.left_zoom}, std::pair{"right", &ps.right_zoom}})
    for (std::size_t i = 0; i < p->size(); ++i)
      f << name << ',' << format_short(p->bin_centers[i]) << ',' << format_short(p->values[i]) << ','
        << format_short(p->std_errors[i]) << '\n';
}

void write_velocities_csv(const fs::path& path, const RawStats& stats) {
  auto f = open_output(path);
  f << "side,v\n";
  for (const Side side : {Side::Left, Side::Right})
    for (double v : stats.strip_velocities[index_of(side)]) f << to_string(side) << ',' << format_short(v) << '\n';
}

struct RunOptions {
  std::string config_path;
  std::string manifest_path;
  std::vector<std::string> overrides;
  std::string out_dir = "out";
  std::optional<int> threads;
};

int cmd_run(const RunOptions& o, std::ostream& out) {
  SimConfig config;
  if (!o.manifest_path.empty()) {
    const json m = read_json(o.manifest_path);
    if (!m.contains("config") || !m["config"].is_object()) throw ConfigError("manifest has no config object");
    ConfigMap values;
    for (const auto& [k, v] : m["config"].items()) {
      if (!v.is_string()) throw ConfigError("manifest config value for '" + k + "' is not a string");
      values[k] = v.get<std::string>();
    }
    for (const auto& [k, v] : parse_overrides(o.overrides)) values[k] = v;
    config = apply_config(SimConfig{}, values);
  } else {
    if (!o.config_path.empty() && !fs::is_regular_file(o.config_path))
      throw ConfigError("config file '" + o.config_path + "' does not exist");
    config = resolve_config(o.config_path, o.overrides);
  }
  if (o.threads) {
    config.threads = *o.threads;
    config.validate();
  }

  const auto start = std::chrono::steady_clock::now();
  const RawStats stats = run(config);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const ProfileSet profiles = normalize_profile(stats, config);
  const json summary = summarize(stats, config, profiles);

  const fs::path dir(o.out_dir);
  fs::create_directories(dir);
  const json files = {{"profile", "profile.csv"},
                      {"layer_profile", "layer_profile.csv"},
                      {"velocities", "velocities.csv"},
                      {"summary", "summary.json"},
                      {"manifest", "manifest.json"}};
  write_profile_csv(dir / "profile.csv", profiles.bulk);
  write_layer_csv(dir / "layer_profile.csv", profiles);
  write_velocities_csv(dir / "velocities.csv", stats);
  write_json(dir / "summary.json", summary);

  json config_json = json::object();
  for (const auto& [k, v] : to_config_map(config)) config_json[k] = v;
  json manifest = {{"version", BATHSIM_VERSION},
                   {"config", config_json},
                   {"seed", config.seed},
                   {"threads", config.threads},
                   {"wall_clock_seconds", wall},
                   {"outputs", files},
                   {"summary",
                    {{"flux", summary["flux"]["measured"]},
                     {"layer_deviation", summary["layer_deviation"]},
                     {"gof_p_left", summary["gof"]["left"]["interface_law"].value("p_value", json(nullptr))},
                     {"gof_p_right", summary["gof"]["right"]["interface_law"].value("p_value", json(nullptr))},
                     {"valid", stats.valid()}}}};
  write_json(dir / "manifest.json", manifest);

  out << "flux " << format_short(summary["flux"]["measured"].get<double>()) << " (analytic "
      << format_short(summary["flux"]["analytic"].get<double>()) << ")\n";
  if (!summary["layer_deviation"].is_null())
    out << "layer_deviation " << format_short(summary["layer_deviation"].get<double>()) << '\n';
  out << "outputs written to " << dir.string() << '\n';
  if (!stats.mass_balanced() || !stats.valid()) return kRunInvalid;
  return kSuccess;
}

// --------------------------------------------------------------- oracle

struct OracleOptions {
  std::string formula;
  PhysicsParams params;
  std::string potential = "free";
  BathConditions bath;
  std::optional<double> flux;
  double dt = 1e-4;
  std::string side = "left";
  double x = 0.0;
  double v = 0.0;
  bool grid = false;
  bool cdf = false;
  int points = 101;
  int nx = 400;
  int nv = 400;
};

// Trapezoid weights on n points spanning [a, b].
std::vector<double> trapezoid(double a, double b, int n, std::vector<double>& nodes) {
  nodes.resize(n);
  std::vector<double> w(n);
  const double h = (b - a) / (n - 1);
  for (int i = 0; i < n; ++i) {
    nodes[i] = a + i * h;
    w[i] = (i == 0 || i == n - 1) ? h / 2 : h;
  }
  return w;
}

int cmd_oracle(OracleOptions o, std::ostream& out) {
  o.params.potential = Potential::parse(o.potential);
  o.params.validate();
  o.bath.validate();
  const double eps = o.params.epsilon;
  const Side side = parse_side(o.side);
  const double j = o.flux ? *o.flux : analytic::smoluchowski_flux(o.params, o.bath);
  if (o.grid && (o.points < 2 || o.nx < 2 || o.nv < 2)) throw UsageError("grids need at least 2 points per axis");

  // One-variable formulas share the velocity grid.
  std::function<double(double)> of_v;
  double v_lo = -4.0 * std::sqrt(eps), v_hi = 4.0 * std::sqrt(eps);

  if (o.formula == "flux") {
    out << format_exact(analytic::smoluchowski_flux(o.params, o.bath)) << '\n';
    return kSuccess;
  }
  if (o.formula == "unidirectional") {
    out << format_exact(analytic::unidirectional_flux(side, o.bath, j, eps)) << '\n';
    return kSuccess;
  }
  if (o.formula == "inward") {
    out << format_exact(analytic::inward_flux(side, o.bath, j, eps)) << '\n';
    return kSuccess;
  }
  if (o.formula == "kernel") {
    const auto k = analytic::one_step_kernel_stats({o.x, o.v}, o.params, o.dt);
    out << "next_x,mean_v,var_v\n"
        << format_exact(k.next_x) << ',' << format_exact(k.mean_v) << ',' << format_exact(k.var_v) << '\n';
    return kSuccess;
  }
  if (o.formula == "profile") {
    if (!o.grid) {
      out << format_exact(analytic::smoluchowski_profile(o.x, o.params, o.bath)) << '\n';
      return kSuccess;
    }
    out << "x,concentration\n";
    for (int i = 0; i < o.points; ++i) {
      const double x = i == o.points - 1 ? o.params.length : o.params.length * i / (o.points - 1);
      out << format_exact(x) << ',' << format_exact(analytic::smoluchowski_profile(x, o.params, o.bath)) << '\n';
    }
    return kSuccess;
  }
  if (o.formula == "residual-density") {
    analytic::require_stable_step(o.params, o.dt);
    if (!o.grid) {
      out << format_exact(analytic::residual_density(o.x, o.v, o.params, o.dt)) << '\n';
      return kSuccess;
    }
    const double kick = std::sqrt(2.0 * eps * o.params.gamma * o.dt);
    std::vector<double> xs, vs;
    const auto wx = trapezoid(0.0, 9.0 * std::sqrt(eps) * o.dt, o.nx, xs);
    const auto wv = trapezoid(-8.0 * kick, 9.0 * std::sqrt(eps) + 8.0 * kick, o.nv, vs);
    out << "x,v,density,weight\n";
    for (int a = 0; a < o.nx; ++a)
      for (int b = 0; b < o.nv; ++b)
        out << format_exact(xs[a]) << ',' << format_exact(vs[b]) << ','
            << format_exact(analytic::residual_density(xs[a], vs[b], o.params, o.dt)) << ','
            << format_exact(wx[a] * wv[b]) << '\n';
    return kSuccess;
  }
  if (o.formula == "residual-marginal") {
    analytic::require_stable_step(o.params, o.dt);
    of_v = [&](double v) { return analytic::residual_velocity_marginal(v, o.params, o.dt); };
    v_lo = -1.0 * std::sqrt(eps);
    v_hi = 9.0 * std::sqrt(eps);
  } else if (o.formula == "limiting-velocity") {
    of_v = [&](double v) { return analytic::limiting_velocity_density(v, eps); };
    v_lo = 0.0;
    v_hi = 9.0 * std::sqrt(eps);
  } else if (o.formula == "interface-velocity") {
    of_v = [&](double v) {
      return o.cdf ? analytic::interface_velocity_cdf(v, side, o.bath, j, eps)
                   : analytic::interface_velocity_density(v, side, o.bath, j, eps);
    };
    if (side == Side::Left) v_lo = 0.0;
    else v_hi = 0.0;
  } else {
    throw UsageError("unknown formula '" + o.formula + "'");
  }

  if (!o.grid) {
    out << format_exact(of_v(o.v)) << '\n';
    return kSuccess;
  }
  std::vector<double> vs;
  const auto w = trapezoid(v_lo, v_hi, o.points, vs);
  out << "v,value,weight\n";
  for (int i = 0; i < o.points; ++i)
    out << format_exact(vs[i]) << ',' << format_exact(of_v(vs[i])) << ',' << format_exact(w[i]) << '\n';
  return kSuccess;
}

// ------------------------------------------------------ sample-injection

struct SampleOptions {
  std::string protocol = "residual";
  std::uint64_t n = 0;
  PhysicsParams params;
  std::string potential = "free";
  double dt = 1e-4;
  std::uint64_t seed = 1;
  std::string side = "left";
  std::string out = "samples.csv";
};

int cmd_sample(SampleOptions o, std::ostream& out) {
  InjectionProtocol protocol;
  try {
    protocol = parse_protocol(o.protocol);
  } catch (const ConfigError& e) {
    throw UsageError(e.what());
  }
  if (o.n == 0) throw UsageError("n must be positive");
  const Side side = parse_side(o.side);
  o.params.potential = Potential::parse(o.potential);
  o.params.validate();
  analytic::require_stable_step(o.params, o.dt);

  RandomStream rng(o.seed);
  auto f = open_output(o.out);
  f << "x,v,xi,eta\n";
  for (std::uint64_t i = 0; i < o.n; ++i) {
    const InjectionEvent e = sample_entry(protocol, side, o.params, o.dt, rng);
    f << format_exact(e.state.x) << ',' << format_exact(e.state.v) << ',';
    if (e.pre_image) f << format_exact(e.pre_image->x) << ',' << format_exact(e.pre_image->v);
    else f << ',';
    f << '\n';
  }
  out << o.n << " samples written to " << o.out << '\n';
  return kSuccess;
}

// ---------------------------------------------------------------- compare

struct Table {
  std::vector<std::string> label;  // region column
  std::vector<double> center, value, error;
};

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string c;
  while (std::getline(ss, c, ',')) cells.push_back(c);
  return cells;
}

Table read_table(const fs::path& path, bool has_side) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot read '" + path.string() + "'");
  Table t;
  std::string line;
  std::getline(f, line);
  const std::size_t offset = has_side ? 1 : 0;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != 3 + offset) throw ConfigError("malformed row in '" + path.string() + "'");
    t.label.push_back(has_side ? cells[0] : "bulk");
    t.center.push_back(parse_double(cells[offset], "bin_center"));
    t.value.push_back(parse_double(cells[offset + 1], "concentration"));
    t.error.push_back(parse_double(cells[offset + 2], "std_error"));
  }
  return t;
}

struct RunDir {
  json manifest;
  Table bulk;
  Table layer;
};

RunDir load_run(const fs::path& dir) {
  RunDir r;
  r.manifest = read_json(dir / "manifest.json");
  r.bulk = read_table(dir / "profile.csv", false);
  const fs::path layer = dir / "layer_profile.csv";
  if (fs::exists(layer)) r.layer = read_table(layer, true);
  return r;
}

int cmd_compare(const std::string& a_dir, const std::string& b_dir, const std::string& out_dir, std::ostream& out) {
  const RunDir a = load_run(a_dir);
  const RunDir b = load_run(b_dir);
  for (const char* key : {"gamma", "epsilon", "length", "potential", "c_left", "c_right", "bins"}) {
    const auto va = a.manifest["config"].value(key, std::string{});
    const auto vb = b.manifest["config"].value(key, std::string{});
    if (va != vb) throw ConfigError(std::string("runs differ in ") + key + ": " + va + " vs " + vb);
  }
  if (a.bulk.center != b.bulk.center || a.layer.center != b.layer.center)
    throw ConfigError("runs use different bin layouts");

  const SimConfig config = apply_config(SimConfig{}, [&] {
    ConfigMap m;
    for (const auto& [k, v] : a.manifest["config"].items()) m[k] = v.get<std::string>();
    return m;
  }());
  const double length = config.params.length;
  const double width = config.params.layer_width();

  fs::create_directories(out_dir);
  auto f = open_output(fs::path(out_dir) / "compare.csv");
  f << "region,bin_center,a,b,difference,pooled_sigma,z\n";
  double interior_z = 0.0, layer_z = 0.0;
  auto emit = [&](const Table& ta, const Table& tb, bool zoom) {
    for (std::size_t i = 0; i < ta.center.size(); ++i) {
      const double d = ta.value[i] - tb.value[i];
      const double s = std::hypot(ta.error[i], tb.error[i]);
      const double z = s > 0.0 ? d / s : (d == 0.0 ? 0.0 : std::copysign(INFINITY, d));
      const double x = ta.center[i];
      if (!zoom && x > 0.05 * length && x < 0.95 * length) interior_z = std::max(interior_z, std::fabs(z));
      if (zoom && (x < width || x > length - width)) layer_z = std::max(layer_z, std::fabs(z));
      f << ta.label[i] << ',' << format_short(x) << ',' << format_short(ta.value[i]) << ','
        << format_short(tb.value[i]) << ',' << format_short(d) << ',' << format_short(s) << ','
        << format_short(z) << '\n';
    }
  };
  emit(a.bulk, b.bulk, false);
  emit(a.layer, b.layer, true);

  auto deviation = [](const json& m) {
    const auto& s = m.value("summary", json::object());
    return s.contains("layer_deviation") && s["layer_deviation"].is_number() ? s["layer_deviation"].get<double>()
                                                                             : 0.0;
  };
  const double dev_a = deviation(a.manifest), dev_b = deviation(b.manifest);
  const bool exceeds = dev_a > dev_b;
  write_json(fs::path(out_dir) / "compare.json", {{"interior_max_abs_z", interior_z},
                                                  {"layer_max_abs_z", layer_z},
                                                  {"a_layer_deviation", dev_a},
                                                  {"b_layer_deviation", dev_b},
                                                  {"a_exceeds_b", exceeds}});
  out << "interior max |z| " << format_short(interior_z) << ", layer max |z| " << format_short(layer_z) << '\n'
      << "layer deviation A " << format_short(dev_a) << ", B " << format_short(dev_b) << '\n';
  return exceeds ? kSuccess : kNotExceeded;
}

void add_physics_options(CLI::App* app, PhysicsParams& p, std::string& potential) {
  app->add_option("--gamma", p.gamma, "friction coefficient")->capture_default_str();
  app->add_option("--epsilon", p.epsilon, "thermal factor kT/m")->capture_default_str();
  app->add_option("--length", p.length, "domain length")->capture_default_str();
  app->add_option("--potential", potential, "free or linear:<slope>")->capture_default_str();
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Langevin simulator with residual phase-space injection between fixed-concentration baths",
               "bathsim"};
  app.require_subcommand(1);
  app.set_version_flag("--version", BATHSIM_VERSION);

  RunOptions run_opts;
  auto* run_cmd = app.add_subcommand("run", "simulate and write profile, velocities, summary and manifest");
  auto* config_opt = run_cmd->add_option("-c,--config", run_opts.config_path, "key = value config file");
  run_cmd->add_option("--manifest", run_opts.manifest_path, "re-run the configuration stored in a manifest.json")
      ->excludes(config_opt);
  run_cmd->add_option("--set", run_opts.overrides, "override a config key, key=value (repeatable)");
  run_cmd->add_option("-o,--out", run_opts.out_dir, "output directory")->capture_default_str();
  run_cmd->add_option("--threads", run_opts.threads, "worker threads; 1 for bit-exact reproduction")
      ->check(CLI::PositiveNumber);

  OracleOptions oracle_opts;
  auto* oracle_cmd = app.add_subcommand("oracle", "evaluate a closed-form result");
  oracle_cmd
      ->add_option("formula", oracle_opts.formula,
                   "flux | profile | residual-density | residual-marginal | limiting-velocity | "
                   "interface-velocity | unidirectional | inward | kernel")
      ->required()
      ->check(CLI::IsMember({"flux", "profile", "residual-density", "residual-marginal", "limiting-velocity",
                             "interface-velocity", "unidirectional", "inward", "kernel"}));
  add_physics_options(oracle_cmd, oracle_opts.params, oracle_opts.potential);
  oracle_cmd->add_option("--c-left", oracle_opts.bath.c_left, "left bath concentration")->capture_default_str();
  oracle_cmd->add_option("--c-right", oracle_opts.bath.c_right, "right bath concentration")->capture_default_str();
  oracle_cmd->add_option("--flux", oracle_opts.flux, "net flux J (default: analytic)");
  oracle_cmd->add_option("--dt", oracle_opts.dt, "time step")->capture_default_str();
  oracle_cmd->add_option("--side", oracle_opts.side, "left or right")->capture_default_str();
  oracle_cmd->add_option("--x", oracle_opts.x, "position");
  oracle_cmd->add_option("--v", oracle_opts.v, "velocity");
  oracle_cmd->add_flag("--grid", oracle_opts.grid, "print a CSV grid with quadrature weights");
  oracle_cmd->add_flag("--cdf", oracle_opts.cdf, "interface-velocity: print the CDF");
  oracle_cmd->add_option("--points", oracle_opts.points, "grid points for one-dimensional grids")
      ->capture_default_str();
  oracle_cmd->add_option("--nx", oracle_opts.nx, "residual-density grid points in x")->capture_default_str();
  oracle_cmd->add_option("--nv", oracle_opts.nv, "residual-density grid points in v")->capture_default_str();

  SampleOptions sample_opts;
  auto* sample_cmd = app.add_subcommand("sample-injection", "draw entry phase points from an injection protocol");
  sample_cmd->add_option("--protocol", sample_opts.protocol, "residual or boundary-maxwellian")
      ->capture_default_str();
  sample_cmd->add_option("-n", sample_opts.n, "number of samples")->required();
  add_physics_options(sample_cmd, sample_opts.params, sample_opts.potential);
  sample_cmd->add_option("--dt", sample_opts.dt, "time step")->capture_default_str();
  sample_cmd->add_option("--seed", sample_opts.seed, "random seed")->capture_default_str();
  sample_cmd->add_option("--side", sample_opts.side, "left or right")->capture_default_str();
  sample_cmd->add_option("-o,--out", sample_opts.out, "output CSV")->capture_default_str();

  std::string cmp_a, cmp_b, cmp_out;
  auto* compare_cmd = app.add_subcommand("compare", "bin-wise comparison of two run directories");
  compare_cmd->add_option("run_a", cmp_a, "first run directory")->required();
  compare_cmd->add_option("run_b", cmp_b, "second run directory")->required();
  compare_cmd->add_option("-o,--out", cmp_out, "output directory")->required();

  std::vector<const char*> argv{"bathsim"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kSuccess;
  } catch (const CLI::CallForVersion&) {
    out << BATHSIM_VERSION << '\n';
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (run_cmd->parsed()) return cmd_run(run_opts, out);
    if (oracle_cmd->parsed()) return cmd_oracle(oracle_opts, out);
    if (sample_cmd->parsed()) return cmd_sample(sample_opts, out);
    if (compare_cmd->parsed()) return cmd_compare(cmp_a, cmp_b, cmp_out, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const DomainError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const fs::filesystem_error& e) {
    err << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const std::exception& e) {
    err << "run failed: " << e.what() << '\n';
    return kRunInvalid;
  }
  return kUsage;
}

}  // namespace bathsim::cli
