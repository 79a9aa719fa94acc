#include "bolax/config.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "bolax/checks.hpp"
#include "bolax/errors.hpp"
#include "bolax/intertwine.hpp"
#include "bolax/lax.hpp"
#include "bolax/spectral.hpp"

namespace bolax {

namespace {

using nlohmann::json;

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void require_keys(const json& obj, const std::string& context,
                  std::initializer_list<const char*> known) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const char* k : known)
      if (it.key() == k) {
        ok = true;
        break;
      }
    if (!ok)
      throw ConfigError("unknown config key \"" + it.key() + "\" in " + context);
  }
}

double get_number(const json& obj, const char* key, double fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(std::string("config field \"") + key + "\" must be a number");
  return v.get<double>();
}

long long get_integer(const json& obj, const char* key, long long fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_integer())
    throw ConfigError(std::string("config field \"") + key + "\" must be an integer");
  return v.get<long long>();
}

bool get_bool(const json& obj, const char* key, bool fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_boolean()) throw ConfigError(std::string("config field \"") + key + "\" must be a boolean");
  return v.get<bool>();
}

std::string get_string(const json& obj, const char* key, const std::string& fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_string()) throw ConfigError(std::string("config field \"") + key + "\" must be a string");
  return v.get<std::string>();
}

std::vector<double> get_number_list(const json& obj, const char* key,
                                    std::vector<double> fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_array()) throw ConfigError(std::string("config field \"") + key + "\" must be an array");
  std::vector<double> out;
  for (const json& e : v) {
    if (!e.is_number())
      throw ConfigError(std::string("config field \"") + key + "\" must contain only numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

double parse_double_flag(const std::string& name, const std::string& text) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(text, &pos);
    if (pos != text.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("invalid numeric value \"" + text + "\" for override " + name);
  }
}

void validate(const ExperimentConfig& cfg) {
  if (cfg.lattice.n_max < 1) throw ConfigError("lattice.n_max must be >= 1");
  if (!(cfg.lattice.rho >= 0.0)) throw ConfigError("lattice.rho must be >= 0");
  if (!(cfg.lattice.s > 0.5)) throw ConfigError("lattice.s must exceed 1/2");
  if (2.0 * cfg.lattice.rho * cfg.lattice.n_max > kExponentCap)
    throw ConfigError("lattice weight e^{2 rho n_max} exceeds the exponent cap");
  if (!(cfg.dt > 0.0)) throw ConfigError("dt must be positive");
  if (!(cfg.t_end > 0.0)) throw ConfigError("t_end must be positive");
  if (cfg.record_every < 1) throw ConfigError("record_every must be >= 1");
  if (cfg.flow_kind != "bo" && cfg.flow_kind != "h_kappa")
    throw ConfigError("flow must be \"bo\" or \"h_kappa\", got \"" + cfg.flow_kind + "\"");
  if (!(cfg.kappa >= 0.0)) throw ConfigError("kappa must be >= 0 (0 selects the default)");
  if (cfg.lambda_probes.empty()) throw ConfigError("lambda_probes must be nonempty");
  for (double l : cfg.lambda_probes)
    if (!(l > 0.0)) throw ConfigError("lambda_probes entries must be positive");
  if (cfg.kappas.size() < 2) throw ConfigError("kappas needs at least two values");
  for (std::size_t i = 0; i < cfg.kappas.size(); ++i) {
    if (!(cfg.kappas[i] > 0.0)) throw ConfigError("kappas entries must be positive");
    if (i > 0 && !(cfg.kappas[i] > cfg.kappas[i - 1]))
      throw ConfigError("kappas must be strictly increasing");
  }
  if (!(cfg.step_check_tol >= 0.0)) throw ConfigError("step_check_tol must be >= 0");

  const InitialSpec& ini = cfg.initial;
  if (ini.type != "modes" && ini.type != "random")
    throw ConfigError("initial.type must be \"modes\" or \"random\", got \"" + ini.type + "\"");
  if (ini.type == "modes") {
    if (ini.modes.empty()) throw ConfigError("initial.modes must be nonempty");
    for (const ModeAmplitude& m : ini.modes) {
      if (m.n == 0) throw ConfigError("initial.modes: zero mode not allowed (fields are zero-mean)");
      if (std::abs(m.n) > cfg.lattice.n_max)
        throw ConfigError("initial.modes: |n| exceeds lattice.n_max");
    }
  } else {
    if (!(ini.amplitude > 0.0)) throw ConfigError("initial.amplitude must be positive");
    if (!(ini.decay_margin >= 0.0)) throw ConfigError("initial.decay_margin must be >= 0");
  }

  const Tolerances& t = cfg.tol;
  for (double v : {t.resolvent, t.gauge, t.gradient, t.beta, t.intertwine, t.conservation,
                   t.series, t.quadrature, t.trap, t.bound_slack})
    if (!(v > 0.0)) throw ConfigError("tolerances must all be positive");
}

ExperimentConfig from_json(const json& root) {
  if (!root.is_object()) throw ConfigError("config root must be a JSON object");
  require_keys(root, "config root",
               {"lattice", "initial", "flow", "kappa", "dt", "t_end", "record_every",
                "lambda_probes", "kappas", "out_dir", "step_check_tol", "tolerances"});
  ExperimentConfig cfg;

  if (root.contains("lattice")) {
    const json& lat = root.at("lattice");
    if (!lat.is_object()) throw ConfigError("config field \"lattice\" must be an object");
    require_keys(lat, "lattice", {"n_max", "rho", "s"});
    cfg.lattice.n_max = static_cast<int>(get_integer(lat, "n_max", cfg.lattice.n_max));
    cfg.lattice.rho = get_number(lat, "rho", cfg.lattice.rho);
    cfg.lattice.s = get_number(lat, "s", cfg.lattice.s);
  }

  if (root.contains("initial")) {
    const json& ini = root.at("initial");
    if (!ini.is_object()) throw ConfigError("config field \"initial\" must be an object");
    require_keys(ini, "initial",
                 {"type", "modes", "symmetrize", "seed", "amplitude", "decay_margin"});
    cfg.initial.type = get_string(ini, "type", cfg.initial.type);
    cfg.initial.symmetrize = get_bool(ini, "symmetrize", cfg.initial.symmetrize);
    cfg.initial.seed = static_cast<std::uint64_t>(
        get_integer(ini, "seed", static_cast<long long>(cfg.initial.seed)));
    cfg.initial.amplitude = get_number(ini, "amplitude", cfg.initial.amplitude);
    cfg.initial.decay_margin = get_number(ini, "decay_margin", cfg.initial.decay_margin);
    if (ini.contains("modes")) {
      const json& modes = ini.at("modes");
      if (!modes.is_array()) throw ConfigError("initial.modes must be an array");
      cfg.initial.modes.clear();
      for (const json& m : modes) {
        if (!m.is_object()) throw ConfigError("initial.modes entries must be objects");
        require_keys(m, "initial.modes entry", {"n", "re", "im"});
        if (!m.contains("n")) throw ConfigError("initial.modes entry missing \"n\"");
        ModeAmplitude ma;
        ma.n = static_cast<int>(get_integer(m, "n", 0));
        ma.re = get_number(m, "re", 0.0);
        ma.im = get_number(m, "im", 0.0);
        cfg.initial.modes.push_back(ma);
      }
    }
  }

  cfg.flow_kind = get_string(root, "flow", cfg.flow_kind);
  cfg.kappa = get_number(root, "kappa", cfg.kappa);
  cfg.dt = get_number(root, "dt", cfg.dt);
  cfg.t_end = get_number(root, "t_end", cfg.t_end);
  cfg.record_every = static_cast<int>(get_integer(root, "record_every", cfg.record_every));
  cfg.lambda_probes = get_number_list(root, "lambda_probes", cfg.lambda_probes);
  cfg.kappas = get_number_list(root, "kappas", cfg.kappas);
  cfg.out_dir = get_string(root, "out_dir", cfg.out_dir);
  cfg.step_check_tol = get_number(root, "step_check_tol", cfg.step_check_tol);

  if (root.contains("tolerances")) {
    const json& tol = root.at("tolerances");
    if (!tol.is_object()) throw ConfigError("config field \"tolerances\" must be an object");
    require_keys(tol, "tolerances",
                 {"resolvent", "gauge", "gradient", "beta", "intertwine", "conservation",
                  "series", "quadrature", "trap", "bound_slack"});
    Tolerances& t = cfg.tol;
    t.resolvent = get_number(tol, "resolvent", t.resolvent);
    t.gauge = get_number(tol, "gauge", t.gauge);
    t.gradient = get_number(tol, "gradient", t.gradient);
    t.beta = get_number(tol, "beta", t.beta);
    t.intertwine = get_number(tol, "intertwine", t.intertwine);
    t.conservation = get_number(tol, "conservation", t.conservation);
    t.series = get_number(tol, "series", t.series);
    t.quadrature = get_number(tol, "quadrature", t.quadrature);
    t.trap = get_number(tol, "trap", t.trap);
    t.bound_slack = get_number(tol, "bound_slack", t.bound_slack);
  }
  return cfg;
}

void apply_overrides(ExperimentConfig& cfg,
                     const std::map<std::string, std::string>& overrides) {
  for (const auto& [key, value] : overrides) {
    if (key == "out") {
      cfg.out_dir = value;
    } else if (key == "seed") {
      try {
        cfg.initial.seed = std::stoull(value);
      } catch (const std::exception&) {
        throw ConfigError("invalid numeric value \"" + value + "\" for override seed");
      }
    } else if (key == "dt") {
      cfg.dt = parse_double_flag("dt", value);
    } else if (key == "t_end") {
      cfg.t_end = parse_double_flag("t_end", value);
    } else if (key == "kappa") {
      cfg.kappa = parse_double_flag("kappa", value);
    } else {
      throw ConfigError("unknown override flag \"" + key + "\"");
    }
  }
}

// Canonical form of the experiment: the output directory is deliberately
// omitted so the hash identifies the computation, not where it lands.
json to_json(const ExperimentConfig& cfg) {
  json modes = json::array();
  for (const ModeAmplitude& m : cfg.initial.modes)
    modes.push_back({{"n", m.n}, {"re", m.re}, {"im", m.im}});
  return json{
      {"lattice", {{"n_max", cfg.lattice.n_max}, {"rho", cfg.lattice.rho}, {"s", cfg.lattice.s}}},
      {"initial",
       {{"type", cfg.initial.type},
        {"modes", modes},
        {"symmetrize", cfg.initial.symmetrize},
        {"seed", cfg.initial.seed},
        {"amplitude", cfg.initial.amplitude},
        {"decay_margin", cfg.initial.decay_margin}}},
      {"flow", cfg.flow_kind},
      {"kappa", cfg.kappa},
      {"dt", cfg.dt},
      {"t_end", cfg.t_end},
      {"record_every", cfg.record_every},
      {"lambda_probes", cfg.lambda_probes},
      {"kappas", cfg.kappas},
      {"step_check_tol", cfg.step_check_tol},
      {"tolerances",
       {{"resolvent", cfg.tol.resolvent},
        {"gauge", cfg.tol.gauge},
        {"gradient", cfg.tol.gradient},
        {"beta", cfg.tol.beta},
        {"intertwine", cfg.tol.intertwine},
        {"conservation", cfg.tol.conservation},
        {"series", cfg.tol.series},
        {"quadrature", cfg.tol.quadrature},
        {"trap", cfg.tol.trap},
        {"bound_slack", cfg.tol.bound_slack}}}};
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ConfigError("cannot open output file " + path.string());
  os << text;
  if (!os) throw ConfigError("failed writing output file " + path.string());
}

json meta_json(const ExperimentConfig& cfg) {
  return json{{"config_hash", config_hash(cfg)},
              {"lattice",
               {{"n_max", cfg.lattice.n_max}, {"rho", cfg.lattice.rho}, {"s", cfg.lattice.s}}},
              {"tolerances", to_json(cfg).at("tolerances")}};
}

int run_constants(const ExperimentConfig& cfg, const std::filesystem::path& dir) {
  const GeometricConstants gc = geometric_constants(cfg.tol.series);
  json out{{"c1", gc.c1},
           {"c2", gc.c2},
           {"x_max", gc.x_max},
           {"A_max", gc.A_max},
           {"series_check", {{"c1_err", gc.c1_series_err}, {"c2_err", gc.c2_series_err}}},
           {"meta", meta_json(cfg)}};
  write_text_file(dir / "constants.json", out.dump(2) + "\n");
  std::cout << "c1 = " << fmt(gc.c1) << "\nc2 = " << fmt(gc.c2) << "\nx_max = " << fmt(gc.x_max)
            << "\nA_max = " << fmt(gc.A_max) << "\n";
  return 0;
}

int run_verify(const ExperimentConfig& cfg, const std::filesystem::path& dir) {
  const std::vector<CheckResult> results = run_verification_suite(cfg);
  bool all_pass = true;
  json checks = json::array();
  for (const CheckResult& r : results) {
    all_pass = all_pass && r.pass;
    checks.push_back({{"name", r.name},
                      {"pass", r.pass},
                      {"measured", r.measured},
                      {"bound", r.bound},
                      {"detail", r.detail}});
    std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << r.name
              << "  measured=" << fmt(r.measured) << "  bound=" << fmt(r.bound) << "\n";
  }
  json out{{"all_pass", all_pass}, {"checks", checks}, {"meta", meta_json(cfg)}};
  write_text_file(dir / "verify.json", out.dump(2) + "\n");
  std::cout << (all_pass ? "verify: all checks passed" : "verify: FAILURES present") << "\n";
  return all_pass ? 0 : 2;
}

int run_simulate(const ExperimentConfig& cfg, const std::filesystem::path& dir) {
  const Field u0 = initial_field(cfg);
  const FlowKind kind = flow_kind_of(cfg, u0);
  const Trajectory traj = evolve(u0, kind, flow_config_of(cfg));
  std::ostringstream os;
  write_report_csv(os, traj.report, metadata_lines(cfg));
  write_text_file(dir / "simulate.csv", os.str());
  std::cout << "simulate: " << traj.times.size() << " records to "
            << (dir / "simulate.csv").string() << "\n";
  return 0;
}

int run_converge(const ExperimentConfig& cfg, const std::filesystem::path& dir) {
  const Field u0 = initial_field(cfg);
  const KappaConvergence kc = kappa_convergence(u0, cfg.kappas, cfg.t_end, flow_config_of(cfg));
  std::ostringstream os;
  for (const std::string& line : metadata_lines(cfg)) os << "# " << line << "\n";
  os << "# epsilon=" << fmt(kc.epsilon) << "\n";
  os << "# kappa_max=" << fmt(kc.kappa_max) << "\n";
  os << "# bo_distance_l2=" << fmt(kc.bo_dist_l2) << "\n";
  os << "kappa_a,kappa_b,sup_dist_l2,sup_dist_rho1\n";
  for (const KappaPairRow& row : kc.pairs)
    os << fmt(row.kappa_a) << ',' << fmt(row.kappa_b) << ',' << fmt(row.sup_dist_l2) << ','
       << fmt(row.sup_dist_rho1) << "\n";
  write_text_file(dir / "converge.csv", os.str());
  std::cout << "converge: " << kc.pairs.size() << " pair rows, bo distance "
            << fmt(kc.bo_dist_l2) << "\n";
  return 0;
}

int run_trap(const ExperimentConfig& cfg, const std::filesystem::path& dir) {
  const Field u0 = initial_field(cfg);
  const FlowKind kind = flow_kind_of(cfg, u0);
  const TrapReport rep = trap_experiment(u0, cfg.lattice.rho, kind, flow_config_of(cfg));
  json out{{"A", rep.A},
           {"X_max", rep.X_max},
           {"sup_norm", rep.sup_norm},
           {"trapped", rep.trapped},
           {"energy_drift_rel", rep.energy_drift_rel},
           {"bounds_all_ok", rep.bounds_all_ok},
           {"bounds_min_slack", rep.bounds_min_slack},
           {"meta", meta_json(cfg)}};
  write_text_file(dir / "trap.json", out.dump(2) + "\n");
  std::cout << "trap: A=" << fmt(rep.A) << " X_max=" << fmt(rep.X_max)
            << " sup_norm=" << fmt(rep.sup_norm) << (rep.trapped ? " trapped" : " NOT trapped")
            << "\n";
  const bool ok = rep.trapped && rep.bounds_all_ok &&
                  rep.energy_drift_rel <= cfg.tol.conservation;
  return ok ? 0 : 2;
}

}  // namespace

ExperimentConfig config_from_json_text(const std::string& text,
                                       const std::map<std::string, std::string>& overrides) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  ExperimentConfig cfg = from_json(root);
  apply_overrides(cfg, overrides);
  validate(cfg);
  return cfg;
}

ExperimentConfig parse_config(const std::string& path,
                              const std::map<std::string, std::string>& overrides) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError("cannot read config file " + path);
  std::ostringstream buf;
  buf << is.rdbuf();
  return config_from_json_text(buf.str(), overrides);
}

Field initial_field(const ExperimentConfig& cfg) {
  if (cfg.initial.type == "random")
    return random_analytic_field(cfg.initial.seed, cfg.lattice, cfg.initial.amplitude,
                                 cfg.initial.decay_margin);
  std::vector<std::pair<int, cdouble>> modes;
  modes.reserve(cfg.initial.modes.size());
  for (const ModeAmplitude& m : cfg.initial.modes)
    modes.emplace_back(m.n, cdouble{m.re, m.im});
  return make_field(modes, cfg.lattice, cfg.initial.symmetrize);
}

FlowKind flow_kind_of(const ExperimentConfig& cfg, const Field& u0) {
  if (cfg.flow_kind == "bo") return FlowKind::bo();
  return FlowKind::h_kappa(cfg.kappa > 0.0 ? cfg.kappa : default_kappa(u0));
}

FlowConfig flow_config_of(const ExperimentConfig& cfg) {
  FlowConfig fc;
  fc.dt = cfg.dt;
  fc.t_end = cfg.t_end;
  fc.record_every = cfg.record_every;
  fc.lattice = cfg.lattice;
  fc.lambda_probes = cfg.lambda_probes;
  fc.step_check_tol = cfg.step_check_tol;
  return fc;
}

std::string canonical_json(const ExperimentConfig& cfg) { return to_json(cfg).dump(); }

std::string config_hash(const ExperimentConfig& cfg) {
  const std::string text = canonical_json(cfg);
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string resolve_out_dir(const ExperimentConfig& cfg) {
  if (!cfg.out_dir.empty()) return cfg.out_dir;
  if (const char* env = std::getenv("BOLAX_OUT_DIR"); env && *env) return env;
  return "out";
}

std::vector<std::string> metadata_lines(const ExperimentConfig& cfg) {
  std::vector<std::string> lines;
  lines.push_back("config_hash=" + config_hash(cfg));
  lines.push_back("lattice=n_max:" + std::to_string(cfg.lattice.n_max) +
                  ",rho:" + fmt(cfg.lattice.rho) + ",s:" + fmt(cfg.lattice.s));
  lines.push_back("flow=" + cfg.flow_kind +
                  (cfg.flow_kind == "h_kappa" ? ",kappa:" + fmt(cfg.kappa) : std::string{}));
  lines.push_back("dt=" + fmt(cfg.dt) + ",t_end=" + fmt(cfg.t_end) +
                  ",record_every=" + std::to_string(cfg.record_every));
  lines.push_back("tolerances=conservation:" + fmt(cfg.tol.conservation) +
                  ",resolvent:" + fmt(cfg.tol.resolvent) + ",intertwine:" + fmt(cfg.tol.intertwine));
  return lines;
}

int dispatch(const ExperimentConfig& cfg, const std::string& command) {
  const std::filesystem::path dir = resolve_out_dir(cfg);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory " + dir.string() + ": " + ec.message());

  if (command == "constants") return run_constants(cfg, dir);
  if (command == "verify") return run_verify(cfg, dir);
  if (command == "simulate") return run_simulate(cfg, dir);
  if (command == "converge") return run_converge(cfg, dir);
  if (command == "trap") return run_trap(cfg, dir);
  throw ConfigError("unknown command \"" + command + "\"");
}

}  // namespace bolax
