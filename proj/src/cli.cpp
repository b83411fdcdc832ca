// Copyright 2026 The kerrzz Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "kerrzz/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "json.hpp"
#include "kerrzz/circuit.hpp"
#include "kerrzz/error.hpp"
#include "kerrzz/experiments.hpp"
#include "kerrzz/schedule.hpp"
#include "kerrzz/selftest.hpp"
#include "kerrzz/units.hpp"

namespace kerrzz {

namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

constexpr double kCiWindow = 200e-9;  // longest density-matrix window in the ci tier

struct RunRecord {
  ordered_json stats = ordered_json::object();
  ordered_json results = ordered_json::object();
  std::vector<std::string> outputs;
  Warnings warnings;
};

ordered_json stats_json(const IntegratorStats& s) {
  return {{"steps", s.steps},
          {"rejected", s.rejected},
          {"rhs_evaluations", s.rhs_evaluations},
          {"max_trace_error", s.max_trace_error},
          {"max_purity_drift", s.max_purity_drift},
          {"wall_seconds", s.wall_seconds}};
}

std::string num(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

void emit(const RunRequest& req, const std::string& schema_name, const std::string& file,
          const CsvTable& table, RunRecord& rec) {
  const fs::path path = fs::path(req.out_dir) / file;
  CsvTable t = table;
  t.metadata.insert(t.metadata.begin(),
                    {"kerrzz " + std::string(kVersion), "subcommand: " + req.subcommand});
  write_csv(path.string(), t);
  const auto& schemas = csv_schemas();
  const auto it = std::find_if(schemas.begin(), schemas.end(),
                               [&](const CsvSchema& s) { return s.name == schema_name; });
  if (it == schemas.end()) throw Error(ErrorKind::io, "no schema named " + schema_name);
  const auto problems = validate_csv(path.string(), *it);
  if (!problems.empty()) throw Error(ErrorKind::io, path.string() + ": " + problems.front());
  rec.outputs.push_back(file);
}

DetuningSchedule schedule_from(const SystemParams& p, double t_f, double alpha_max) {
  DetuningSchedule s;
  s.alpha_min = p.alpha_c_min;
  s.alpha_max = alpha_max;
  s.t_f = t_f;
  s.g = p.g[0][0];
  s.alpha = p.alpha();
  s.validate();
  return s;
}

double resolve_alpha_max(const Config& cfg, double t_f) {
  if (cfg.has_value("alpha_c_max")) return cfg.number("alpha_c_max");
  const double tabulated = table3_alpha_max(units::to_ns(t_f));
  if (tabulated > 0.0) return tabulated;
  throw Error(ErrorKind::config, "missing key 'alpha_c_max' (dimensionless): no tabulated value for t_f = " +
                                     num(units::to_ns(t_f)) + " ns");
}

bool is_model2(const Config& cfg) {
  const std::string m = cfg.raw("model");
  if (m == "I" || m == "1") return false;
  if (m == "II" || m == "2") return true;
  throw Error(ErrorKind::config, "model must be I or II, got '" + m + "'");
}

IntegratorOptions integrator_for(const RunRequest& req, const std::string& stem) {
  IntegratorOptions o = req.config.integrator();
  if (req.config.tier() == Tier::full && o.checkpoint_path.empty()) {
    o.checkpoint_path = (fs::path(req.out_dir) / (stem + ".ckpt")).string();
  }
  return o;
}

void run_off_residual_cmd(const RunRequest& req, RunRecord& rec) {
  const Config& cfg = req.config;
  const double t_end = units::ns(cfg.number("t_end_ns"));
  const double dt = units::ns(cfg.number("dt_ns"));
  const bool density = cfg.flag("force_density") || cfg.number("kappa_over_2pi_khz") > 0.0;
  if (density && cfg.tier() == Tier::ci && t_end > kCiWindow * (1.0 + 1e-12)) {
    throw Error(ErrorKind::config, "density-matrix windows beyond 200 ns need tier = full");
  }
  const auto grid = uniform_grid(0.0, t_end, dt);
  const IntegratorOptions opts = integrator_for(req, "off_residual");
  OffResidualResult r;
  if (is_model2(cfg)) {
    const DerivedParamsII d = derive_model2(cfg.circuit(), &rec.warnings);
    SystemParamsII p = d.to_system_params(units::khz(cfg.number("kappa_over_2pi_khz")));
    r = run_off_residual_model2(p, cfg.truncation(density), grid, opts, cfg.flag("force_density"));
  } else {
    r = run_off_residual(cfg.system_params(), cfg.truncation(density), grid, opts,
                         cfg.flag("force_density"));
  }
  CsvTable t;
  t.metadata = {"model: " + cfg.raw("model"),
                "delta1_over_2pi_ghz: " + num(units::to_ghz(r.delta1)),
                "max_infidelity: " + num(r.max_infidelity),
                "slope_per_ns: " + num(r.slope.slope * 1e-9),
                "secular_over_amplitude: " + num(r.slope.amplitude > 0 ? r.slope.secular / r.slope.amplitude : 0.0)};
  t.columns = {"t_ns", "infidelity", "analytic_infidelity"};
  for (std::size_t i = 0; i < r.t.size(); ++i) {
    t.rows.push_back({units::to_ns(r.t[i]), r.infidelity[i], r.analytic[i]});
  }
  emit(req, "off-residual", "off_residual.csv", t, rec);
  rec.stats = stats_json(r.stats);
  rec.results = {{"max_infidelity", r.max_infidelity},
                 {"slope_test_pass", r.slope.pass},
                 {"secular", r.slope.secular},
                 {"amplitude", r.slope.amplitude}};
}

void run_rzz_gate_cmd(const RunRequest& req, RunRecord& rec) {
  const Config& cfg = req.config;
  const SystemParams p = cfg.system_params();
  const double t_f = units::ns(cfg.number("t_f_ns"));
  const double amax = resolve_alpha_max(cfg, t_f);
  const double theta = cfg.number("theta_over_pi") * std::numbers::pi;
  const IntegratorOptions opts = integrator_for(req, "rzz_gate");
  SystemParams lossless = p;
  lossless.kappa = 0.0;
  const bool force = cfg.flag("force_density");
  const GateResult g0 = run_rzz_gate(lossless, cfg.truncation(force), t_f, amax, theta, opts, force);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  GateResult gk = g0;
  gk.infidelity = nan;
  gk.analytic_dephasing = nan;
  if (p.kappa > 0.0) {
    if (cfg.tier() == Tier::ci && t_f > kCiWindow * (1.0 + 1e-12)) {
      throw Error(ErrorKind::config, "density-matrix windows beyond 200 ns need tier = full");
    }
    gk = run_rzz_gate(p, cfg.truncation(true), t_f, amax, theta, opts);
  }
  CsvTable t;
  t.metadata = {"theta_target_rad: " + num(theta), "theta_schedule_rad: " + num(g0.theta_schedule)};
  t.columns = {"t_f_ns", "alpha_max", "infidelity_k0", "infidelity_kappa", "theta_rad",
               "analytic_dephasing"};
  t.rows.push_back({units::to_ns(t_f), amax, g0.infidelity, gk.infidelity, g0.theta_schedule,
                    gk.analytic_dephasing});
  emit(req, "rzz-gate", "rzz_gate.csv", t, rec);
  rec.stats = {{"kappa_0", stats_json(g0.stats)}};
  if (p.kappa > 0.0) rec.stats["kappa_on"] = stats_json(gk.stats);
  rec.results = {{"alpha_max", amax}, {"infidelity_k0", g0.infidelity}, {"theta_schedule", g0.theta_schedule}};
  if (p.kappa > 0.0) rec.results["infidelity_kappa"] = gk.infidelity;
}

void run_optimize_cmd(const RunRequest& req, RunRecord& rec) {
  const Config& cfg = req.config;
  const SystemParams p = cfg.system_params();
  std::vector<double> times;
  for (double t : cfg.numbers("sweep_t_f_ns")) times.push_back(units::ns(t));
  SweepOptions so;
  const std::string mode = cfg.raw("search");
  if (mode == "coarse") {
    so.mode = SearchMode::coarse;
  } else if (mode == "refined") {
    so.mode = SearchMode::refined;
  } else {
    throw Error(ErrorKind::config, "search must be coarse or refined, got '" + mode + "'");
  }
  so.kappa = p.kappa;
  so.lossy_truncation = cfg.truncation(true);
  so.jobs = cfg.integer("jobs");
  so.integrator = cfg.integrator();
  const double theta = cfg.number("theta_over_pi") * std::numbers::pi;
  const auto rows = run_table3_sweep(p, cfg.truncation(), times, theta, so);
  CsvTable t;
  t.metadata = {"search: " + mode, "theta_target_rad: " + num(theta)};
  t.columns = {"t_f_ns", "alpha_max", "alpha_max_table", "alpha_max_coarse", "infidelity_k0",
               "infidelity_k20k", "theta_rad"};
  ordered_json res = ordered_json::array();
  for (const auto& r : rows) {
    const double tab = table3_alpha_max(units::to_ns(r.t_f));
    t.rows.push_back({units::to_ns(r.t_f), r.alpha_max, tab > 0.0 ? tab : std::nan(""),
                      r.alpha_max_coarse, r.infidelity_k0, r.infidelity_kappa, r.theta});
    res.push_back({{"t_f_ns", units::to_ns(r.t_f)}, {"alpha_max", r.alpha_max}, {"infidelity_k0", r.infidelity_k0}});
  }
  emit(req, "optimize-alpha", "optimize_alpha.csv", t, rec);
  rec.results = {{"rows", res}};
}

void run_circuit_cmd(const RunRequest& req, RunRecord& rec) {
  const Config& cfg = req.config;
  using namespace units;
  CsvTable t;
  if (is_model2(cfg) || cfg.number("EL_over_h_ghz") == 0.0) {
    const DerivedParamsII d = derive_model2(cfg.circuit(), &rec.warnings);
    const double d1 = detuning_condition_model2(d.to_system_params());
    t.metadata = {"model: II"};
    t.columns = {"E_C_over_h_mhz", "x", "y", "z", "w", "EJ_kpo_dc_over_h_ghz", "EJ_c1_dc_over_h_ghz",
                 "EJ_c2_dc_over_h_ghz", "K_over_2pi_mhz", "p_over_2pi_mhz", "alpha",
                 "chi1_over_2pi_mhz", "chi2_over_2pi_mhz", "delta1_over_2pi_ghz",
                 "delta2_over_2pi_ghz", "g1_over_2pi_mhz", "g2_over_2pi_mhz", "g_kpo_over_2pi_khz",
                 "g_c_over_2pi_khz", "delta1_condition_over_2pi_ghz"};
    t.rows.push_back({energy_to_ghz(d.E_C) * 1e3, d.x, d.y, d.z, d.w, energy_to_ghz(d.ej_dc_kpo),
                      energy_to_ghz(d.ej_dc_c[0]), energy_to_ghz(d.ej_dc_c[1]), to_mhz(d.kerr),
                      to_mhz(d.pump), d.alpha, to_mhz(d.chi[0]), to_mhz(d.chi[1]),
                      to_ghz(d.detuning[0]), to_ghz(d.detuning[1]), to_mhz(d.g[0]), to_mhz(d.g[1]),
                      to_khz(d.g_kpo), to_khz(d.g_c), to_ghz(d1)});
    emit(req, "circuit-derive", "circuit_derive.csv", t, rec);
  } else {
    const DerivedParamsI d = derive_model1(cfg.circuit(), &rec.warnings);
    t.metadata = {"model: I"};
    t.columns = {"E_C_over_h_mhz", "x", "u", "v", "K_over_2pi_mhz", "p_over_2pi_mhz",
                 "chi1_over_2pi_mhz", "chi2_over_2pi_mhz", "delta1_over_2pi_ghz",
                 "delta2_over_2pi_ghz", "g11_over_2pi_mhz", "g22_over_2pi_mhz", "g12_over_2pi_mhz",
                 "g21_over_2pi_mhz"};
    t.rows.push_back({energy_to_ghz(d.E_C) * 1e3, d.x, d.u, d.v, to_mhz(d.kerr[0]), to_mhz(d.pump[0]),
                      to_mhz(d.kerr[2]), to_mhz(d.kerr[3]), to_ghz(d.detuning[2]),
                      to_ghz(d.detuning[3]), to_mhz(d.g_same[0]), to_mhz(d.g_same[1]),
                      to_mhz(d.g12), to_mhz(d.g21)});
    emit(req, "circuit-derive-I", "circuit_derive.csv", t, rec);
  }
}

void run_preview_cmd(const RunRequest& req, RunRecord& rec) {
  const Config& cfg = req.config;
  const SystemParams p = cfg.system_params();
  const double t_f = units::ns(cfg.number("t_f_ns"));
  const DetuningSchedule s = schedule_from(p, t_f, resolve_alpha_max(cfg, t_f));
  const int n = cfg.integer("preview_points");
  if (n < 2) throw Error(ErrorKind::config, "preview_points must be at least 2");
  CsvTable t;
  t.metadata = {"alpha_max: " + num(s.alpha_max), "theta_rad: " + num(theta_of_schedule(s)),
                "theta_direct_rad: " + num(theta_direct(s)),
                "theta_substituted_rad: " + num(theta_substituted(s))};
  t.columns = {"t_ns", "lambda", "delta1_over_2pi_ghz", "delta2_over_2pi_ghz"};
  for (int i = 0; i < n; ++i) {
    const double tt = t_f * i / (n - 1);
    const double d1 = delta1_of_t(tt, s);
    t.rows.push_back({units::to_ns(tt), 2.0 * s.g * s.alpha / d1, units::to_ghz(d1),
                      units::to_ghz(s.delta2())});
  }
  emit(req, "schedule-preview", "schedule_preview.csv", t, rec);
  rec.results = {{"theta_rad", theta_of_schedule(s)}, {"alpha_max", s.alpha_max}};
}

int run_selftest_cmd(std::ostream& log, RunRecord& rec) {
  bool ok = true;
  ordered_json res = ordered_json::object();
  for (const auto& r : run_selftest()) {
    log << (r.pass ? "PASS " : "FAIL ") << r.name << ": " << r.detail << '\n';
    res[r.name] = r.pass;
    ok = ok && r.pass;
  }
  rec.results = res;
  return ok ? exit_ok : exit_domain_error;
}

void write_manifest(const RunRequest& req, const RunRecord& rec, const std::string& status,
                    const std::string& error) {
  ordered_json m;
  m["kerrzz_version"] = kVersion;
  m["subcommand"] = req.subcommand;
  m["status"] = status;
  if (!error.empty()) m["error"] = error;
  m["config_source"] = req.config_source;
  ordered_json cfg = ordered_json::object();
  for (const auto& [k, v] : req.config.values()) cfg[k] = v;
  m["config"] = cfg;
  m["outputs"] = rec.outputs;
  m["warnings"] = rec.warnings;
  m["integrator_stats"] = rec.stats;
  m["results"] = rec.results;
  const fs::path path = fs::path(req.out_dir) / (req.subcommand + ".manifest.json");
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::io, "cannot write " + path.string());
  out << m.dump(2) << '\n';
}

}  // namespace

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names = {"off-residual",   "rzz-gate",         "optimize-alpha",
                                                 "circuit-derive", "schedule-preview", "selftest"};
  return names;
}

Config load_config(const std::string& path, std::string* subcommand) {
  if (fs::path(path).extension() != ".json") return Config::from_file(path);
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io, "cannot read manifest " + path);
  ordered_json m;
  try {
    m = ordered_json::parse(in);
  } catch (const std::exception& e) {
    throw Error(ErrorKind::config, path + ": " + e.what());
  }
  if (!m.contains("config") || !m["config"].is_object()) {
    throw Error(ErrorKind::config, path + ": manifest has no config block");
  }
  Config cfg;
  for (const auto& [k, v] : m["config"].items()) cfg.set(k, v.get<std::string>());
  if (subcommand != nullptr && m.contains("subcommand")) *subcommand = m["subcommand"].get<std::string>();
  return cfg;
}

int dispatch(const RunRequest& req, std::ostream& log) {
  const auto& names = subcommands();
  if (std::find(names.begin(), names.end(), req.subcommand) == names.end()) {
    log << "error: unknown subcommand '" << req.subcommand << "'\n";
    return exit_usage_error;
  }
  RunRecord rec;
  try {
    fs::create_directories(req.out_dir);
  } catch (const std::exception& e) {
    log << "error: cannot create output directory " << req.out_dir << ": " << e.what() << '\n';
    return exit_usage_error;
  }
  int code = exit_ok;
  std::string error;
  try {
    req.config.tier();  // reject a bad tier before any work
    if (req.subcommand == "off-residual") {
      run_off_residual_cmd(req, rec);
    } else if (req.subcommand == "rzz-gate") {
      run_rzz_gate_cmd(req, rec);
    } else if (req.subcommand == "optimize-alpha") {
      run_optimize_cmd(req, rec);
    } else if (req.subcommand == "circuit-derive") {
      run_circuit_cmd(req, rec);
    } else if (req.subcommand == "schedule-preview") {
      run_preview_cmd(req, rec);
    } else {
      code = run_selftest_cmd(log, rec);
    }
  } catch (const Error& e) {
    error = e.what();
    code = e.kind() == ErrorKind::config ? exit_usage_error : exit_domain_error;
  } catch (const std::exception& e) {
    error = e.what();
    code = exit_domain_error;
  }
  for (const auto& w : rec.warnings) log << "warning: " << w << '\n';
  if (!error.empty()) log << "error: " << error << '\n';
  try {
    write_manifest(req, rec, code == exit_ok ? "ok" : (rec.outputs.empty() ? "failed" : "partial"), error);
  } catch (const std::exception& e) {
    log << "error: " << e.what() << '\n';
    if (code == exit_ok) code = exit_domain_error;
  }
  for (const auto& o : rec.outputs) log << "wrote " << (fs::path(req.out_dir) / o).string() << '\n';
  return code;
}

}  // namespace kerrzz
