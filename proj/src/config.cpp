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

#include "kerrzz/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include "kerrzz/error.hpp"
#include "kerrzz/units.hpp"

namespace kerrzz {

namespace {

// Key suffix -> unit text accepted after a value.
struct UnitSuffix {
  const char* suffix;
  const char* unit;
};
constexpr UnitSuffix kSuffixes[] = {
    {"_mhz", "MHz"}, {"_ghz", "GHz"}, {"_khz", "kHz"}, {"_hz", "Hz"}, {"_ns", "ns"},
    {"_us", "us"},   {"_pf", "pF"},   {"_ff", "fF"},   {"_rad", "rad"},
};

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

bool ends_with(const std::string& s, const std::string& tail) {
  return s.size() >= tail.size() && s.compare(s.size() - tail.size(), tail.size(), tail) == 0;
}

// (stem, suffix) of a key; suffix is "" for dimensionless keys.
std::pair<std::string, std::string> split_unit(const std::string& key) {
  for (const auto& u : kSuffixes) {
    if (ends_with(key, u.suffix)) return {key.substr(0, key.size() - std::strlen(u.suffix)), u.suffix};
  }
  return {key, ""};
}

const KeyInfo* find_key(const std::string& key) {
  for (const auto& k : config_keys()) {
    if (k.name == key) return &k;
  }
  return nullptr;
}

[[noreturn]] void config_error(const std::string& msg) { throw Error(ErrorKind::config, msg); }

double to_double(const std::string& key, const std::string& text) {
  const auto [value, unit] = parse_quantity(text);
  const KeyInfo* info = find_key(key);
  if (!unit.empty()) {
    if (info == nullptr || lower(unit) != lower(info->unit)) {
      config_error("unit mismatch for '" + key + "': value carries '" + unit + "', key expects " +
                   (info == nullptr || info->unit.empty() ? std::string("no unit") : info->unit));
    }
  }
  return value;
}

}  // namespace

const std::vector<KeyInfo>& config_keys() {
  static const std::vector<KeyInfo> keys = {
      // System (Table I).
      {"K_over_2pi_mhz", "MHz", "20", "KPO Kerr coefficient K/2pi"},
      {"p_over_2pi_mhz", "MHz", "80", "two-photon pump amplitude p/2pi"},
      {"chi_over_2pi_mhz", "MHz", "10", "coupler Kerr coefficient chi/2pi"},
      {"g_over_2pi_mhz", "MHz", "10", "KPO-coupler coupling g/2pi"},
      {"kappa_over_2pi_khz", "kHz", "0", "single-photon loss rate kappa/2pi"},
      {"alpha_c_min", "", "0.04", "coupler displacement at the off point"},
      {"model", "", "I", "circuit model: I (Table I Hamiltonian) or II (all-capacitive)"},
      // Gate and schedule.
      {"t_f_ns", "ns", "16", "gate time"},
      {"alpha_c_max", "", "auto", "peak coupler displacement; auto takes the tabulated value"},
      {"theta_over_pi", "", "-0.5", "target R_zz angle in units of pi"},
      {"sweep_t_f_ns", "ns", "8,16,30,60", "gate times for optimize-alpha"},
      {"search", "", "refined", "alpha_max search: coarse (phase only) or refined (infidelity)"},
      {"jobs", "", "1", "concurrent sweep points"},
      {"preview_points", "", "401", "samples in schedule-preview"},
      // Time grid for residual runs.
      {"t_end_ns", "ns", "20", "end of the residual-coupling window"},
      {"dt_ns", "ns", "0.1", "sample spacing"},
      {"force_density", "", "false", "integrate the density matrix even when kappa = 0"},
      // Truncation.
      {"kpo_cutoff", "", "0", "KPO Fock cutoff before diagonalization; 0 = automatic"},
      {"kpo_keep", "", "6", "retained KPO eigenstates"},
      {"coupler_cutoff", "", "10", "coupler Fock dimension"},
      {"lossy_kpo_keep", "", "4", "retained KPO eigenstates for density-matrix runs"},
      {"lossy_coupler_cutoff", "", "4", "coupler Fock dimension for density-matrix runs"},
      // Integrator.
      {"rtol", "", "1e-9", "relative tolerance"},
      {"atol", "", "1e-12", "absolute tolerance"},
      {"checkpoint", "", "", "checkpoint file for long runs (empty = off)"},
      {"tier", "", "ci", "ci or full"},
      // Circuit (model II design values).
      {"C_pf", "pF", "1.1", "shunt capacitance"},
      {"C_tilde_ff", "fF", "2", "coupling capacitance"},
      {"EJ_kpo_over_h_ghz", "GHz", "800", "KPO Josephson energy E_J/h"},
      {"EJ_c1_over_h_ghz", "GHz", "660", "coupler 1 Josephson energy"},
      {"EJ_c2_over_h_ghz", "GHz", "444.69", "coupler 2 Josephson energy"},
      {"EL_over_h_ghz", "GHz", "0", "cross-link inductive energy (model I only)"},
      {"phi_kpo_dc_over_pi", "", "0.5", "KPO dc flux bias in units of pi"},
      {"phi_c1_dc_over_pi", "", "0", "coupler 1 dc flux bias in units of pi"},
      {"phi_c2_dc_over_pi", "", "0", "coupler 2 dc flux bias in units of pi"},
      {"epsilon_p", "", "7e-3", "flux pump amplitude"},
  };
  return keys;
}

std::pair<double, std::string> parse_quantity(const std::string& text) {
  const std::string s = trim(text);
  double value = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  const auto res = std::from_chars(first, last, value);
  if (res.ec != std::errc() || res.ptr == first) {
    config_error("expected a number, got '" + s + "'");
  }
  return {value, trim(std::string(res.ptr, last))};
}

Config::Config() {
  for (const auto& k : config_keys()) values_[k.name] = k.default_value;
}

Config Config::from_text(const std::string& text, const std::string& origin) {
  Config cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.find('=') == std::string::npos) {
      config_error(origin + ":" + std::to_string(lineno) + ": expected key = value");
    }
    try {
      cfg.set(line);
    } catch (const Error& e) {
      config_error(origin + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return cfg;
}

Config Config::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io, "cannot read config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_text(ss.str(), path);
}

void Config::set(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) config_error("expected key=value, got '" + assignment + "'");
  set(trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

void Config::set(const std::string& key, const std::string& value) {
  const KeyInfo* info = find_key(key);
  if (info == nullptr) {
    const auto [stem, suffix] = split_unit(key);
    for (const auto& k : config_keys()) {
      if (split_unit(k.name).first == stem) {
        config_error("unit mismatch: key '" + key + "' is not accepted; use '" + k.name + "' (" +
                     (k.unit.empty() ? std::string("dimensionless") : k.unit) + ")");
      }
    }
    config_error("unknown key '" + key + "'");
  }
  // Keys without a default (checkpoint) may be set to an empty value explicitly.
  if (value.empty() && !info->default_value.empty()) {
    config_error("missing value for '" + key + "' (expected " +
                 (info->unit.empty() ? std::string("a dimensionless value") : info->unit) + ")");
  }
  // Validate the unit of numeric values now so errors name the line.
  if (!info->unit.empty()) {
    std::stringstream parts(value);
    std::string item;
    while (std::getline(parts, item, ',')) to_double(key, item);
  }
  values_[key] = value;
}

bool Config::has_value(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) config_error("unknown key '" + key + "'");
  return !it->second.empty() && it->second != "auto";
}

const std::string& Config::raw(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) config_error("unknown key '" + key + "'");
  return it->second;
}

double Config::number(const std::string& key) const {
  if (!has_value(key)) {
    const KeyInfo* info = find_key(key);
    config_error("missing key '" + key + "' (expected " +
                 (info->unit.empty() ? std::string("a dimensionless value") : info->unit) + ")");
  }
  return to_double(key, raw(key));
}

int Config::integer(const std::string& key) const {
  const double v = number(key);
  if (v != std::floor(v) || std::abs(v) > 1e9) config_error("'" + key + "' must be an integer");
  return static_cast<int>(v);
}

bool Config::flag(const std::string& key) const {
  const std::string v = lower(raw(key));
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  config_error("'" + key + "' must be true or false, got '" + raw(key) + "'");
}

std::vector<double> Config::numbers(const std::string& key) const {
  std::vector<double> out;
  std::stringstream parts(raw(key));
  std::string item;
  while (std::getline(parts, item, ',')) {
    if (!trim(item).empty()) out.push_back(to_double(key, item));
  }
  if (out.empty()) config_error("missing key '" + key + "'");
  return out;
}

SystemParams Config::system_params() const {
  SystemParams p;
  p.kerr = units::mhz(number("K_over_2pi_mhz"));
  p.pump = units::mhz(number("p_over_2pi_mhz"));
  const double chi = units::mhz(number("chi_over_2pi_mhz"));
  const double g = units::mhz(number("g_over_2pi_mhz"));
  p.chi = {chi, chi};
  p.g = {{{g, g}, {g, g}}};
  p.kappa = units::khz(number("kappa_over_2pi_khz"));
  p.alpha_c_min = number("alpha_c_min");
  if (!(p.kerr > 0.0)) config_error("K_over_2pi_mhz must be positive");
  if (!(p.pump > 0.0)) config_error("p_over_2pi_mhz must be positive");
  if (!(p.alpha_c_min > 0.0)) config_error("alpha_c_min must be positive");
  p.delta2 = -2.0 * g * p.alpha() / p.alpha_c_min;
  p.validate();
  return p;
}

TruncationSpec Config::truncation(bool lossy) const {
  TruncationSpec t;
  t.kpo_cutoff = integer("kpo_cutoff");
  t.kpo_keep = integer(lossy ? "lossy_kpo_keep" : "kpo_keep");
  t.coupler_cutoff = integer(lossy ? "lossy_coupler_cutoff" : "coupler_cutoff");
  if (t.kpo_keep < 2 || t.coupler_cutoff < 2 || t.kpo_cutoff < 0) {
    config_error("truncation needs kpo_keep >= 2, coupler_cutoff >= 2 and kpo_cutoff >= 0");
  }
  return t;
}

IntegratorOptions Config::integrator() const {
  IntegratorOptions o;
  o.rtol = number("rtol");
  o.atol = number("atol");
  if (!(o.rtol > 0.0) || !(o.atol > 0.0)) config_error("rtol and atol must be positive");
  o.checkpoint_path = raw("checkpoint");
  return o;
}

CircuitParams Config::circuit() const {
  CircuitParams cp;
  cp.C = number("C_pf") * 1e-12;
  cp.C_tilde = number("C_tilde_ff") * 1e-15;
  const double ej_kpo = units::energy_ghz(number("EJ_kpo_over_h_ghz"));
  cp.E_J = {ej_kpo, ej_kpo, units::energy_ghz(number("EJ_c1_over_h_ghz")),
            units::energy_ghz(number("EJ_c2_over_h_ghz"))};
  const double pi = std::numbers::pi;
  const double phi_kpo = number("phi_kpo_dc_over_pi") * pi;
  cp.phi_dc = {phi_kpo, phi_kpo, number("phi_c1_dc_over_pi") * pi, number("phi_c2_dc_over_pi") * pi};
  const double eps = number("epsilon_p");
  cp.epsilon_p = {eps, eps, 0.0, 0.0};
  cp.E_L = units::energy_ghz(number("EL_over_h_ghz"));
  cp.validate();
  return cp;
}

Tier Config::tier() const {
  const std::string t = lower(raw("tier"));
  if (t == "ci") return Tier::ci;
  if (t == "full") return Tier::full;
  config_error("tier must be ci or full, got '" + raw("tier") + "'");
}

// --- CSV -----------------------------------------------------------------

void write_csv(const std::string& path, const CsvTable& table) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(ErrorKind::io, "cannot write " + path);
  for (const auto& m : table.metadata) out << "# " << m << '\n';
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    out << (i ? "," : "") << table.columns[i];
  }
  out << '\n';
  char buf[32];
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", row[i]);
      out << (i ? "," : "") << buf;
    }
    out << '\n';
  }
  if (!out) throw Error(ErrorKind::io, "write failed for " + path);
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io, "cannot read " + path);
  CsvTable t;
  std::string line;
  bool header = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      t.metadata.push_back(trim(line.substr(1)));
      continue;
    }
    std::stringstream ss(line);
    std::string cell;
    if (!header) {
      while (std::getline(ss, cell, ',')) t.columns.push_back(trim(cell));
      header = true;
      continue;
    }
    std::vector<double> row;
    while (std::getline(ss, cell, ',')) {
      const std::string c = trim(cell);
      if (c == "nan" || c == "-nan") {
        row.push_back(std::numeric_limits<double>::quiet_NaN());
        continue;
      }
      double v = 0.0;
      const auto res = std::from_chars(c.data(), c.data() + c.size(), v);
      if (res.ec != std::errc() || res.ptr != c.data() + c.size()) {
        throw Error(ErrorKind::io, path + ": non-numeric cell '" + c + "'");
      }
      row.push_back(v);
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

const std::vector<CsvSchema>& csv_schemas() {
  static const std::vector<CsvSchema> schemas = {
      {"off-residual", {"t_ns", "infidelity", "analytic_infidelity"}, {}},
      {"rzz-gate", {"t_f_ns", "alpha_max", "infidelity_k0", "infidelity_kappa", "theta_rad",
                    "analytic_dephasing"},
       {}},
      {"optimize-alpha", {"t_f_ns", "alpha_max", "alpha_max_table", "infidelity_k0",
                          "infidelity_k20k", "theta_rad"},
       {}},
      {"circuit-derive",
       {"E_C_over_h_mhz", "x", "y", "z", "w", "EJ_kpo_dc_over_h_ghz", "EJ_c1_dc_over_h_ghz",
        "EJ_c2_dc_over_h_ghz", "K_over_2pi_mhz", "p_over_2pi_mhz", "alpha", "chi1_over_2pi_mhz",
        "chi2_over_2pi_mhz", "delta1_over_2pi_ghz", "delta2_over_2pi_ghz", "g1_over_2pi_mhz",
        "g2_over_2pi_mhz", "g_kpo_over_2pi_khz", "g_c_over_2pi_khz",
        "delta1_condition_over_2pi_ghz"},
       {"x", "y", "z", "w", "alpha"}},
      {"circuit-derive-I",
       {"E_C_over_h_mhz", "x", "u", "v", "K_over_2pi_mhz", "p_over_2pi_mhz", "chi1_over_2pi_mhz",
        "chi2_over_2pi_mhz", "delta1_over_2pi_ghz", "delta2_over_2pi_ghz", "g11_over_2pi_mhz",
        "g22_over_2pi_mhz", "g12_over_2pi_mhz", "g21_over_2pi_mhz"},
       {"x", "u", "v"}},
      {"schedule-preview", {"t_ns", "lambda", "delta1_over_2pi_ghz", "delta2_over_2pi_ghz"}, {}},
  };
  return schemas;
}

std::vector<std::string> validate_csv(const std::string& path, const CsvSchema& schema) {
  // Dimensionless column names; everything else must end in a unit suffix.
  static const std::vector<std::string> dimensionless = {
      "infidelity", "analytic_infidelity", "alpha_max", "alpha_max_table", "alpha_max_coarse", "infidelity_k0",
      "infidelity_kappa", "infidelity_k20k", "analytic_dephasing", "lambda"};
  static const std::vector<std::string> suffixes = {"_ns", "_mhz", "_ghz", "_khz", "_rad", "_s"};
  std::vector<std::string> problems;
  CsvTable t;
  try {
    t = read_csv(path);
  } catch (const Error& e) {
    return {e.what()};
  }
  if (t.columns.empty()) problems.push_back("missing header row");
  for (const auto& c : t.columns) {
    const bool known =
        std::find(dimensionless.begin(), dimensionless.end(), c) != dimensionless.end() ||
        std::find(schema.dimensionless.begin(), schema.dimensionless.end(), c) !=
            schema.dimensionless.end();
    const bool has_unit = std::any_of(suffixes.begin(), suffixes.end(),
                                      [&](const std::string& s) { return ends_with(c, s); });
    if (!known && !has_unit) problems.push_back("column '" + c + "' carries no unit");
  }
  for (const auto& r : schema.required_columns) {
    if (std::find(t.columns.begin(), t.columns.end(), r) == t.columns.end()) {
      problems.push_back("missing column '" + r + "'");
    }
  }
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    if (t.rows[i].size() != t.columns.size()) {
      problems.push_back("row " + std::to_string(i + 1) + " has " + std::to_string(t.rows[i].size()) +
                         " fields, header has " + std::to_string(t.columns.size()));
    }
  }
  if (t.rows.empty()) problems.push_back("no data rows");
  return problems;
}

}  // namespace kerrzz
