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

#include "kerrzz/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <thread>

#include "kerrzz/error.hpp"

namespace kerrzz {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Trajectory {
  std::vector<double> t;
  std::vector<double> infidelity;
  StateVector final_psi;
  DensityMatrix final_rho;
  bool pure = false;
  IntegratorStats stats;
};

// Evolves `psi0` under `h` (pure path when kappa = 0) and records 1 - <ref|rho|ref>.
Trajectory propagate(const TimeDependentHamiltonian& h, const CompositeBasis& basis, double kappa,
                     const StateVector& psi0, const StateVector& reference,
                     const std::vector<double>& sample_times, const IntegratorOptions& options,
                     bool force_density) {
  Trajectory out;
  const double t_end = sample_times.empty() ? 0.0 : sample_times.back();
  if (kappa == 0.0 && !force_density) {
    SchrodingerProblem prob;
    prob.hamiltonian = h;
    prob.psi0 = psi0;
    prob.t_end = t_end;
    prob.sample_times = sample_times;
    const auto series = evolve_pure(prob, options, [&](double, const StateVector& psi) {
      return std::vector<double>{state_infidelity(psi, reference)};
    });
    out.t = series.times;
    for (const auto& v : series.values) out.infidelity.push_back(v[0]);
    out.final_psi = series.final_state;
    out.pure = true;
    out.stats = series.stats;
    return out;
  }
  LindbladProblem prob;
  prob.hamiltonian = h;
  for (const auto& l : loss_operators(basis)) prob.collapse_ops.push_back({l, kappa});
  prob.rho0 = projector(psi0);
  prob.t_end = t_end;
  prob.sample_times = sample_times;
  const auto series = evolve(prob, options, [&](double, const DensityMatrix& rho) {
    return std::vector<double>{state_infidelity(rho, reference)};
  });
  out.t = series.times;
  for (const auto& v : series.values) out.infidelity.push_back(v[0]);
  out.final_rho = series.final_state;
  out.stats = series.stats;
  return out;
}

TimeDependentHamiltonian constant_hamiltonian(SparseOp h) {
  TimeDependentHamiltonian td;
  td.constant = std::move(h);
  return td;
}

OffResidualResult summarize_off(Trajectory traj, double alpha, double kappa, double delta1) {
  OffResidualResult r;
  r.t = std::move(traj.t);
  r.infidelity = std::move(traj.infidelity);
  r.delta1 = delta1;
  r.alpha = alpha;
  const double gamma = dephasing_rate(kappa, alpha);
  for (double t : r.t) r.analytic.push_back(analytic_off_infidelity(t, alpha, gamma));
  for (double v : r.infidelity) r.max_infidelity = std::max(r.max_infidelity, v);
  if (r.t.size() >= 3) r.slope = slope_test(r.t, r.infidelity);
  r.stats = traj.stats;
  return r;
}

}  // namespace

CompositeBasis TruncationSpec::build(double kerr, double pump) const {
  const int cutoff = kpo_cutoff > 0 ? kpo_cutoff : recommended_cutoff(std::sqrt(pump / kerr));
  return CompositeBasis::build(ModeSpec::kpo_eigen(cutoff, kpo_keep), ModeSpec::fock(coupler_cutoff),
                               kerr, pump);
}

SlopeTest slope_test(const std::vector<double>& t, const std::vector<double>& y, double ratio_limit) {
  if (t.size() != y.size() || t.size() < 3) {
    throw Error(ErrorKind::invalid_argument, "slope test needs at least three (t, y) pairs");
  }
  const double n = static_cast<double>(t.size());
  double mt = 0.0, my = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    mt += t[i];
    my += y[i];
  }
  mt /= n;
  my /= n;
  double stt = 0.0, sty = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    stt += (t[i] - mt) * (t[i] - mt);
    sty += (t[i] - mt) * (y[i] - my);
  }
  SlopeTest s;
  s.ratio_limit = ratio_limit;
  s.slope = sty / stt;
  s.secular = std::abs(s.slope) * (t.back() - t.front());
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double r = y[i] - (my + s.slope * (t[i] - mt));
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  s.amplitude = 0.5 * (hi - lo);
  s.pass = s.secular < ratio_limit * s.amplitude;
  return s;
}

OffResidualResult run_off_residual(const SystemParams& params, const TruncationSpec& trunc,
                                   const std::vector<double>& sample_times,
                                   const IntegratorOptions& options, bool force_density) {
  params.validate();
  const CompositeBasis basis = trunc.build(params.kerr, params.pump);
  const double delta1 = -params.delta2;
  const StateVector psi0 = initial_ket(basis);
  const auto h = constant_hamiltonian(build_h_main(params, delta1, basis));
  auto traj = propagate(h, basis, params.kappa, psi0, psi0, sample_times, options, force_density);
  return summarize_off(std::move(traj), params.alpha(), params.kappa, delta1);
}

OffResidualResult run_off_residual_model2(const SystemParamsII& params, const TruncationSpec& trunc,
                                          const std::vector<double>& sample_times,
                                          const IntegratorOptions& options, bool force_density) {
  params.validate();
  const CompositeBasis basis = trunc.build(params.kerr, params.pump);
  const double delta1 = detuning_condition_model2(params);
  const StateVector psi0 = initial_ket(basis);
  const auto h = constant_hamiltonian(build_h_circuit2(params, delta1, basis));
  auto traj = propagate(h, basis, params.kappa, psi0, psi0, sample_times, options, force_density);
  return summarize_off(std::move(traj), params.alpha(), params.kappa, delta1);
}

GateResult run_rzz_gate(const SystemParams& params, const TruncationSpec& trunc, double t_f,
                        double alpha_max, double theta_target, const IntegratorOptions& options,
                        bool force_density) {
  params.validate();
  DetuningSchedule s;
  s.alpha_min = params.alpha_c_min;
  s.alpha_max = alpha_max;
  s.t_f = t_f;
  s.g = params.g[0][0];
  s.alpha = params.alpha();
  s.validate();

  const CompositeBasis basis = trunc.build(params.kerr, params.pump);
  const LogicalFrame frame(basis);
  const StateVector psi0 = initial_ket(basis);
  const StateVector ideal = ideal_rzz_state(psi0, GateSpec{theta_target, t_f}, frame);
  const auto h = build_h_main_td(params, [s](double t) { return delta1_of_t(t, s); }, basis);

  const auto traj = propagate(h, basis, params.kappa, psi0, ideal, {t_f}, options, force_density);
  GateResult r;
  r.t_f = t_f;
  r.alpha_max = alpha_max;
  r.theta_schedule = theta_of_schedule(s);
  r.theta_target = theta_target;
  r.infidelity = traj.infidelity.back();
  r.analytic_dephasing = analytic_gate_dephasing_infidelity(
      t_f, theta_target, params.alpha(), dephasing_rate(params.kappa, params.alpha()));
  r.stats = traj.stats;
  return r;
}

std::vector<SweepRow> run_table3_sweep(const SystemParams& params, const TruncationSpec& trunc,
                                       const std::vector<double>& gate_times, double theta_target,
                                       const SweepOptions& options) {
  std::vector<SweepRow> rows(gate_times.size());
  std::vector<std::exception_ptr> failures(gate_times.size());
  SystemParams lossless = params;
  lossless.kappa = 0.0;

  const auto solve_point = [&](std::size_t i) {
    SweepRow& row = rows[i];
    row.t_f = gate_times[i];
    DetuningSchedule base;
    base.alpha_min = params.alpha_c_min;
    base.t_f = row.t_f;
    base.g = params.g[0][0];
    base.alpha = params.alpha();
    try {
      row.alpha_max_coarse = find_alpha_max(theta_target, base, SearchMode::coarse, {}, options.search);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::infeasible_schedule || options.mode == SearchMode::coarse) throw;
      row.alpha_max_coarse = kNaN;
    }
    if (options.mode == SearchMode::coarse) {
      row.alpha_max = row.alpha_max_coarse;
    } else {
      const auto objective = [&](double amax) {
        return run_rzz_gate(lossless, trunc, row.t_f, amax, theta_target, options.integrator).infidelity;
      };
      row.alpha_max = find_alpha_max(theta_target, base, SearchMode::refined, objective, options.search);
    }
    base.alpha_max = row.alpha_max;
    row.theta = theta_of_schedule(base);
    row.infidelity_k0 =
        run_rzz_gate(lossless, trunc, row.t_f, row.alpha_max, theta_target, options.integrator).infidelity;
    row.infidelity_kappa = kNaN;
    if (options.kappa > 0.0) {
      SystemParams lossy = params;
      lossy.kappa = options.kappa;
      row.infidelity_kappa =
          run_rzz_gate(lossy, options.lossy_truncation.value_or(trunc), row.t_f, row.alpha_max,
                       theta_target, options.integrator)
              .infidelity;
    }
  };

  const int jobs = std::max(1, std::min<int>(options.jobs, static_cast<int>(gate_times.size())));
  std::atomic<std::size_t> next{0};
  const auto worker = [&]() {
    for (std::size_t i = next++; i < gate_times.size(); i = next++) {
      try {
        solve_point(i);
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }
  return rows;
}

double table3_alpha_max(double t_f_ns) {
  static const std::map<int, double> table = {
      {8, 0.404},  {10, 0.460}, {12, 0.496}, {14, 0.524}, {15, 0.528}, {16, 0.524}, {17, 0.510},
      {18, 0.486}, {19, 0.468}, {20, 0.440}, {21, 0.412}, {22, 0.408}, {24, 0.390}, {26, 0.370},
      {28, 0.336}, {30, 0.314}, {32, 0.318}, {34, 0.296}, {36, 0.280}, {38, 0.264}, {40, 0.252},
      {42, 0.244}, {44, 0.232}, {46, 0.226}, {48, 0.230}, {50, 0.212}, {52, 0.220}, {54, 0.202},
      {56, 0.198}, {58, 0.192}, {60, 0.188}};
  const double r = std::round(t_f_ns);
  if (std::abs(r - t_f_ns) > 1e-9) return 0.0;
  const auto it = table.find(static_cast<int>(r));
  return it == table.end() ? 0.0 : it->second;
}

std::vector<double> uniform_grid(double t0, double t1, double dt) {
  if (!(dt > 0.0) || !(t1 >= t0)) throw Error(ErrorKind::invalid_argument, "bad grid specification");
  const auto n = static_cast<long>(std::floor((t1 - t0) / dt + 1e-9));
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(n) + 1);
  for (long i = 0; i <= n; ++i) grid.push_back(t0 + static_cast<double>(i) * dt);
  if (t1 - grid.back() > 1e-9 * dt) grid.push_back(t1);
  return grid;
}

}  // namespace kerrzz
