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

#include "kerrzz/selftest.hpp"

#include <cmath>
#include <functional>
#include <sstream>

#include "kerrzz/analysis.hpp"
#include "kerrzz/circuit.hpp"
#include "kerrzz/dynamics.hpp"
#include "kerrzz/error.hpp"
#include "kerrzz/experiments.hpp"
#include "kerrzz/schedule.hpp"
#include "kerrzz/units.hpp"

namespace kerrzz {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(3);
  os << v;
  return os.str();
}

SelfTestResult check(const std::string& name, const std::function<double()>& measure, double limit) {
  SelfTestResult r{name, false, ""};
  try {
    const double v = measure();
    r.pass = std::isfinite(v) && v < limit;
    r.detail = "value " + fmt(v) + " (limit " + fmt(limit) + ")";
  } catch (const std::exception& e) {
    r.detail = e.what();
  }
  return r;
}

}  // namespace

std::vector<SelfTestResult> run_selftest() {
  std::vector<SelfTestResult> out;

  out.push_back(check("fock ladder", [] {
    const Matrix a = fock_annihilation(5);
    double err = 0.0;
    for (int n = 1; n < 5; ++n) err = std::max(err, std::abs(a(n - 1, n) - std::sqrt(double(n))));
    return err;
  }, 1e-15));

  out.push_back(check("coherent photon number", [] {
    const StateVector c = coherent_state(cplx(2.0, 0.0), 30);
    double n = 0.0;
    for (int k = 0; k < c.size(); ++k) n += k * std::norm(c(k));
    return std::abs(n - 4.0);
  }, 1e-8));

  out.push_back(check("kpo eigen isometry", [] {
    const auto t = kpo_eigen_truncation(units::mhz(20.0), units::mhz(80.0), ModeSpec::kpo_eigen(28, 6));
    return (t.transform.adjoint() * t.transform - Matrix::Identity(6, 6)).norm();
  }, 1e-12));

  out.push_back(check("capacitance inverse", [] { return circuit_self_test(1.1e-12, 2e-15); }, 1e-10));

  out.push_back(check("flat schedule phase", [] {
    DetuningSchedule s = table1_schedule(16e-9, 0.04);
    return std::abs(theta_of_schedule(s));
  }, 1e-300));

  out.push_back(check("phase routes agree", [] {
    const DetuningSchedule s = table1_schedule(16e-9, 0.524);
    const double a = theta_of_schedule(s);
    return std::max(std::abs(a - theta_direct(s)), std::abs(a - theta_substituted(s))) / std::abs(a);
  }, 1e-8));

  out.push_back(check("closed-form gate state", [] {
    const CompositeBasis b = TruncationSpec{0, 4, 2}.build(units::mhz(20.0), units::mhz(80.0));
    const LogicalFrame f(b);
    const double theta = -0.5 * std::numbers::pi;
    const StateVector ideal = ideal_rzz_state(f.initial(), GateSpec{theta, 0.0}, f);
    const StateVector closed = closed_form_ideal_state(theta, f);
    return 1.0 - std::norm(ideal.dot(closed));
  }, 1e-12));

  out.push_back(check("dephasing closed forms at t = 0", [] {
    return std::abs(analytic_off_infidelity(0.0, 2.0, 1e6)) +
           std::abs(analytic_gate_dephasing_infidelity(0.0, -0.5 * std::numbers::pi, 2.0, 1e6));
  }, 1e-14));

  out.push_back(check("lindblad trace", [] {
    const CompositeBasis b = TruncationSpec{0, 4, 2}.build(units::mhz(20.0), units::mhz(80.0));
    SystemParams p = SystemParams::table1();
    p.kappa = units::khz(20.0);
    LindbladProblem prob;
    prob.hamiltonian.constant = build_h_main(p, -p.delta2, b);
    for (const auto& l : loss_operators(b)) prob.collapse_ops.push_back({l, p.kappa});
    prob.rho0 = initial_state(b);
    prob.t_end = 1e-10;
    prob.sample_times = {1e-10};
    const auto series = evolve(prob);
    const DensityCheck chk = check_density(series.final_state);
    return std::max(chk.trace_error, chk.hermiticity_error);
  }, 1e-9));

  out.push_back(check("bloch solution vs rhs", [] {
    const BlochVector b0{0.3, -0.4, 0.5};
    const double kappa = units::khz(20.0), t = 3e-7, h = 1e-10;
    const BlochVector bp = bloch_dephasing_solution(b0, t + h, kappa, 2.0);
    const BlochVector bm = bloch_dephasing_solution(b0, t - h, kappa, 2.0);
    const BlochVector b = bloch_dephasing_solution(b0, t, kappa, 2.0);
    const BlochVector d = bloch_rhs(b, kappa, 2.0);
    const double rate = kappa * 4.0;
    return std::max({std::abs((bp.x - bm.x) / (2 * h) - d.x), std::abs((bp.y - bm.y) / (2 * h) - d.y),
                     std::abs((bp.z - bm.z) / (2 * h) - d.z)}) / rate;
  }, 1e-6));

  return out;
}

}  // namespace kerrzz
