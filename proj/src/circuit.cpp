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

#include "kerrzz/circuit.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Dense>

#include "kerrzz/units.hpp"

namespace kerrzz {

namespace {

using units::kHbar;

constexpr const char* kSubsystemNames[4] = {"KPO1", "KPO2", "c1", "c2"};
constexpr double kValidityRatio = 0.05;

// 2 E_J cos(phi/2), rejecting biases at or beyond the SQUID null.
double effective_ej(double ej, double phi, int which) {
  const double c = std::cos(0.5 * phi);
  if (!(c > 0.0)) {
    std::ostringstream os;
    os << kSubsystemNames[which] << ": cos(phi_dc/2) = " << c << " <= 0 at phi_dc = " << phi;
    throw Error(ErrorKind::invalid_bias, os.str());
  }
  return 2.0 * ej * c;
}

void check_validity(double charging, double ej_dc, int which, Warnings* warnings) {
  const double ratio = charging / ej_dc;
  if (ratio > kValidityRatio) {
    std::ostringstream os;
    os << kSubsystemNames[which] << ": charging-to-Josephson ratio " << ratio
       << " exceeds " << kValidityRatio << "; quartic expansion is questionable";
    warn(warnings, os.str());
  }
}

// Coupler-1 bias as a function of time (falls back to the static value).
std::function<double(double)> coupler1_bias(const CircuitParams& cp) {
  if (cp.phi_c1) return cp.phi_c1;
  const double phi = cp.phi_dc[sub_c1];
  return [phi](double) { return phi; };
}

}  // namespace

void CircuitParams::validate() const {
  if (!(C > 0.0) || !(C_tilde > 0.0)) {
    throw Error(ErrorKind::invalid_argument, "capacitances C and C_tilde must be positive");
  }
  for (int i = 0; i < 4; ++i) {
    if (!(E_J[i] > 0.0)) {
      throw Error(ErrorKind::invalid_argument, std::string(kSubsystemNames[i]) + ": E_J must be positive");
    }
    if (std::abs(epsilon_p[i]) >= 0.1) {
      throw Error(ErrorKind::invalid_argument,
                  std::string(kSubsystemNames[i]) + ": |epsilon_p| must be small (< 0.1)");
    }
  }
  if (E_L < 0.0) throw Error(ErrorKind::invalid_argument, "E_L must be non-negative");
}

CircuitParams CircuitParams::model2_design() {
  CircuitParams cp;
  cp.C = 1.1e-12;
  cp.C_tilde = 2e-15;
  cp.E_J = {units::energy_ghz(800.0), units::energy_ghz(800.0), units::energy_ghz(660.0),
            units::energy_ghz(444.69)};
  cp.phi_dc = {std::numbers::pi / 2, std::numbers::pi / 2, 0.0, 0.0};
  cp.epsilon_p = {7e-3, 7e-3, 0.0, 0.0};
  cp.E_L = 0.0;
  return cp;
}

DerivedParamsI derive_model1(const CircuitParams& cp, Warnings* warnings) {
  cp.validate();
  DerivedParamsI d;
  const double e = units::kElementaryCharge;
  d.E_C = e * e / (2.0 * cp.C);
  d.x = cp.C_tilde / cp.C;
  d.u = (1.0 + d.x) / (1.0 + 2.0 * d.x);
  d.v = d.x / (1.0 + 2.0 * d.x);
  const double uec = d.u * d.E_C;
  const double el = cp.E_L;

  std::array<double, 4> stiff{};  // Ẽ(0) + E_L
  for (int i = 0; i < 4; ++i) {
    d.ej_dc[i] = effective_ej(cp.E_J[i], cp.phi_dc[i], i);
    check_validity(uec, d.ej_dc[i], i, warnings);
    stiff[i] = d.ej_dc[i] + el;
    d.omega0[i] = 2.0 * std::sqrt(2.0 * uec * stiff[i]) / kHbar;
    d.kerr[i] = uec / kHbar * d.ej_dc[i] / stiff[i];
    d.pump[i] = std::numbers::pi * cp.epsilon_p[i] * cp.E_J[i] / kHbar *
                std::sqrt(2.0 * uec / stiff[i]) * std::sin(0.5 * cp.phi_dc[i]);
  }
  for (int j = 0; j < 2; ++j) {
    d.g_same[j] = d.v / kHbar * std::sqrt(2.0 * d.E_C / d.u) * std::pow(stiff[j], 0.25) *
                  std::pow(stiff[2 + j], 0.25);
  }
  const double cross = el * std::sqrt(2.0 * uec) / kHbar;
  d.g12 = -cross / (std::pow(stiff[sub_kpo1], 0.25) * std::pow(stiff[sub_c2], 0.25));
  d.g21 = -cross / (std::pow(stiff[sub_kpo2], 0.25) * std::pow(stiff[sub_c1], 0.25));

  d.omega_p = cp.omega_p > 0.0 ? cp.omega_p : pump_frequency_for_zero_kpo_detuning(d);
  for (int i = 0; i < 4; ++i) d.detuning[i] = d.omega0[i] - d.kerr[i] - 0.5 * d.omega_p;

  const auto bias = coupler1_bias(cp);
  const double ej1 = cp.E_J[sub_c1];
  const double stiff1 = stiff[sub_c1];
  const double half_pump = 0.5 * d.omega_p;
  d.coupler1_kerr = [=](double t) {
    return uec / kHbar * effective_ej(ej1, bias(t), sub_c1) / stiff1;
  };
  d.coupler1_detuning = [=](double t) {
    const double ej_t = effective_ej(ej1, bias(t), sub_c1);
    const double w0 = std::sqrt(2.0 * uec * stiff1) / kHbar * ((ej_t + el) / stiff1 + 1.0);
    return w0 - uec / kHbar * ej_t / stiff1 - half_pump;
  };
  return d;
}

DerivedParamsII derive_model2(const CircuitParams& cp, Warnings* warnings) {
  cp.validate();
  DerivedParamsII d;
  const double e = units::kElementaryCharge;
  d.E_C = e * e / (2.0 * cp.C);
  const double x = cp.C_tilde / cp.C;
  d.x = x;
  const double den = 1.0 + 6.0 * x + 8.0 * x * x;
  d.y = (1.0 + 4.0 * x + 2.0 * x * x) / den;
  d.z = x / (1.0 + 4.0 * x);
  d.w = 2.0 * x * x / den;
  const double yec = d.y * d.E_C;

  d.ej_dc_kpo = effective_ej(cp.E_J[sub_kpo1], cp.phi_dc[sub_kpo1], sub_kpo1);
  check_validity(yec, d.ej_dc_kpo, sub_kpo1, warnings);
  for (int k = 0; k < 2; ++k) {
    d.ej_dc_c[k] = effective_ej(cp.E_J[2 + k], cp.phi_dc[2 + k], 2 + k);
    check_validity(yec, d.ej_dc_c[k], 2 + k, warnings);
  }

  d.kerr = yec / kHbar;
  d.pump = std::numbers::pi * cp.epsilon_p[sub_kpo1] * cp.E_J[sub_kpo1] / kHbar *
           std::sqrt(2.0 * yec / d.ej_dc_kpo) * std::sin(0.5 * cp.phi_dc[sub_kpo1]);
  d.alpha = std::sqrt(d.pump / d.kerr);
  d.omega_p = cp.omega_p > 0.0 ? cp.omega_p : pump_frequency_for_zero_kpo_detuning(d);
  const double half_pump = 0.5 * d.omega_p;
  d.kpo_detuning = 2.0 * std::sqrt(2.0 * yec * d.ej_dc_kpo) / kHbar - d.kerr - half_pump;

  const auto coupler_detuning = [yec, half_pump](double ej0, double ej_t) {
    const double chi = yec / kHbar * ej_t / ej0;
    return std::sqrt(2.0 * yec * ej0) / kHbar * (ej_t / ej0 + 1.0) - chi - half_pump;
  };
  for (int k = 0; k < 2; ++k) {
    d.chi[k] = yec / kHbar;
    d.detuning[k] = coupler_detuning(d.ej_dc_c[k], d.ej_dc_c[k]);
    d.g[k] = d.z / kHbar * std::sqrt(d.E_C / d.y) * std::pow(d.ej_dc_kpo * d.ej_dc_c[k], 0.25);
  }
  d.g_kpo = d.w / kHbar * std::sqrt(d.E_C * d.ej_dc_kpo / d.y);
  d.g_c = d.w / kHbar * std::sqrt(d.E_C / d.y) * std::pow(d.ej_dc_c[0] * d.ej_dc_c[1], 0.25);

  const auto bias = coupler1_bias(cp);
  const double ej1 = cp.E_J[sub_c1];
  const double ej1_0 = d.ej_dc_c[0];
  d.coupler1_kerr = [=](double t) { return yec / kHbar * effective_ej(ej1, bias(t), sub_c1) / ej1_0; };
  d.coupler1_detuning = [=](double t) {
    return coupler_detuning(ej1_0, effective_ej(ej1, bias(t), sub_c1));
  };
  return d;
}

double pump_frequency_for_zero_kpo_detuning(const DerivedParamsI& d) {
  return 2.0 * (d.omega0[sub_kpo1] - d.kerr[sub_kpo1]);
}

double pump_frequency_for_zero_kpo_detuning(const DerivedParamsII& d) {
  const double omega0 = 2.0 * std::sqrt(2.0 * d.y * d.E_C * d.ej_dc_kpo) / kHbar;
  return 2.0 * (omega0 - d.kerr);
}

SystemParams DerivedParamsI::to_system_params(double kappa) const {
  SystemParams p;
  p.kerr = kerr[sub_kpo1];
  p.pump = pump[sub_kpo1];
  p.chi = {kerr[sub_c1], kerr[sub_c2]};
  p.g = {{{g_same[0], g12}, {g21, g_same[1]}}};
  p.kappa = kappa;
  p.delta2 = detuning[sub_c2];
  return p;
}

SystemParamsII DerivedParamsII::to_system_params(double kappa) const {
  SystemParamsII p;
  p.kerr = kerr;
  p.pump = pump;
  p.chi = chi;
  p.g = g;
  p.g_kpo = g_kpo;
  p.g_c = g_c;
  p.kappa = kappa;
  p.delta2 = detuning[1];
  return p;
}

Eigen::Matrix4d capacitance_matrix_model1(double C, double C_tilde) {
  Eigen::Matrix4d m = (C + C_tilde) * Eigen::Matrix4d::Identity();
  m(sub_kpo1, sub_c1) = m(sub_c1, sub_kpo1) = -C_tilde;
  m(sub_kpo2, sub_c2) = m(sub_c2, sub_kpo2) = -C_tilde;
  return m;
}

Eigen::Matrix4d capacitance_matrix_model2(double C, double C_tilde) {
  Eigen::Matrix4d m = (C + 2.0 * C_tilde) * Eigen::Matrix4d::Identity();
  for (int j : {sub_kpo1, sub_kpo2})
    for (int k : {sub_c1, sub_c2}) m(j, k) = m(k, j) = -C_tilde;
  return m;
}

Eigen::Matrix4d inverse_capacitance_model1(double x) {
  const double u = (1.0 + x) / (1.0 + 2.0 * x);
  const double v = x / (1.0 + 2.0 * x);
  Eigen::Matrix4d m = u * Eigen::Matrix4d::Identity();
  m(sub_kpo1, sub_c1) = m(sub_c1, sub_kpo1) = v;
  m(sub_kpo2, sub_c2) = m(sub_c2, sub_kpo2) = v;
  return m;
}

Eigen::Matrix4d inverse_capacitance_model2(double x) {
  const double den = 1.0 + 6.0 * x + 8.0 * x * x;
  const double y = (1.0 + 4.0 * x + 2.0 * x * x) / den;
  const double z = x / (1.0 + 4.0 * x);
  const double w = 2.0 * x * x / den;
  Eigen::Matrix4d m = y * Eigen::Matrix4d::Identity();
  m(sub_kpo1, sub_kpo2) = m(sub_kpo2, sub_kpo1) = w;
  m(sub_c1, sub_c2) = m(sub_c2, sub_c1) = w;
  for (int j : {sub_kpo1, sub_kpo2})
    for (int k : {sub_c1, sub_c2}) m(j, k) = m(k, j) = z;
  return m;
}

double circuit_self_test(double C, double C_tilde, double tolerance) {
  const double x = C_tilde / C;
  const Eigen::Matrix4d n1 = C * capacitance_matrix_model1(C, C_tilde).inverse();
  const Eigen::Matrix4d n2 = C * capacitance_matrix_model2(C, C_tilde).inverse();
  const double err = std::max((n1 - inverse_capacitance_model1(x)).cwiseAbs().maxCoeff(),
                              (n2 - inverse_capacitance_model2(x)).cwiseAbs().maxCoeff());
  if (err > tolerance) {
    std::ostringstream os;
    os << "closed-form inverse capacitance differs from numerical inverse by " << err;
    throw Error(ErrorKind::no_convergence, os.str());
  }
  return err;
}

}  // namespace kerrzz
