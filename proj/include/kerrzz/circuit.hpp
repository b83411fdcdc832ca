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

// Effective rotating-frame parameters from circuit element values.
//
// Each subsystem (KPO1, KPO2, c1, c2) is a symmetric dc SQUID with shunt
// capacitance C. Model I couples KPO j and coupler j through C~ and the
// crossed pairs through inductors (E_L = Phi_0^2 / L); model II replaces the
// inductors by C~. The quartic expansion of the SQUID cosine is assumed.

#pragma once

#include <array>
#include <functional>

#include "kerrzz/error.hpp"
#include "kerrzz/hilbert.hpp"
#include "kerrzz/model.hpp"

namespace kerrzz {

// Subsystem order used by all arrays below.
enum Subsystem { sub_kpo1 = 0, sub_kpo2 = 1, sub_c1 = 2, sub_c2 = 3 };

struct CircuitParams {
  double C = 0.0;        // F, shunt capacitance of every subsystem
  double C_tilde = 0.0;  // F, coupling capacitance
  std::array<double, 4> E_J{};        // J
  std::array<double, 4> phi_dc{};     // rad, dc flux bias (value at t = 0 for c1)
  std::array<double, 4> epsilon_p{};  // pump amplitude
  double E_L = 0.0;                   // J, model I only
  double omega_p = 0.0;               // rad/s; 0 selects zero KPO detuning

  // Optional time dependence of the coupler-1 bias; phi_c1(0) should equal phi_dc[sub_c1].
  std::function<double(double)> phi_c1;

  void validate() const;

  // Bold design values of the model II parameter table: C = 1.1 pF, C~ = 2 fF,
  // E_J^KPO/h = 800 GHz at pi/2, eps_p = 7e-3, E_J^c1/h = 660 GHz, E_J^c2/h = 444.69 GHz.
  static CircuitParams model2_design();
};

struct DerivedParamsI {
  double E_C = 0.0;  // J
  double x = 0.0, u = 0.0, v = 0.0;
  std::array<double, 4> ej_dc{};    // J, Ẽ_J^{dc} at t = 0
  std::array<double, 4> omega0{};   // rad/s, omega^(0) at t = 0
  std::array<double, 4> kerr{};     // rad/s, K_lambda at t = 0 (chi_k for couplers)
  std::array<double, 4> pump{};     // rad/s
  std::array<double, 4> detuning{}; // rad/s, Delta_lambda at t = 0
  std::array<double, 2> g_same{};   // g_{j,j}
  double g12 = 0.0, g21 = 0.0;
  double omega_p = 0.0;

  // Coupler-1 quantities for a time-dependent bias.
  std::function<double(double)> coupler1_detuning;
  std::function<double(double)> coupler1_kerr;

  // K and p from KPO1, chi from the couplers, g[j][k] with the crossed couplings.
  SystemParams to_system_params(double kappa = 0.0) const;
};

struct DerivedParamsII {
  double E_C = 0.0;  // J
  double x = 0.0, y = 0.0, z = 0.0, w = 0.0;
  double ej_dc_kpo = 0.0;          // J
  std::array<double, 2> ej_dc_c{}; // J, couplers at t = 0
  double kerr = 0.0;               // K~
  double pump = 0.0;               // p~
  double alpha = 0.0;              // sqrt(p~/K~)
  std::array<double, 2> chi{};     // at t = 0
  std::array<double, 2> detuning{};// Delta~_k at t = 0
  double kpo_detuning = 0.0;       // zero when omega_p is chosen automatically
  std::array<double, 2> g{};
  double g_kpo = 0.0;
  double g_c = 0.0;
  double omega_p = 0.0;

  std::function<double(double)> coupler1_detuning;
  std::function<double(double)> coupler1_kerr;

  SystemParamsII to_system_params(double kappa = 0.0) const;
};

DerivedParamsI derive_model1(const CircuitParams& cp, Warnings* warnings = nullptr);
DerivedParamsII derive_model2(const CircuitParams& cp, Warnings* warnings = nullptr);

// omega_p = 2 (omega_KPO^(0) - K), so the KPO detuning vanishes.
double pump_frequency_for_zero_kpo_detuning(const DerivedParamsI& d);
double pump_frequency_for_zero_kpo_detuning(const DerivedParamsII& d);

// Capacitance matrices in (KPO1, KPO2, c1, c2) order and the closed-form inverses
// (in units of 1/C). The difference is checked by circuit_self_test.
Eigen::Matrix4d capacitance_matrix_model1(double C, double C_tilde);
Eigen::Matrix4d capacitance_matrix_model2(double C, double C_tilde);
Eigen::Matrix4d inverse_capacitance_model1(double x);  // C M^{-1}
Eigen::Matrix4d inverse_capacitance_model2(double x);

// Max |C M^{-1} - closed form| over both models; throws if above `tolerance`.
double circuit_self_test(double C, double C_tilde, double tolerance = 1e-10);

}  // namespace kerrzz
