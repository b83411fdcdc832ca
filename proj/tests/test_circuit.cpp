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

#include <cmath>

#include "doctest.h"
#include "kerrzz/circuit.hpp"
#include "kerrzz/model.hpp"
#include "kerrzz/units.hpp"

using namespace kerrzz;

namespace {

// Equal to three significant figures.
bool sig3(double value, double table) {
  const double scale = std::pow(10.0, std::floor(std::log10(std::abs(table))) - 2);
  return std::abs(std::round(value / scale) - std::round(table / scale)) < 0.5;
}

double to_hz_mhz(double omega) { return units::to_mhz(omega); }
double energy_mhz(double e) { return e / units::kPlanck * 1e-6; }

}  // namespace

TEST_CASE("model II design values reproduce the derived parameter table") {
  Warnings w;
  const DerivedParamsII d = derive_model2(CircuitParams::model2_design(), &w);
  CHECK(sig3(energy_mhz(d.E_C), 17.6));
  CHECK(sig3(d.x, 1.82e-3));
  CHECK(sig3(d.y, 0.996));
  CHECK(sig3(d.z, 1.81e-3));
  CHECK(sig3(d.w, 6.54e-6));
  CHECK(sig3(energy_mhz(d.ej_dc_kpo) * 1e-6, 1.13));
  CHECK(sig3(energy_mhz(d.ej_dc_c[0]) * 1e-6, 1.32));
  CHECK(sig3(energy_mhz(d.ej_dc_c[1]) * 1e-3, 889.0));
  CHECK(sig3(to_hz_mhz(d.kerr), 17.5));
  CHECK(sig3(to_hz_mhz(d.pump), 69.3));
  CHECK(sig3(d.alpha, 1.99));
  CHECK(sig3(to_hz_mhz(d.chi[0]), 17.5));
  CHECK(sig3(to_hz_mhz(d.chi[1]), 17.5));
  CHECK(sig3(units::to_ghz(d.detuning[0]), 1.01));
  CHECK(sig3(units::to_ghz(d.detuning[1]), -1.43));
  CHECK(sig3(to_hz_mhz(d.g[0]), 8.39));
  CHECK(sig3(to_hz_mhz(d.g[1]), 7.60));
  CHECK(sig3(units::to_khz(d.g_kpo), 29.2));
  CHECK(sig3(units::to_khz(d.g_c), 28.6));
  CHECK(std::abs(d.kpo_detuning) < 1e-6 * d.kerr);

  // The coupler-1 bias from the design sits on the degeneracy condition.
  const SystemParamsII q = d.to_system_params();
  CHECK(sig3(units::to_ghz(detuning_condition_model2(q)), 1.01));
  CHECK(std::abs(d.coupler1_detuning(0.0) - d.detuning[0]) < 1e-9 * d.detuning[0]);
}

TEST_CASE("closed-form inverse capacitance matrices match a numerical inverse") {
  const double C = 1.1e-12;
  for (double Ct : {2e-15, 5e-14}) {
    const double x = Ct / C;
    const Eigen::Matrix4d inv1 = C * capacitance_matrix_model1(C, Ct).inverse();
    const Eigen::Matrix4d inv2 = C * capacitance_matrix_model2(C, Ct).inverse();
    CHECK((inv1 - inverse_capacitance_model1(x)).norm() < 1e-12);
    CHECK((inv2 - inverse_capacitance_model2(x)).norm() < 1e-12);
    CHECK(circuit_self_test(C, Ct) < 1e-10);
  }
  // Model II: every KPO couples capacitively to every coupler.
  const Eigen::Matrix4d m2 = capacitance_matrix_model2(1.0, 0.1);
  CHECK(m2(sub_kpo1, sub_c2) != 0.0);
  CHECK(capacitance_matrix_model1(1.0, 0.1)(sub_kpo1, sub_c2) == 0.0);
}

TEST_CASE("model I derivation reduces to rotating-frame parameters") {
  CircuitParams cp = CircuitParams::model2_design();
  cp.E_L = units::energy_ghz(0.5);
  Warnings w;
  const DerivedParamsI d = derive_model1(cp, &w);
  const SystemParams p = d.to_system_params();
  CHECK(p.kerr > 0.0);
  CHECK(p.pump > 0.0);
  CHECK(p.g[0][1] != 0.0);
  CHECK(std::abs(d.detuning[sub_kpo1]) < 1e-6 * p.kerr);
  CHECK(pump_frequency_for_zero_kpo_detuning(d) == doctest::Approx(d.omega_p));
  CHECK(d.coupler1_kerr(0.0) == doctest::Approx(d.kerr[sub_c1]));
}

TEST_CASE("invalid circuits are rejected") {
  CircuitParams cp = CircuitParams::model2_design();
  cp.C = -1.0;
  CHECK_THROWS_AS(derive_model2(cp), Error);
  cp = CircuitParams::model2_design();
  cp.epsilon_p[sub_kpo1] = 0.5;
  CHECK_THROWS_AS(derive_model2(cp), Error);
  cp = CircuitParams::model2_design();
  cp.E_L = -1.0;
  CHECK_THROWS_AS(derive_model1(cp), Error);
}
