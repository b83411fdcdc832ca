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

// Rotating-frame Hamiltonians of the two-KPO / two-coupler system and the
// conditioned coupler Hamiltonians behind the degeneracy condition.
//
// All coefficients are angular frequencies (rad/s); H is H/hbar.

#pragma once

#include <array>
#include <functional>
#include <vector>

#include "kerrzz/hilbert.hpp"

namespace kerrzz {

struct SystemParams {
  double kerr = 0.0;                    // K
  double pump = 0.0;                    // p
  std::array<double, 2> chi{};          // chi_k
  std::array<std::array<double, 2>, 2> g{};  // g[j][k], KPO j -- coupler k
  double kappa = 0.0;                   // single-photon loss rate
  double delta2 = 0.0;                  // fixed coupler-2 detuning
  double alpha_c_min = 0.04;

  double alpha() const;
  void validate() const;

  // K/2pi = 20 MHz, p/2pi = 80 MHz, chi/2pi = g/2pi = 10 MHz, kappa = 0,
  // alpha_c^min = 0.04 and Delta_2 = -2 g alpha / alpha_c^min.
  static SystemParams table1();
};

// Parameters of the all-capacitive circuit (model II).
struct SystemParamsII {
  double kerr = 0.0;                 // K~
  double pump = 0.0;                 // p~
  std::array<double, 2> chi{};       // chi~_k (values at t = 0)
  std::array<double, 2> g{};         // g_k, identical for both KPOs
  double g_kpo = 0.0;
  double g_c = 0.0;
  double kappa = 0.0;
  double delta2 = 0.0;               // Delta~_2

  double alpha() const;
  void validate() const;

  // Reduction used by the generic builder: g_kpo = g_c = 0 gives model I.
  SystemParams as_main() const;
};

// H(t) = constant + sum_i coeff_i(t) * op_i
struct TimeDependentHamiltonian {
  struct Term {
    SparseOp op;
    std::function<double(double)> coeff;
  };
  SparseOp constant;
  std::vector<Term> terms;

  SparseOp at(double t) const;
  Eigen::Index dim() const { return constant.rows(); }
};

SparseOp build_h_main(const SystemParams& params, double delta1, const CompositeBasis& basis);

SparseOp build_h_circuit2(const SystemParamsII& params, double delta1_tilde,
                          const CompositeBasis& basis);

// Model I Hamiltonian with Delta_1(t) supplied as a callable; the Delta_1
// dependence is carried by the coupler-1 number operator term.
TimeDependentHamiltonian build_h_main_td(const SystemParams& params,
                                         std::function<double(double)> delta1,
                                         const CompositeBasis& basis);

TimeDependentHamiltonian build_h_circuit2_td(const SystemParamsII& params,
                                             std::function<double(double)> delta1_tilde,
                                             const CompositeBasis& basis);

// Single-photon loss operators a1, a2, c1, c2 (all at rate kappa).
std::vector<SparseOp> loss_operators(const CompositeBasis& basis);

// alpha_k = 2 g alpha / Delta_k, using g = g[0][k].
double coupler_displacement(const SystemParams& params, double delta_k);

// <i,j|H|i,j>_q restricted to the couplers, on Fock(cutoff) x Fock(cutoff).
// Same labels use the displaced-oscillator form, different labels the bare form;
// both include the constant K alpha^4.
Matrix conditioned_coupler_hamiltonian(const SystemParams& params, double delta1, int i, int j,
                                       int coupler_cutoff);

// Eigenenergies of the conditioned coupler Hamiltonians with chi neglected.
double conditioned_energy_same(const SystemParams& params, double delta1);
double conditioned_energy_different(const SystemParams& params);

struct SmallChiReport {
  std::array<double, 2> ratio{};  // chi |alpha_k|^3 / (g alpha)
  double threshold = 0.1;
  bool pass = false;
};

SmallChiReport check_small_chi(const SystemParams& params, double delta1, double threshold = 0.1);

// Same-label energies of model II (with the extra KPO-KPO and coupler-coupler
// exchange) and the Delta~_1 that makes them degenerate with the different-label one.
double conditioned_energy_same_model2(const SystemParamsII& params, double delta1_tilde);
double conditioned_energy_different_model2(const SystemParamsII& params);
double detuning_condition_model2(const SystemParamsII& params);

enum class Parity { same, different };

// Effective drive on the two KPOs conditioned on the coupler state; acts on the
// KPO1 x KPO2 retained space. `label` is i of |i,i>_q for the same-parity case.
Matrix conditioned_drive_on_kpos(const SystemParams& params, double delta1, Parity parity,
                                 int label, const CompositeBasis& basis);

// Drive coefficient g |alpha_1 + alpha_2| relative to the gap between the
// cat doublet and the next KPO level.
double drive_to_gap_ratio(const SystemParams& params, double delta1, const CompositeBasis& basis);

}  // namespace kerrzz
