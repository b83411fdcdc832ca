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

// Logical states, fidelity metrics and closed-form dephasing references.
//
// Logical kets are |0> = |alpha>, |1> = |-alpha> on each KPO, with both
// couplers in vacuum. They are not orthogonal; components are extracted with
// the dual frame (inverse Gram matrix) so the decomposition is exact.

#pragma once

#include <array>

#include "kerrzz/hilbert.hpp"

namespace kerrzz {

struct GateSpec {
  double theta = 0.0;  // rad
  double t_f = 0.0;    // s
};

struct BlochVector {
  double x = 0.0, y = 0.0, z = 0.0;
  double norm() const;
};

// Single-KPO and two-KPO logical kets expressed in a composite basis.
class LogicalFrame {
 public:
  explicit LogicalFrame(const CompositeBasis& basis);

  double alpha() const { return alpha_; }
  std::uint64_t basis_id() const { return basis_id_; }
  Eigen::Index dim() const { return dim_; }

  // |i>_KPO in the retained single-mode basis (i = 0 -> alpha, 1 -> -alpha).
  const StateVector& kpo_ket(int i) const { return kpo_kets_[i]; }
  // |i, j>_q |0, 0>_c in the composite basis, index 2 i + j.
  const StateVector& ket(int i, int j) const { return kets_[2 * i + j]; }
  // |C+>|C+>|0,0>.
  const StateVector& initial() const { return initial_; }

  // Dual-frame coefficients beta_ij (index 2 i + j) of the projection of psi
  // onto the logical span.
  std::array<cplx, 4> coefficients(const StateVector& psi) const;
  StateVector compose(const std::array<cplx, 4>& beta) const;

  // Largest norm lost when projecting the logical kets into the truncated basis.
  double truncation_loss() const { return truncation_loss_; }

 private:
  double alpha_ = 0.0;
  std::uint64_t basis_id_ = 0;
  Eigen::Index dim_ = 0;
  std::array<StateVector, 2> kpo_kets_;
  std::array<StateVector, 4> kets_;
  Eigen::Matrix4cd gram_inverse_;
  StateVector initial_;
  double truncation_loss_ = 0.0;
};

// |C+>|C+>|0,0> as a pure density matrix; throws if the truncation loses more than 1e-8.
DensityMatrix initial_state(const CompositeBasis& basis);
StateVector initial_ket(const CompositeBasis& basis);

// 1 - <psi|rho|psi> (phase-insensitive by construction).
double state_infidelity(const DensityMatrix& rho, const StateVector& psi);
double state_infidelity(const StateVector& phi, const StateVector& psi);

// Applies exp(-i Theta delta_ij) to each logical component of `initial` and renormalizes.
StateVector ideal_rzz_state(const StateVector& initial, const GateSpec& gate,
                            const LogicalFrame& frame);

double gate_infidelity(const DensityMatrix& rho_final, const GateSpec& gate,
                       const StateVector& initial, const LogicalFrame& frame);
double gate_infidelity(const StateVector& psi_final, const GateSpec& gate,
                       const StateVector& initial, const LogicalFrame& frame);

// gamma = 2 kappa alpha^2
double dephasing_rate(double kappa, double alpha);

// 1 - (1 + e^{-2a^2})^2 (1 + e^{-g t})^2 / [4 (1 + e^{-2a^2 - g t})^2]
double analytic_off_infidelity(double t, double alpha, double gamma);

// Infidelity of the dephased gate output against the ideal R_zz(Theta) state.
double analytic_gate_dephasing_infidelity(double t_f, double theta, double alpha, double gamma);

// Two-level reduction on (C+, C-): a = alpha [[0, 1/r], [r, 0]] with r = N+/N-.
Matrix two_level_annihilation(double alpha);
double cat_norm_ratio(double alpha);  // r = N+/N-

// Closed-form solution of the two-level dephasing dynamics (sigma_z = |C+><C+| - |C-><C-|).
BlochVector bloch_dephasing_solution(const BlochVector& b0, double t, double kappa, double alpha);
BlochVector bloch_rhs(const BlochVector& b, double kappa, double alpha);
BlochVector bloch_from_density(const Matrix& rho2);
Matrix density_from_bloch(const BlochVector& b);

// Product of two dephased cat states with couplers in vacuum (coherences of
// |alpha><-alpha| scaled by e^{-gamma t}).
DensityMatrix dephased_product_state(double t, double gamma, const LogicalFrame& frame);

// Dephased output of the ideal gate: logical coherences decay as
// e^{-gamma t_f (2 - delta_ii' - delta_jj')}.
DensityMatrix dephased_gate_state(double t_f, double theta, double gamma, const LogicalFrame& frame);

// Ideal gate projector built from the closed-form normalization
// 4 (1 + 2 cos Theta e^{-2a^2} + e^{-4a^2}).
StateVector closed_form_ideal_state(double theta, const LogicalFrame& frame);

}  // namespace kerrzz
