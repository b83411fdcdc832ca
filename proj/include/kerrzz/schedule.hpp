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

// Coupler-1 detuning schedule for the R_zz gate.
//
// The coupler displacement follows lambda[u(t)], where lambda is a smooth step
// from alpha_min up to alpha_max and back over [0, 2T] and u(t) is defined by
// int_0^u lambda(x) dx = t. Delta_1(t) = 2 g alpha / lambda[u(t)] and
// Delta_2 = -2 g alpha / alpha_min, so the schedule starts and ends at the
// residual-free point Delta_1 = -Delta_2.

#pragma once

#include <functional>

namespace kerrzz {

struct DetuningSchedule {
  double alpha_min = 0.04;
  double alpha_max = 0.524;
  double t_f = 16e-9;   // s
  double g = 0.0;       // rad/s
  double alpha = 2.0;   // KPO amplitude

  double period() const { return t_f / (alpha_max + alpha_min); }  // T
  double delta2() const { return -2.0 * g * alpha / alpha_min; }
  void validate() const;
};

// Table I coupling (g/2pi = 10 MHz, alpha = 2, alpha_min = 0.04).
DetuningSchedule table1_schedule(double t_f, double alpha_max);

double lambda_profile(double x, const DetuningSchedule& s);
double lambda_derivative(double x, const DetuningSchedule& s);

// int_0^u lambda(x) dx in closed form (left side of the implicit relation).
double lambda_integral(double u, const DetuningSchedule& s);

// Root of lambda_integral(u) = t: bisection to 1e-13 T followed by one Newton step.
double solve_u(double t, const DetuningSchedule& s);

double delta1_of_t(double t, const DetuningSchedule& s);

// Theta = -2 g alpha int_0^{t_f} [lambda(u(t)) - alpha_min] dt by adaptive
// Gauss-Kronrod quadrature in t. Exactly zero for a flat schedule.
double theta_of_schedule(const DetuningSchedule& s);

// Independent evaluations of the same angle:
//  - direct form -4 g^2 alpha^2 int [1/Delta_1(t) + 1/Delta_2] dt,
//  - substituted form -2 g alpha [int_0^{2T} lambda(u)^2 du - alpha_min t_f].
double theta_direct(const DetuningSchedule& s);
double theta_substituted(const DetuningSchedule& s);

enum class SearchMode { coarse, refined };

struct AlphaMaxSearch {
  double lower = 0.0;          // search interval for alpha_max
  double upper = 0.99;
  double resolution = 0.002;   // final bracket width (refined mode)
  double scan_step = 0.02;     // grid spacing of the refined pre-scan
  double scan_half_width = 0.16;
};

// Coarse mode: root of theta_of_schedule(alpha_max) = target.
// Refined mode: minimizes `infidelity(alpha_max)` with a grid scan around the
// coarse root followed by golden-section search down to `resolution`.
double find_alpha_max(double target_theta, const DetuningSchedule& base, SearchMode mode,
                      const std::function<double(double)>& infidelity = {},
                      const AlphaMaxSearch& search = {});

// Golden-section minimization of a unimodal function on [a, b].
double golden_section_minimize(const std::function<double(double)>& f, double a, double b,
                               double tolerance);

}  // namespace kerrzz
