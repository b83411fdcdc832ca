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

// Residual-coupling runs, R_zz gate runs and the alpha_max sweep.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kerrzz/analysis.hpp"
#include "kerrzz/dynamics.hpp"
#include "kerrzz/model.hpp"
#include "kerrzz/schedule.hpp"

namespace kerrzz {

enum class Tier { ci, full };

struct TruncationSpec {
  int kpo_cutoff = 0;      // Fock cutoff for the KPO diagonalization; 0 picks recommended_cutoff
  int kpo_keep = 6;        // retained KPO eigenstates
  int coupler_cutoff = 10;  // coupler Fock states

  CompositeBasis build(double kerr, double pump) const;
};

// Secular-growth check: least-squares slope times window against the
// half peak-to-peak of the detrended series.
struct SlopeTest {
  double slope = 0.0;      // per second
  double secular = 0.0;    // |slope| * window
  double amplitude = 0.0;  // (max - min) / 2 after removing the fit
  double ratio_limit = 0.2;
  bool pass = false;
};

SlopeTest slope_test(const std::vector<double>& t, const std::vector<double>& y,
                     double ratio_limit = 0.2);

struct OffResidualResult {
  std::vector<double> t;
  std::vector<double> infidelity;
  std::vector<double> analytic;  // dephasing-only reference
  double delta1 = 0.0;
  double alpha = 0.0;
  double max_infidelity = 0.0;
  SlopeTest slope;
  IntegratorStats stats;
};

// Model I with Delta_1 = -Delta_2. Loss-free runs use the pure-state path unless force_density.
OffResidualResult run_off_residual(const SystemParams& params, const TruncationSpec& trunc,
                                   const std::vector<double>& sample_times,
                                   const IntegratorOptions& options = {},
                                   bool force_density = false);

// Model II with Delta~_1 from the degeneracy condition.
OffResidualResult run_off_residual_model2(const SystemParamsII& params, const TruncationSpec& trunc,
                                          const std::vector<double>& sample_times,
                                          const IntegratorOptions& options = {},
                                          bool force_density = false);

struct GateResult {
  double t_f = 0.0;
  double alpha_max = 0.0;
  double theta_schedule = 0.0;  // quadrature value for this schedule
  double theta_target = 0.0;    // angle of the ideal gate
  double infidelity = 0.0;
  double analytic_dephasing = 0.0;
  IntegratorStats stats;
};

GateResult run_rzz_gate(const SystemParams& params, const TruncationSpec& trunc, double t_f,
                        double alpha_max, double theta_target,
                        const IntegratorOptions& options = {}, bool force_density = false);

struct SweepRow {
  double t_f = 0.0;
  double alpha_max = 0.0;
  double alpha_max_coarse = 0.0;  // NaN when the phase target is out of reach
  double infidelity_k0 = 0.0;
  double infidelity_kappa = 0.0;  // NaN unless kappa runs were requested
  double theta = 0.0;
};

struct SweepOptions {
  SearchMode mode = SearchMode::refined;
  double kappa = 0.0;  // > 0 adds a lossy gate run at the optimized alpha_max
  std::optional<TruncationSpec> lossy_truncation;  // truncation of that run; defaults to the sweep's
  int jobs = 1;        // concurrent sweep points
  AlphaMaxSearch search;
  IntegratorOptions integrator;
};

// Optimizes alpha_max (loss-free, Theta = target) for each gate time.
std::vector<SweepRow> run_table3_sweep(const SystemParams& params, const TruncationSpec& trunc,
                                       const std::vector<double>& gate_times, double theta_target,
                                       const SweepOptions& options = {});

// Table III reference values of alpha_c^max, keyed by gate time in ns (0 if absent).
double table3_alpha_max(double t_f_ns);

std::vector<double> uniform_grid(double t0, double t1, double dt);

}  // namespace kerrzz
