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

// Time evolution under the GKSL master equation
//
//   drho/dt = -i [H(t), rho] + sum_L rate_L (L rho L^dag - {L^dag L, rho} / 2)
//
// integrated on the density matrix with an adaptive Dormand-Prince 5(4) pair.
// A pure-state path integrates the Schrodinger equation for loss-free runs.

#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "kerrzz/hilbert.hpp"
#include "kerrzz/model.hpp"

namespace kerrzz {

struct CollapseOp {
  SparseOp op;
  double rate = 0.0;  // rad/s
};

struct LindbladProblem {
  TimeDependentHamiltonian hamiltonian;
  std::vector<CollapseOp> collapse_ops;
  DensityMatrix rho0;
  double t0 = 0.0;
  double t_end = 0.0;
  std::vector<double> sample_times;  // sorted, inside [t0, t_end]

  void validate() const;
};

struct SchrodingerProblem {
  TimeDependentHamiltonian hamiltonian;
  StateVector psi0;
  double t0 = 0.0;
  double t_end = 0.0;
  std::vector<double> sample_times;

  void validate() const;
};

struct IntegratorOptions {
  double rtol = 1e-9;
  double atol = 1e-12;
  double initial_step = 0.0;  // 0 selects (t_end - t0) / 1e4, capped at 0.01 ns
  double max_step = 0.0;      // 0 means unlimited
  double min_step = 1e-22;
  double trace_tolerance = 1e-7;
  long max_steps = 200000000;
  bool check_positivity = false;  // smallest eigenvalue at every sample
  bool keep_states = false;
  std::string checkpoint_path;    // rewritten at every sample when non-empty
};

struct IntegratorStats {
  long steps = 0;
  long rejected = 0;
  long rhs_evaluations = 0;
  double max_trace_error = 0.0;    // |tr rho - 1| (or | |psi|^2 - 1 |) over accepted steps
  double min_eigenvalue = 0.0;     // over samples, when positivity checks are on
  double max_purity_drift = 0.0;   // |tr rho^2 - tr rho0^2| over samples
  double wall_seconds = 0.0;
};

// Scalars recorded at each sample time.
using DensityObserver = std::function<std::vector<double>(double, const DensityMatrix&)>;
using StateObserver = std::function<std::vector<double>(double, const StateVector&)>;

struct TimeSeries {
  std::vector<double> times;
  std::vector<std::vector<double>> values;
  std::vector<DensityMatrix> states;  // filled when keep_states
  DensityMatrix final_state;
  IntegratorStats stats;
};

struct PureTimeSeries {
  std::vector<double> times;
  std::vector<std::vector<double>> values;
  std::vector<StateVector> states;
  StateVector final_state;
  IntegratorStats stats;
};

// Row-major density storage used inside the integrator; sparse-times-dense
// products against the row-major SparseOp are several times faster this way.
using RowMatrix = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Right-hand side evaluator with precomputed effective Hamiltonian and scaled jump operators.
class LindbladGenerator {
 public:
  explicit LindbladGenerator(const LindbladProblem& problem);

  // out = drho/dt; rho must be Hermitian.
  void apply(double t, const DensityMatrix& rho, DensityMatrix& out) const;
  void apply(double t, const RowMatrix& rho, RowMatrix& out) const;
  Eigen::Index dim() const { return dim_; }

 private:
  Eigen::Index dim_ = 0;
  SparseOp h_eff_;  // constant part of H - (i/2) sum rate L^dag L
  std::vector<TimeDependentHamiltonian::Term> terms_;
  std::vector<SparseOp> jumps_;  // sqrt(rate) L
};

DensityMatrix lindblad_rhs(const DensityMatrix& rho, double t, const LindbladProblem& problem);

TimeSeries evolve(const LindbladProblem& problem, const IntegratorOptions& options = {},
                  const DensityObserver& observer = {});

PureTimeSeries evolve_pure(const SchrodingerProblem& problem, const IntegratorOptions& options = {},
                           const StateObserver& observer = {});

// Checkpoint format (little endian): "KZCK" magic, uint32 version = 1, double t,
// uint64 rows, uint64 cols, then rows*cols complex<double> in column-major order.
void write_checkpoint(const std::string& path, double t, const Matrix& state);
std::pair<double, Matrix> read_checkpoint(const std::string& path);

}  // namespace kerrzz
