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

// Truncated bosonic bases for the four-mode system.
//
// Tensor products always use the mode order (KPO1, KPO2, c1, c2); KPO1 is the
// most significant index. KPO modes are expanded in the highest-energy
// eigenstates of the isolated parametrically driven Kerr oscillator, couplers
// in Fock states.

#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <span>
#include <utility>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "kerrzz/error.hpp"

namespace kerrzz {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using SparseOp = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;
using StateVector = Vector;
using DensityMatrix = Matrix;

enum class ModeKind { fock, kpo_eigen };

struct ModeSpec {
  ModeKind kind = ModeKind::fock;
  int fock_cutoff = 4;  // Fock dimension before any eigen-truncation
  int keep_dim = 4;     // retained dimension

  static ModeSpec fock(int cutoff) { return {ModeKind::fock, cutoff, cutoff}; }
  static ModeSpec kpo_eigen(int cutoff, int keep) { return {ModeKind::kpo_eigen, cutoff, keep}; }

  void validate() const;
};

enum class Mode : int { kpo1 = 0, kpo2 = 1, c1 = 2, c2 = 3 };
inline constexpr int kNumModes = 4;

// Retained single-mode basis: columns of `transform` are the retained states
// written in the Fock basis.
struct ModeBasis {
  ModeSpec spec;
  Matrix transform;             // fock_cutoff x keep_dim isometry
  Matrix annihilation;          // T^dag a T, keep_dim x keep_dim
  Eigen::VectorXd energies;     // eigenvalues (rad/s) for kpo-eigen modes, empty otherwise
  Eigen::VectorXi parity;       // +1 / -1 per retained state for kpo-eigen modes

  int dim() const { return spec.keep_dim; }
};

struct KpoTruncation {
  Matrix transform;
  Matrix annihilation;
  Eigen::VectorXd energies;
  Eigen::VectorXi parity;
  double cat_span_fidelity = 1.0;  // min over |+alpha>, |-alpha> of |P_top2 |.>|^2
};

// Annihilation operator on `cutoff` Fock levels.
Matrix fock_annihilation(int cutoff);

// Fock-space matrices of the isolated KPO: -(K/2) a^2dag a^2 + (p/2)(a^2dag + a^2).
Eigen::MatrixXd kpo_hamiltonian_fock(double kerr, double pump, int cutoff);

// Truncated coherent state, explicitly renormalized. The pre-renormalization
// norm is reported through `warnings` when it falls below 1 - 1e-10.
StateVector coherent_state(cplx alpha, int cutoff, Warnings* warnings = nullptr);

// Suggested cutoff so that the truncated coherent-state norm exceeds 1 - 1e-10.
int recommended_cutoff(double abs_alpha);

// Diagonalizes the isolated KPO Hamiltonian and keeps the keep_dim
// highest-energy eigenstates (the cat doublet first). The even and odd parity
// blocks are diagonalized separately so the degenerate doublet never mixes.
KpoTruncation kpo_eigen_truncation(double kerr, double pump, const ModeSpec& spec);

struct CatPair {
  StateVector plus;
  StateVector minus;
  double norm_plus = 0.0;   // N+ = [2(1+e^{-2a^2})]^{-1/2}
  double norm_minus = 0.0;  // N- = [2(1-e^{-2a^2})]^{-1/2}
};

// Even/odd cat states N+-(|alpha> +- |-alpha>) in the Fock basis.
CatPair cat_states(double alpha, int cutoff);

SparseOp kron(const SparseOp& a, const SparseOp& b);
SparseOp sparse_identity(Eigen::Index n);
SparseOp to_sparse(const Matrix& m, double drop_below = 0.0);

class CompositeBasis {
 public:
  // KPO modes share `kpo_spec` and are built from (kerr, pump); couplers share
  // `coupler_spec`, which must be of kind fock.
  static CompositeBasis build(const ModeSpec& kpo_spec, const ModeSpec& coupler_spec,
                              double kerr, double pump);

  const ModeBasis& mode(Mode m) const { return modes_[static_cast<int>(m)]; }
  std::array<int, kNumModes> dims() const;
  Eigen::Index total_dim() const { return total_dim_; }
  std::uint64_t id() const { return id_; }
  double kerr() const { return kerr_; }
  double pump() const { return pump_; }
  double alpha() const;

  // Identity on every slot except `slot`, which carries `op`.
  SparseOp embed(const Matrix& op, Mode slot) const;
  SparseOp embed(const SparseOp& op, Mode slot) const;
  SparseOp annihilation(Mode slot) const;
  SparseOp identity() const { return sparse_identity(total_dim_); }

  // Maps a Fock-basis single-mode vector into the retained basis (T^dag v).
  StateVector to_retained(Mode slot, const StateVector& fock_vector) const;

  StateVector product(const std::array<StateVector, kNumModes>& factors) const;
  StateVector vacuum(Mode slot) const;

 private:
  std::array<ModeBasis, kNumModes> modes_;
  Eigen::Index total_dim_ = 0;
  std::uint64_t id_ = 0;
  double kerr_ = 0.0;
  double pump_ = 0.0;
};

// Reduced density matrix over the listed subsystems (ascending order).
DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> dims,
                            std::span<const int> keep);

DensityMatrix projector(const StateVector& psi);

struct DensityCheck {
  double trace_error = 0.0;
  double hermiticity_error = 0.0;
  double min_eigenvalue = 0.0;
};

DensityCheck check_density(const DensityMatrix& rho);

double relative_hermiticity_error(const SparseOp& op);

}  // namespace kerrzz
