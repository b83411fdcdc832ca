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

#include "kerrzz/dynamics.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "kerrzz/error.hpp"

namespace kerrzz {

namespace {

constexpr cplx kMinusI(0.0, -1.0);

// Dormand-Prince 5(4) tableau.
namespace dp {
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;
}  // namespace dp

// PI step-size controller constants.
constexpr double kSafety = 0.9;
constexpr double kExponent = 0.17;
constexpr double kBeta = 0.04;
constexpr double kFacMin = 0.2;
constexpr double kFacMax = 10.0;

void check_samples(const std::vector<double>& samples, double t0, double t_end) {
  if (!(t_end >= t0)) throw Error(ErrorKind::invalid_argument, "t_end must not precede t0");
  const double slack = 1e-12 * std::max(std::abs(t_end), std::abs(t0));
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (samples[i] < t0 - slack || samples[i] > t_end + slack) {
      std::ostringstream os;
      os << "sample time " << samples[i] << " outside [" << t0 << ", " << t_end << "]";
      throw Error(ErrorKind::invalid_argument, os.str());
    }
    if (i > 0 && !(samples[i] > samples[i - 1])) {
      throw Error(ErrorKind::invalid_argument, "sample times must be strictly increasing");
    }
  }
}

void check_hamiltonian_dim(const TimeDependentHamiltonian& h, Eigen::Index dim) {
  if (h.constant.rows() != dim || h.constant.cols() != dim) {
    throw Error(ErrorKind::dimension_mismatch, "Hamiltonian and state dimensions differ");
  }
  for (const auto& term : h.terms) {
    if (term.op.rows() != dim || term.op.cols() != dim) {
      throw Error(ErrorKind::dimension_mismatch, "time-dependent term has the wrong dimension");
    }
  }
}

bool is_diagonal(const SparseOp& op) {
  for (Eigen::Index r = 0; r < op.outerSize(); ++r) {
    for (SparseOp::InnerIterator it(op, r); it; ++it) {
      if (it.row() != it.col() && it.value() != cplx(0.0, 0.0)) return false;
    }
  }
  return true;
}

// Split of H(t) into sparse and diagonal parts, shared by both evolution paths.
struct HamiltonianParts {
  SparseOp base;
  std::vector<std::pair<SparseOp, std::function<double(double)>>> sparse_terms;
  std::vector<std::pair<Eigen::VectorXcd, std::function<double(double)>>> diagonal_terms;

  explicit HamiltonianParts(const TimeDependentHamiltonian& h) : base(h.constant) {
    for (const auto& term : h.terms) {
      if (is_diagonal(term.op)) {
        diagonal_terms.emplace_back(Eigen::VectorXcd(term.op.diagonal()), term.coeff);
      } else {
        sparse_terms.emplace_back(term.op, term.coeff);
      }
    }
  }

  // out = H_base x + sum_i c_i(t) O_i x, for vector or matrix x.
  template <class Dense>
  void apply(double t, const Dense& x, Dense& out, Dense& scratch) const {
    out.noalias() = base * x;
    for (const auto& [op, coeff] : sparse_terms) {
      const double c = coeff(t);
      if (c == 0.0) continue;
      scratch.noalias() = op * x;
      out += c * scratch;
    }
    if (!diagonal_terms.empty()) {
      Eigen::VectorXcd d = Eigen::VectorXcd::Zero(x.rows());
      for (const auto& [diag, coeff] : diagonal_terms) d += coeff(t) * diag;
      out.noalias() += d.asDiagonal() * x;
    }
  }
};

struct Controller {
  double err_prev = 1e-4;
  bool last_rejected = false;

  // Returns the factor for the next step given the scaled error of this one.
  double accept(double err) {
    err = std::max(err, 1e-10);
    double fac = kSafety * std::pow(err, -kExponent) * std::pow(err_prev, kBeta);
    fac = std::clamp(fac, kFacMin, last_rejected ? 1.0 : kFacMax);
    err_prev = std::max(err, 1e-4);
    last_rejected = false;
    return fac;
  }
  double reject(double err) {
    last_rejected = true;
    if (!std::isfinite(err)) return kFacMin;
    return std::max(kFacMin, kSafety * std::pow(err, -0.2));
  }
};

// Generic DP5(4) driver. `post` normalizes an accepted state and returns its
// trace/norm error; `sample` records an output at a requested time.
template <class State, class Rhs, class Post, class Sample>
void dormand_prince(const Rhs& rhs, State& y, double t0, double t_end,
                    const std::vector<double>& sample_times, const IntegratorOptions& opt,
                    IntegratorStats& stats, const Post& post, const Sample& sample) {
  const double span = t_end - t0;
  double h = opt.initial_step > 0.0 ? opt.initial_step : std::min(span / 1e4, 1e-11);
  if (opt.max_step > 0.0) h = std::min(h, opt.max_step);

  std::size_t next_sample = 0;
  const double slack = 1e-12 * std::max(std::abs(t_end), std::abs(t0));
  double t = t0;
  while (next_sample < sample_times.size() && sample_times[next_sample] <= t0 + slack) {
    sample(t0, y);
    ++next_sample;
  }
  if (span <= 0.0) return;

  State k1, k2, k3, k4, k5, k6, k7, tmp, err;
  rhs(t, y, k1);
  ++stats.rhs_evaluations;
  Controller ctl;

  while (t < t_end) {
    const double target =
        next_sample < sample_times.size() ? std::min(sample_times[next_sample], t_end) : t_end;
    bool clamped = false;
    const double h_free = h;
    double step = h;
    if (t + step >= target - slack) {
      step = target - t;
      clamped = true;
    }
    if (step < opt.min_step) {
      if (clamped && step > 0.0) {
        // Remaining gap is negligible; snap to the target.
        t = target;
      } else {
        std::ostringstream os;
        os << "step size " << step << " below minimum " << opt.min_step << " at t=" << t;
        throw Error(ErrorKind::step_underflow, os.str());
      }
    } else {
      using namespace dp;
      tmp = y + (step * a21) * k1;
      rhs(t + c2 * step, tmp, k2);
      tmp = y + step * (a31 * k1 + a32 * k2);
      rhs(t + c3 * step, tmp, k3);
      tmp = y + step * (a41 * k1 + a42 * k2 + a43 * k3);
      rhs(t + c4 * step, tmp, k4);
      tmp = y + step * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
      rhs(t + c5 * step, tmp, k5);
      tmp = y + step * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
      rhs(t + step, tmp, k6);
      tmp = y + step * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
      rhs(t + step, tmp, k7);
      stats.rhs_evaluations += 6;
      err = step * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

      const double scale = opt.atol + opt.rtol * std::max(y.norm(), tmp.norm());
      const double e = err.norm() / scale;
      if (!(e <= 1.0)) {
        ++stats.rejected;
        h = step * ctl.reject(e);
        if (opt.max_step > 0.0) h = std::min(h, opt.max_step);
        if (h < opt.min_step) {
          std::ostringstream os;
          os << "step size " << h << " below minimum " << opt.min_step << " at t=" << t
             << " (scaled error " << e << ")";
          throw Error(ErrorKind::step_underflow, os.str());
        }
        continue;
      }
      ++stats.steps;
      if (stats.steps > opt.max_steps) {
        throw Error(ErrorKind::no_convergence, "maximum number of integrator steps exceeded");
      }
      y.swap(tmp);
      k1.swap(k7);
      t = clamped ? target : t + step;
      const double drift = post(t, y);
      stats.max_trace_error = std::max(stats.max_trace_error, drift);
      if (drift > opt.trace_tolerance) {
        std::ostringstream os;
        os << "trace drift " << drift << " exceeds " << opt.trace_tolerance << " at t=" << t
           << " after " << stats.steps << " steps (" << stats.rejected << " rejected, last step "
           << step << ")";
        throw Error(ErrorKind::trace_drift, os.str());
      }
      double h_new = step * ctl.accept(e);
      if (clamped) h_new = std::max(h_new, h_free);
      h = opt.max_step > 0.0 ? std::min(h_new, opt.max_step) : h_new;
    }
    if (t >= target - slack && next_sample < sample_times.size() &&
        sample_times[next_sample] <= t + slack) {
      sample(t, y);
      ++next_sample;
    }
  }
}

double smallest_eigenvalue(const DensityMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

}  // namespace

void LindbladProblem::validate() const {
  const Eigen::Index n = rho0.rows();
  if (n == 0 || rho0.cols() != n) throw Error(ErrorKind::invalid_dimension, "rho0 must be square");
  check_hamiltonian_dim(hamiltonian, n);
  for (const auto& c : collapse_ops) {
    if (c.rate < 0.0) throw Error(ErrorKind::invalid_argument, "collapse rates must be non-negative");
    if (c.op.rows() != n || c.op.cols() != n) {
      throw Error(ErrorKind::dimension_mismatch, "collapse operator has the wrong dimension");
    }
  }
  const DensityCheck chk = check_density(rho0);
  if (chk.trace_error > 1e-9 || chk.hermiticity_error > 1e-9) {
    std::ostringstream os;
    os << "rho0 is not a valid density matrix (trace error " << chk.trace_error
       << ", hermiticity error " << chk.hermiticity_error << ")";
    throw Error(ErrorKind::invalid_argument, os.str());
  }
  check_samples(sample_times, t0, t_end);
}

void SchrodingerProblem::validate() const {
  const Eigen::Index n = psi0.size();
  if (n == 0) throw Error(ErrorKind::invalid_dimension, "psi0 is empty");
  check_hamiltonian_dim(hamiltonian, n);
  if (std::abs(psi0.squaredNorm() - 1.0) > 1e-9) {
    throw Error(ErrorKind::invalid_argument, "psi0 must be normalized");
  }
  check_samples(sample_times, t0, t_end);
}

LindbladGenerator::LindbladGenerator(const LindbladProblem& problem)
    : dim_(problem.hamiltonian.dim()), h_eff_(problem.hamiltonian.constant),
      terms_(problem.hamiltonian.terms) {
  for (const auto& c : problem.collapse_ops) {
    if (c.rate == 0.0) continue;
    const SparseOp ldag = c.op.adjoint();
    h_eff_ -= cplx(0.0, 0.5 * c.rate) * SparseOp(ldag * c.op);
    jumps_.push_back(std::sqrt(c.rate) * c.op);
  }
  h_eff_.makeCompressed();
}

void LindbladGenerator::apply(double t, const RowMatrix& rho, RowMatrix& out) const {
  // Y = -i H_eff rho; drho/dt = Y + Y^dag + sum_L L rho L^dag, with L rho L^dag = L (L rho)^dag.
  static thread_local RowMatrix y, scratch, z, zh;
  y.noalias() = h_eff_ * rho;
  for (const auto& term : terms_) {
    const double c = term.coeff(t);
    if (c == 0.0) continue;
    scratch.noalias() = term.op * rho;
    y += c * scratch;
  }
  y *= kMinusI;
  out = y + y.adjoint();
  for (const auto& l : jumps_) {
    z.noalias() = l * rho;
    zh = z.adjoint();
    out.noalias() += l * zh;
  }
}

void LindbladGenerator::apply(double t, const DensityMatrix& rho, DensityMatrix& out) const {
  RowMatrix r = rho, o;
  apply(t, r, o);
  out = o;
}

DensityMatrix lindblad_rhs(const DensityMatrix& rho, double t, const LindbladProblem& problem) {
  LindbladGenerator gen(problem);
  DensityMatrix out;
  gen.apply(t, rho, out);
  return out;
}

TimeSeries evolve(const LindbladProblem& problem, const IntegratorOptions& options,
                  const DensityObserver& observer) {
  problem.validate();
  const auto start = std::chrono::steady_clock::now();
  TimeSeries series;
  IntegratorStats& stats = series.stats;
  stats.min_eigenvalue = std::numeric_limits<double>::infinity();
  const double purity0 = problem.rho0.squaredNorm();

  // Split once into sparse constant part, off-diagonal terms and diagonal terms.
  LindbladProblem local = problem;
  HamiltonianParts parts(problem.hamiltonian);
  local.hamiltonian.terms.clear();
  for (const auto& [op, coeff] : parts.sparse_terms) local.hamiltonian.terms.push_back({op, coeff});
  LindbladGenerator gen(local);

  const auto rhs = [&](double t, const RowMatrix& rho, RowMatrix& out) {
    gen.apply(t, rho, out);
    if (!parts.diagonal_terms.empty()) {
      // -i [D, rho] for diagonal D: element (m, n) scales by -i (d_m - d_n).
      Eigen::RowVectorXd d = Eigen::RowVectorXd::Zero(rho.cols());
      for (const auto& [diag, coeff] : parts.diagonal_terms) d += coeff(t) * diag.real().transpose();
      for (Eigen::Index m = 0; m < rho.rows(); ++m) {
        out.row(m) += kMinusI * ((d(m) - d.array()).matrix().cwiseProduct(rho.row(m)));
      }
    }
  };
  const auto post = [](double, RowMatrix& rho) {
    rho = (0.5 * (rho + rho.adjoint())).eval();
    return std::abs(rho.trace().real() - 1.0);
  };
  const auto sample = [&](double t, const RowMatrix& rows) {
    const DensityMatrix rho = rows;
    series.times.push_back(t);
    if (observer) series.values.push_back(observer(t, rho));
    if (options.keep_states) series.states.push_back(rho);
    if (options.check_positivity) {
      stats.min_eigenvalue = std::min(stats.min_eigenvalue, smallest_eigenvalue(rho));
    }
    stats.max_purity_drift = std::max(stats.max_purity_drift, std::abs(rho.squaredNorm() - purity0));
    if (!options.checkpoint_path.empty()) write_checkpoint(options.checkpoint_path, t, rho);
  };

  RowMatrix rho = problem.rho0;
  dormand_prince(rhs, rho, problem.t0, problem.t_end, problem.sample_times, options, stats, post,
                 sample);
  if (!std::isfinite(stats.min_eigenvalue)) stats.min_eigenvalue = 0.0;
  series.final_state = rho;
  stats.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return series;
}

PureTimeSeries evolve_pure(const SchrodingerProblem& problem, const IntegratorOptions& options,
                           const StateObserver& observer) {
  problem.validate();
  const auto start = std::chrono::steady_clock::now();
  PureTimeSeries series;
  IntegratorStats& stats = series.stats;
  HamiltonianParts parts(problem.hamiltonian);
  StateVector scratch;

  const auto rhs = [&](double t, const StateVector& psi, StateVector& out) {
    parts.apply(t, psi, out, scratch);
    out *= kMinusI;
  };
  const auto post = [](double, StateVector& psi) { return std::abs(psi.squaredNorm() - 1.0); };
  const auto sample = [&](double t, const StateVector& psi) {
    series.times.push_back(t);
    if (observer) series.values.push_back(observer(t, psi));
    if (options.keep_states) series.states.push_back(psi);
    if (!options.checkpoint_path.empty()) write_checkpoint(options.checkpoint_path, t, psi);
  };

  StateVector psi = problem.psi0;
  dormand_prince(rhs, psi, problem.t0, problem.t_end, problem.sample_times, options, stats, post,
                 sample);
  series.final_state = std::move(psi);
  stats.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return series;
}

void write_checkpoint(const std::string& path, double t, const Matrix& state) {
  const std::string tmp_path = path + ".tmp";
  {
    std::ofstream out(tmp_path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::io, "cannot open checkpoint file " + tmp_path);
    const char magic[4] = {'K', 'Z', 'C', 'K'};
    const std::uint32_t version = 1;
    const std::uint64_t rows = static_cast<std::uint64_t>(state.rows());
    const std::uint64_t cols = static_cast<std::uint64_t>(state.cols());
    out.write(magic, 4);
    out.write(reinterpret_cast<const char*>(&version), sizeof version);
    out.write(reinterpret_cast<const char*>(&t), sizeof t);
    out.write(reinterpret_cast<const char*>(&rows), sizeof rows);
    out.write(reinterpret_cast<const char*>(&cols), sizeof cols);
    out.write(reinterpret_cast<const char*>(state.data()),
              static_cast<std::streamsize>(sizeof(cplx) * rows * cols));
    if (!out) throw Error(ErrorKind::io, "failed writing checkpoint " + tmp_path);
  }
  if (std::rename(tmp_path.c_str(), path.c_str()) != 0) {
    throw Error(ErrorKind::io, "cannot move checkpoint into place at " + path);
  }
}

std::pair<double, Matrix> read_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot open checkpoint file " + path);
  char magic[4];
  std::uint32_t version = 0;
  double t = 0.0;
  std::uint64_t rows = 0, cols = 0;
  in.read(magic, 4);
  in.read(reinterpret_cast<char*>(&version), sizeof version);
  in.read(reinterpret_cast<char*>(&t), sizeof t);
  in.read(reinterpret_cast<char*>(&rows), sizeof rows);
  in.read(reinterpret_cast<char*>(&cols), sizeof cols);
  if (!in || std::memcmp(magic, "KZCK", 4) != 0 || version != 1) {
    throw Error(ErrorKind::io, "not a version-1 checkpoint: " + path);
  }
  if (rows == 0 || cols == 0 || rows > (1u << 20) || cols > (1u << 20)) {
    throw Error(ErrorKind::io, "implausible checkpoint dimensions in " + path);
  }
  Matrix state(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  in.read(reinterpret_cast<char*>(state.data()),
          static_cast<std::streamsize>(sizeof(cplx) * rows * cols));
  if (!in) throw Error(ErrorKind::io, "truncated checkpoint " + path);
  return {t, std::move(state)};
}

}  // namespace kerrzz
