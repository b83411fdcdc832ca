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

#include "kerrzz/hilbert.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>
#include <vector>

#include <Eigen/Eigenvalues>

namespace kerrzz {

namespace {

std::uint64_t mix(std::uint64_t seed, std::uint64_t value) {
  // splitmix-style combine
  value += 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
  value = (value ^ (value >> 30)) * 0xbf58476d1ce4e5b9ULL;
  value = (value ^ (value >> 27)) * 0x94d049bb133111ebULL;
  return seed ^ (value ^ (value >> 31));
}

ModeBasis fock_mode(const ModeSpec& spec) {
  ModeBasis mb;
  mb.spec = spec;
  mb.transform = Matrix::Identity(spec.fock_cutoff, spec.fock_cutoff);
  mb.annihilation = fock_annihilation(spec.fock_cutoff);
  return mb;
}

}  // namespace

void ModeSpec::validate() const {
  if (fock_cutoff < 2) {
    throw Error(ErrorKind::invalid_dimension, "fock_cutoff must be >= 2, got " + std::to_string(fock_cutoff));
  }
  if (keep_dim < 2 || keep_dim > fock_cutoff) {
    throw Error(ErrorKind::invalid_dimension,
                "keep_dim must lie in [2, fock_cutoff], got " + std::to_string(keep_dim));
  }
  if (kind == ModeKind::fock && keep_dim != fock_cutoff) {
    throw Error(ErrorKind::invalid_dimension, "fock modes keep every level");
  }
}

Matrix fock_annihilation(int cutoff) {
  if (cutoff < 2) {
    throw Error(ErrorKind::invalid_dimension, "annihilation operator needs cutoff >= 2, got " +
                                                  std::to_string(cutoff));
  }
  Matrix a = Matrix::Zero(cutoff, cutoff);
  for (int n = 1; n < cutoff; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

Eigen::MatrixXd kpo_hamiltonian_fock(double kerr, double pump, int cutoff) {
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(cutoff, cutoff);
  for (int n = 0; n < cutoff; ++n) {
    h(n, n) = -0.5 * kerr * n * (n - 1.0);
    if (n + 2 < cutoff) {
      // <n+2| a^2dag |n> = sqrt((n+1)(n+2))
      const double m = std::sqrt((n + 1.0) * (n + 2.0));
      h(n + 2, n) = 0.5 * pump * m;
      h(n, n + 2) = 0.5 * pump * m;
    }
  }
  return h;
}

StateVector coherent_state(cplx alpha, int cutoff, Warnings* warnings) {
  if (cutoff < 1) throw Error(ErrorKind::invalid_dimension, "coherent state needs cutoff >= 1");
  StateVector psi(cutoff);
  psi(0) = std::exp(-0.5 * std::norm(alpha));
  for (int n = 1; n < cutoff; ++n) psi(n) = psi(n - 1) * alpha / std::sqrt(static_cast<double>(n));
  const double norm = psi.norm();
  if (norm * norm < 1.0 - 1e-10) {
    std::ostringstream os;
    os << "coherent state |" << alpha << "> truncated at cutoff " << cutoff
       << " keeps norm^2 " << norm * norm;
    warn(warnings, os.str());
  }
  return psi / norm;
}

int recommended_cutoff(double abs_alpha) {
  const double a = std::abs(abs_alpha);
  return static_cast<int>(std::ceil(a * a + 7.0 * a + 10.0));
}

KpoTruncation kpo_eigen_truncation(double kerr, double pump, const ModeSpec& spec) {
  spec.validate();
  if (spec.kind != ModeKind::kpo_eigen) {
    throw Error(ErrorKind::invalid_argument, "kpo_eigen_truncation needs a kpo-eigen mode spec");
  }
  if (!(kerr > 0.0) || pump < 0.0) {
    throw Error(ErrorKind::invalid_argument, "KPO needs K > 0 and p >= 0");
  }
  const int n = spec.fock_cutoff;
  const Eigen::MatrixXd h = kpo_hamiltonian_fock(kerr, pump, n);

  struct Level {
    double energy;
    int parity;
    Eigen::VectorXd vec;
  };
  std::vector<Level> levels;
  for (int par = 0; par < 2; ++par) {
    std::vector<int> idx;
    for (int k = par; k < n; k += 2) idx.push_back(k);
    const auto m = static_cast<Eigen::Index>(idx.size());
    Eigen::MatrixXd block(m, m);
    for (Eigen::Index r = 0; r < m; ++r)
      for (Eigen::Index c = 0; c < m; ++c) block(r, c) = h(idx[r], idx[c]);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(block);
    for (Eigen::Index k = 0; k < m; ++k) {
      Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
      for (Eigen::Index r = 0; r < m; ++r) v(idx[r]) = es.eigenvectors()(r, k);
      levels.push_back({es.eigenvalues()(k), par == 0 ? 1 : -1, std::move(v)});
    }
  }
  double scale = 0.0;
  for (const auto& l : levels) scale = std::max(scale, std::abs(l.energy));
  const double tie = 1e-9 * std::max(scale, kerr);
  std::stable_sort(levels.begin(), levels.end(), [tie](const Level& a, const Level& b) {
    if (std::abs(a.energy - b.energy) <= tie) return a.parity > b.parity;
    return a.energy > b.energy;
  });

  KpoTruncation out;
  const int keep = spec.keep_dim;
  Eigen::MatrixXd t(n, keep);
  out.energies.resize(keep);
  out.parity.resize(keep);
  for (int k = 0; k < keep; ++k) {
    Eigen::VectorXd v = levels[k].vec;
    Eigen::Index imax = 0;
    v.cwiseAbs().maxCoeff(&imax);
    if (v(imax) < 0.0) v = -v;
    t.col(k) = v;
    out.energies(k) = levels[k].energy;
    out.parity(k) = levels[k].parity;
  }
  out.transform = t.cast<cplx>();
  out.annihilation = out.transform.adjoint() * fock_annihilation(n) * out.transform;

  const double alpha = std::sqrt(pump / kerr);
  const Matrix top = out.transform.leftCols(2);
  double fid = 1.0;
  for (double sign : {1.0, -1.0}) {
    const StateVector coh = coherent_state(sign * alpha, n);
    fid = std::min(fid, (top.adjoint() * coh).squaredNorm());
  }
  out.cat_span_fidelity = fid;
  if (fid < 1.0 - 1e-6) {
    std::ostringstream os;
    os << "top KPO doublet overlaps the cat span with fidelity " << fid
       << " (alpha=" << alpha << ", cutoff=" << n << ")";
    throw Error(ErrorKind::basis_quality, os.str());
  }
  return out;
}

CatPair cat_states(double alpha, int cutoff) {
  if (!(alpha > 0.0)) throw Error(ErrorKind::invalid_argument, "cat states need alpha > 0");
  const StateVector plus_a = coherent_state(alpha, cutoff);
  const StateVector minus_a = coherent_state(-alpha, cutoff);
  const double overlap = std::exp(-2.0 * alpha * alpha);
  CatPair cats;
  cats.norm_plus = 1.0 / std::sqrt(2.0 * (1.0 + overlap));
  cats.norm_minus = 1.0 / std::sqrt(2.0 * (1.0 - overlap));
  cats.plus = (plus_a + minus_a).normalized();
  cats.minus = (plus_a - minus_a).normalized();
  return cats;
}

SparseOp kron(const SparseOp& a, const SparseOp& b) {
  SparseOp out(a.rows() * b.rows(), a.cols() * b.cols());
  std::vector<Eigen::Triplet<cplx>> trips;
  trips.reserve(static_cast<std::size_t>(a.nonZeros() * b.nonZeros()));
  for (Eigen::Index ra = 0; ra < a.outerSize(); ++ra) {
    for (SparseOp::InnerIterator ia(a, ra); ia; ++ia) {
      for (Eigen::Index rb = 0; rb < b.outerSize(); ++rb) {
        for (SparseOp::InnerIterator ib(b, rb); ib; ++ib) {
          trips.emplace_back(ia.row() * b.rows() + ib.row(), ia.col() * b.cols() + ib.col(),
                             ia.value() * ib.value());
        }
      }
    }
  }
  out.setFromTriplets(trips.begin(), trips.end());
  return out;
}

SparseOp sparse_identity(Eigen::Index n) {
  SparseOp id(n, n);
  id.setIdentity();
  return id;
}

SparseOp to_sparse(const Matrix& m, double drop_below) {
  SparseOp s(m.rows(), m.cols());
  std::vector<Eigen::Triplet<cplx>> trips;
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      if (std::abs(m(r, c)) > drop_below) trips.emplace_back(r, c, m(r, c));
  s.setFromTriplets(trips.begin(), trips.end());
  return s;
}

CompositeBasis CompositeBasis::build(const ModeSpec& kpo_spec, const ModeSpec& coupler_spec,
                                     double kerr, double pump) {
  kpo_spec.validate();
  coupler_spec.validate();
  if (coupler_spec.kind != ModeKind::fock) {
    throw Error(ErrorKind::invalid_argument, "couplers are expanded in Fock states");
  }
  CompositeBasis basis;
  basis.kerr_ = kerr;
  basis.pump_ = pump;
  ModeBasis kpo;
  if (kpo_spec.kind == ModeKind::kpo_eigen) {
    KpoTruncation tr = kpo_eigen_truncation(kerr, pump, kpo_spec);
    kpo.spec = kpo_spec;
    kpo.transform = std::move(tr.transform);
    kpo.annihilation = std::move(tr.annihilation);
    kpo.energies = std::move(tr.energies);
    kpo.parity = std::move(tr.parity);
  } else {
    kpo = fock_mode(kpo_spec);
  }
  basis.modes_[0] = kpo;
  basis.modes_[1] = kpo;
  basis.modes_[2] = fock_mode(coupler_spec);
  basis.modes_[3] = fock_mode(coupler_spec);
  basis.total_dim_ = 1;
  std::uint64_t id = 0;
  for (const auto& m : basis.modes_) {
    basis.total_dim_ *= m.dim();
    id = mix(id, static_cast<std::uint64_t>(m.spec.kind));
    id = mix(id, static_cast<std::uint64_t>(m.spec.fock_cutoff));
    id = mix(id, static_cast<std::uint64_t>(m.spec.keep_dim));
  }
  id = mix(id, std::bit_cast<std::uint64_t>(kerr));
  id = mix(id, std::bit_cast<std::uint64_t>(pump));
  basis.id_ = id;
  return basis;
}

std::array<int, kNumModes> CompositeBasis::dims() const {
  return {modes_[0].dim(), modes_[1].dim(), modes_[2].dim(), modes_[3].dim()};
}

double CompositeBasis::alpha() const { return std::sqrt(pump_ / kerr_); }

SparseOp CompositeBasis::embed(const SparseOp& op, Mode slot) const {
  const int s = static_cast<int>(slot);
  if (op.rows() != modes_[s].dim() || op.cols() != modes_[s].dim()) {
    throw Error(ErrorKind::dimension_mismatch, "operator of size " + std::to_string(op.rows()) +
                                                   " embedded into slot of dimension " +
                                                   std::to_string(modes_[s].dim()));
  }
  Eigen::Index before = 1;
  Eigen::Index after = 1;
  for (int k = 0; k < s; ++k) before *= modes_[k].dim();
  for (int k = s + 1; k < kNumModes; ++k) after *= modes_[k].dim();
  return kron(kron(sparse_identity(before), op), sparse_identity(after));
}

SparseOp CompositeBasis::embed(const Matrix& op, Mode slot) const {
  return embed(to_sparse(op), slot);
}

SparseOp CompositeBasis::annihilation(Mode slot) const {
  return embed(to_sparse(mode(slot).annihilation, 1e-14), slot);
}

StateVector CompositeBasis::to_retained(Mode slot, const StateVector& fock_vector) const {
  const auto& m = mode(slot);
  if (fock_vector.size() != m.spec.fock_cutoff) {
    throw Error(ErrorKind::dimension_mismatch, "Fock vector length does not match mode cutoff");
  }
  return m.transform.adjoint() * fock_vector;
}

StateVector CompositeBasis::product(const std::array<StateVector, kNumModes>& factors) const {
  StateVector out = StateVector::Ones(1);
  for (int k = 0; k < kNumModes; ++k) {
    if (factors[k].size() != modes_[k].dim()) {
      throw Error(ErrorKind::dimension_mismatch, "product factor has wrong dimension");
    }
    StateVector next(out.size() * factors[k].size());
    for (Eigen::Index i = 0; i < out.size(); ++i)
      next.segment(i * factors[k].size(), factors[k].size()) = out(i) * factors[k];
    out = std::move(next);
  }
  return out;
}

StateVector CompositeBasis::vacuum(Mode slot) const {
  const auto& m = mode(slot);
  StateVector fock = StateVector::Zero(m.spec.fock_cutoff);
  fock(0) = 1.0;
  return to_retained(slot, fock);
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> dims,
                            std::span<const int> keep) {
  if (keep.empty()) throw Error(ErrorKind::invalid_argument, "partial trace needs a non-empty subset");
  const int n = static_cast<int>(dims.size());
  Eigen::Index total = 1;
  for (int d : dims) total *= d;
  if (rho.rows() != total || rho.cols() != total) {
    throw Error(ErrorKind::dimension_mismatch, "density matrix does not match subsystem dims");
  }
  std::vector<bool> kept(n, false);
  int prev = -1;
  for (int k : keep) {
    if (k < 0 || k >= n || k <= prev) {
      throw Error(ErrorKind::invalid_argument, "keep list must be ascending subsystem indices");
    }
    kept[k] = true;
    prev = k;
  }
  Eigen::Index kept_dim = 1;
  for (int k : keep) kept_dim *= dims[k];

  std::vector<Eigen::Index> kidx(total), tidx(total);
  for (Eigen::Index i = 0; i < total; ++i) {
    Eigen::Index rem = i;
    Eigen::Index kk = 0, tt = 0, kstride = 1, tstride = 1;
    for (int m = n - 1; m >= 0; --m) {
      const Eigen::Index digit = rem % dims[m];
      rem /= dims[m];
      if (kept[m]) {
        kk += digit * kstride;
        kstride *= dims[m];
      } else {
        tt += digit * tstride;
        tstride *= dims[m];
      }
    }
    kidx[i] = kk;
    tidx[i] = tt;
  }
  DensityMatrix out = DensityMatrix::Zero(kept_dim, kept_dim);
  for (Eigen::Index c = 0; c < total; ++c)
    for (Eigen::Index r = 0; r < total; ++r)
      if (tidx[r] == tidx[c]) out(kidx[r], kidx[c]) += rho(r, c);
  return out;
}

DensityMatrix projector(const StateVector& psi) { return psi * psi.adjoint(); }

DensityCheck check_density(const DensityMatrix& rho) {
  DensityCheck check;
  check.trace_error = std::abs(rho.trace() - cplx(1.0, 0.0));
  const double norm = rho.norm();
  check.hermiticity_error = norm > 0.0 ? (rho - rho.adjoint()).norm() / norm : 0.0;
  const Matrix herm = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(herm, Eigen::EigenvaluesOnly);
  check.min_eigenvalue = es.eigenvalues().minCoeff();
  return check;
}

double relative_hermiticity_error(const SparseOp& op) {
  const SparseOp diff = op - SparseOp(op.adjoint());
  const double norm = op.norm();
  return norm > 0.0 ? diff.norm() / norm : 0.0;
}

}  // namespace kerrzz
