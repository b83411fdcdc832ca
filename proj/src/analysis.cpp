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

#include "kerrzz/analysis.hpp"

#include <cmath>
#include <sstream>

#include "kerrzz/error.hpp"

namespace kerrzz {

namespace {

constexpr double kMaxTruncationLoss = 1e-8;

void require_dim(Eigen::Index got, Eigen::Index want, const char* what) {
  if (got != want) {
    std::ostringstream os;
    os << what << ": dimension " << got << " does not match basis dimension " << want;
    throw Error(ErrorKind::basis_mismatch, os.str());
  }
}

// Logical density matrix sum_{ii'jj'} w(i,i',j,j') |ij><i'j'| in the composite basis.
template <class Weight>
DensityMatrix logical_density(const LogicalFrame& frame, const Weight& weight) {
  DensityMatrix rho = DensityMatrix::Zero(frame.dim(), frame.dim());
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int ip = 0; ip < 2; ++ip)
        for (int jp = 0; jp < 2; ++jp) {
          const cplx w = weight(i, ip, j, jp);
          if (w == cplx(0.0, 0.0)) continue;
          rho.noalias() += w * frame.ket(i, j) * frame.ket(ip, jp).adjoint();
        }
  return rho;
}

}  // namespace

double BlochVector::norm() const { return std::sqrt(x * x + y * y + z * z); }

LogicalFrame::LogicalFrame(const CompositeBasis& basis)
    : alpha_(basis.alpha()), basis_id_(basis.id()), dim_(basis.total_dim()) {
  const int cutoff = basis.mode(Mode::kpo1).spec.fock_cutoff;
  for (int i = 0; i < 2; ++i) {
    const StateVector fock = coherent_state(cplx(i == 0 ? alpha_ : -alpha_, 0.0), cutoff);
    kpo_kets_[i] = basis.to_retained(Mode::kpo1, fock);
    truncation_loss_ = std::max(truncation_loss_, 1.0 - kpo_kets_[i].squaredNorm());
  }
  const StateVector vac1 = basis.vacuum(Mode::c1);
  const StateVector vac2 = basis.vacuum(Mode::c2);
  Eigen::Matrix<cplx, Eigen::Dynamic, 4> frame(dim_, 4);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      kets_[2 * i + j] = basis.product({kpo_kets_[i], kpo_kets_[j], vac1, vac2});
      frame.col(2 * i + j) = kets_[2 * i + j];
    }
  const Eigen::Matrix4cd gram = frame.adjoint() * frame;
  gram_inverse_ = gram.inverse();

  const CatPair cats = cat_states(alpha_, cutoff);
  StateVector plus = basis.to_retained(Mode::kpo1, cats.plus);
  truncation_loss_ = std::max(truncation_loss_, 1.0 - plus.squaredNorm());
  plus.normalize();
  initial_ = basis.product({plus, plus, vac1, vac2});
}

std::array<cplx, 4> LogicalFrame::coefficients(const StateVector& psi) const {
  require_dim(psi.size(), dim_, "logical decomposition");
  Eigen::Vector4cd overlaps;
  for (int k = 0; k < 4; ++k) overlaps(k) = kets_[k].dot(psi);
  const Eigen::Vector4cd beta = gram_inverse_ * overlaps;
  return {beta(0), beta(1), beta(2), beta(3)};
}

StateVector LogicalFrame::compose(const std::array<cplx, 4>& beta) const {
  StateVector psi = StateVector::Zero(dim_);
  for (int k = 0; k < 4; ++k) psi += beta[k] * kets_[k];
  return psi;
}

StateVector initial_ket(const CompositeBasis& basis) {
  LogicalFrame frame(basis);
  if (frame.truncation_loss() > kMaxTruncationLoss) {
    std::ostringstream os;
    os << "cat states lose " << frame.truncation_loss() << " of their norm in the truncated basis";
    throw Error(ErrorKind::truncation, os.str());
  }
  return frame.initial();
}

DensityMatrix initial_state(const CompositeBasis& basis) { return projector(initial_ket(basis)); }

double state_infidelity(const DensityMatrix& rho, const StateVector& psi) {
  require_dim(rho.rows(), psi.size(), "state_infidelity");
  return 1.0 - psi.dot(rho * psi).real();
}

double state_infidelity(const StateVector& phi, const StateVector& psi) {
  require_dim(phi.size(), psi.size(), "state_infidelity");
  return 1.0 - std::norm(psi.dot(phi));
}

StateVector ideal_rzz_state(const StateVector& initial, const GateSpec& gate,
                            const LogicalFrame& frame) {
  std::array<cplx, 4> beta = frame.coefficients(initial);
  const cplx same = std::exp(cplx(0.0, -gate.theta));
  beta[0] *= same;  // 00
  beta[3] *= same;  // 11
  StateVector psi = frame.compose(beta);
  const double n = psi.norm();
  if (!(n > 0.0)) throw Error(ErrorKind::invalid_argument, "initial state has no logical component");
  return psi / n;
}

double gate_infidelity(const DensityMatrix& rho_final, const GateSpec& gate,
                       const StateVector& initial, const LogicalFrame& frame) {
  return state_infidelity(rho_final, ideal_rzz_state(initial, gate, frame));
}

double gate_infidelity(const StateVector& psi_final, const GateSpec& gate,
                       const StateVector& initial, const LogicalFrame& frame) {
  return state_infidelity(psi_final, ideal_rzz_state(initial, gate, frame));
}

double dephasing_rate(double kappa, double alpha) { return 2.0 * kappa * alpha * alpha; }

double analytic_off_infidelity(double t, double alpha, double gamma) {
  const double e2 = std::exp(-2.0 * alpha * alpha);
  const double x = std::exp(-gamma * t);
  const double num = (1.0 + e2) * (1.0 + x);
  const double den = 2.0 * (1.0 + e2 * x);
  return 1.0 - (num * num) / (den * den);
}

double analytic_gate_dephasing_infidelity(double t_f, double theta, double alpha, double gamma) {
  const double e2 = std::exp(-2.0 * alpha * alpha);
  const double e4 = e2 * e2;
  const double x = std::exp(-gamma * t_f);
  const double c = std::cos(theta);
  const double c2 = std::cos(2.0 * theta);
  const double num = (1.0 + x) * (1.0 + x) * (1.0 + e4) * (1.0 + 4.0 * c * e2 + e4) +
                     4.0 * e4 * (1.0 + 2.0 * c2 * x + x * x);
  const double den = (1.0 + 2.0 * c * e2 + e4) * (1.0 + 2.0 * c * e2 * x + e4 * x * x);
  return 1.0 - num / (4.0 * den);
}

double cat_norm_ratio(double alpha) {
  const double e2 = std::exp(-2.0 * alpha * alpha);
  return std::sqrt((1.0 - e2) / (1.0 + e2));
}

Matrix two_level_annihilation(double alpha) {
  const double r = cat_norm_ratio(alpha);
  Matrix a = Matrix::Zero(2, 2);
  a(0, 1) = alpha / r;  // C- -> C+
  a(1, 0) = alpha * r;  // C+ -> C-
  return a;
}

BlochVector bloch_dephasing_solution(const BlochVector& b0, double t, double kappa, double alpha) {
  const double r = cat_norm_ratio(alpha);
  const double s = 1.0 / (r * r) + r * r;
  const double k = kappa * alpha * alpha;
  const double fixed = (1.0 / (r * r) - r * r) / s;
  BlochVector b;
  b.x = std::exp(-k * (0.5 * s - 1.0) * t) * b0.x;
  b.y = std::exp(-k * (0.5 * s + 1.0) * t) * b0.y;
  b.z = std::exp(-k * s * t) * (b0.z - fixed) + fixed;
  return b;
}

BlochVector bloch_rhs(const BlochVector& b, double kappa, double alpha) {
  const double r = cat_norm_ratio(alpha);
  const double s = 1.0 / (r * r) + r * r;
  const double k = kappa * alpha * alpha;
  BlochVector d;
  d.x = -k * (0.5 * s - 1.0) * b.x;
  d.y = -k * (0.5 * s + 1.0) * b.y;
  d.z = -k * s * b.z + k * (1.0 / (r * r) - r * r);
  return d;
}

BlochVector bloch_from_density(const Matrix& rho2) {
  if (rho2.rows() != 2 || rho2.cols() != 2) {
    throw Error(ErrorKind::invalid_dimension, "Bloch vector needs a 2x2 density matrix");
  }
  BlochVector b;
  b.x = 2.0 * rho2(0, 1).real();
  b.y = -2.0 * rho2(0, 1).imag();
  b.z = (rho2(0, 0) - rho2(1, 1)).real();
  return b;
}

Matrix density_from_bloch(const BlochVector& b) {
  Matrix rho(2, 2);
  rho(0, 0) = 0.5 * (1.0 + b.z);
  rho(1, 1) = 0.5 * (1.0 - b.z);
  rho(0, 1) = cplx(0.5 * b.x, -0.5 * b.y);
  rho(1, 0) = std::conj(rho(0, 1));
  return rho;
}

DensityMatrix dephased_product_state(double t, double gamma, const LogicalFrame& frame) {
  const double a = frame.alpha();
  const double x = std::exp(-gamma * t);
  const double norm = 2.0 * (1.0 + std::exp(-2.0 * a * a) * x);
  const auto single = [&](int i, int ip) { return (i == ip ? 1.0 : x) / norm; };
  return logical_density(frame, [&](int i, int ip, int j, int jp) {
    return cplx(single(i, ip) * single(j, jp), 0.0);
  });
}

DensityMatrix dephased_gate_state(double t_f, double theta, double gamma, const LogicalFrame& frame) {
  const double a = frame.alpha();
  const double x = std::exp(-gamma * t_f);
  const double e2 = std::exp(-2.0 * a * a);
  const double norm = 4.0 * (1.0 + 2.0 * std::cos(theta) * e2 * x + e2 * e2 * x * x);
  return logical_density(frame, [&](int i, int ip, int j, int jp) {
    const double phase = theta * ((ip == jp ? 1.0 : 0.0) - (i == j ? 1.0 : 0.0));
    const double decay = gamma * t_f * (2.0 - (i == ip ? 1.0 : 0.0) - (j == jp ? 1.0 : 0.0));
    return std::exp(cplx(-decay, phase)) / norm;
  });
}

StateVector closed_form_ideal_state(double theta, const LogicalFrame& frame) {
  const double a = frame.alpha();
  const double e2 = std::exp(-2.0 * a * a);
  const double norm = 2.0 * std::sqrt(1.0 + 2.0 * std::cos(theta) * e2 + e2 * e2);
  const cplx same = std::exp(cplx(0.0, -theta)) / norm;
  const cplx diff = 1.0 / norm;
  return frame.compose({same, diff, diff, same});
}

}  // namespace kerrzz
