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

#include "kerrzz/model.hpp"

#include <cmath>
#include <sstream>

#include <unsupported/Eigen/KroneckerProduct>

#include "kerrzz/units.hpp"

namespace kerrzz {

namespace {

// Coefficients shared by both circuit models.
struct Terms {
  double kerr = 0.0;
  double pump = 0.0;
  std::array<double, 2> chi{};
  std::array<std::array<double, 2>, 2> g{};
  double g_kpo = 0.0;
  double g_c = 0.0;
  double delta2 = 0.0;
};

Terms terms_of(const SystemParams& p) {
  Terms t;
  t.kerr = p.kerr;
  t.pump = p.pump;
  t.chi = p.chi;
  t.g = p.g;
  t.delta2 = p.delta2;
  return t;
}

Terms terms_of(const SystemParamsII& p) {
  Terms t;
  t.kerr = p.kerr;
  t.pump = p.pump;
  t.chi = p.chi;
  for (int j = 0; j < 2; ++j)
    for (int k = 0; k < 2; ++k) t.g[j][k] = p.g[k];
  t.g_kpo = p.g_kpo;
  t.g_c = p.g_c;
  t.delta2 = p.delta2;
  return t;
}

void require_matching_basis(const Terms& t, const CompositeBasis& basis) {
  const auto close = [](double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(std::abs(a), std::abs(b)); };
  if (!close(t.kerr, basis.kerr()) || !close(t.pump, basis.pump())) {
    std::ostringstream os;
    os << "basis built for K=" << basis.kerr() << ", p=" << basis.pump() << " but Hamiltonian uses K="
       << t.kerr << ", p=" << t.pump;
    throw Error(ErrorKind::basis_mismatch, os.str());
  }
}

Matrix kpo_block(const Terms& t, const ModeBasis& mb) {
  if (mb.spec.kind == ModeKind::kpo_eigen) {
    return mb.energies.cast<cplx>().asDiagonal();
  }
  const Eigen::MatrixXd hf = kpo_hamiltonian_fock(t.kerr, t.pump, mb.spec.fock_cutoff);
  return mb.transform.adjoint() * hf.cast<cplx>() * mb.transform;
}

Matrix coupler_block(double chi, double delta, int cutoff) {
  Matrix h = Matrix::Zero(cutoff, cutoff);
  for (int n = 0; n < cutoff; ++n) h(n, n) = -0.5 * chi * n * (n - 1.0) + delta * n;
  return h;
}

SparseOp hopping(const SparseOp& x, const SparseOp& y) {
  // x y^dag + x^dag y
  const SparseOp xdag = x.adjoint();
  const SparseOp ydag = y.adjoint();
  return SparseOp(x * ydag) + SparseOp(xdag * y);
}

SparseOp build(const Terms& t, double delta1, const CompositeBasis& basis) {
  require_matching_basis(t, basis);
  const Mode kpos[2] = {Mode::kpo1, Mode::kpo2};
  const Mode couplers[2] = {Mode::c1, Mode::c2};
  const double deltas[2] = {delta1, t.delta2};

  SparseOp h(basis.total_dim(), basis.total_dim());
  for (Mode m : kpos) h += basis.embed(kpo_block(t, basis.mode(m)), m);
  for (int k = 0; k < 2; ++k) {
    const Mode m = couplers[k];
    h += basis.embed(coupler_block(t.chi[k], deltas[k], basis.mode(m).dim()), m);
  }
  std::array<SparseOp, 2> a{basis.annihilation(Mode::kpo1), basis.annihilation(Mode::kpo2)};
  std::array<SparseOp, 2> c{basis.annihilation(Mode::c1), basis.annihilation(Mode::c2)};
  for (int j = 0; j < 2; ++j)
    for (int k = 0; k < 2; ++k)
      if (t.g[j][k] != 0.0) h += t.g[j][k] * hopping(a[j], c[k]);
  if (t.g_kpo != 0.0) h += t.g_kpo * hopping(a[0], a[1]);
  if (t.g_c != 0.0) h += t.g_c * hopping(c[0], c[1]);
  h.prune(cplx(0.0, 0.0), 1e-300);
  return h;
}

TimeDependentHamiltonian build_td(const Terms& t, std::function<double(double)> delta1,
                                  const CompositeBasis& basis) {
  TimeDependentHamiltonian out;
  out.constant = build(t, 0.0, basis);
  Matrix n1 = Matrix::Zero(basis.mode(Mode::c1).dim(), basis.mode(Mode::c1).dim());
  for (Eigen::Index n = 0; n < n1.rows(); ++n) n1(n, n) = static_cast<double>(n);
  out.terms.push_back({basis.embed(to_sparse(n1), Mode::c1), std::move(delta1)});
  return out;
}

double displacement(double g, double alpha, double delta) {
  if (delta == 0.0) throw Error(ErrorKind::singular_detuning, "coupler detuning is zero");
  return 2.0 * g * alpha / delta;
}

}  // namespace

double SystemParams::alpha() const { return std::sqrt(pump / kerr); }

void SystemParams::validate() const {
  if (!(kerr > 0.0)) throw Error(ErrorKind::invalid_argument, "K must be positive");
  if (!(pump > 0.0)) throw Error(ErrorKind::invalid_argument, "p must be positive");
  if (kappa < 0.0) throw Error(ErrorKind::invalid_argument, "kappa must be non-negative");
  if (!(alpha_c_min > 0.0 && alpha_c_min < 1.0)) {
    throw Error(ErrorKind::invalid_argument, "alpha_c_min must lie in (0, 1)");
  }
}

SystemParams SystemParams::table1() {
  SystemParams p;
  p.kerr = units::mhz(20.0);
  p.pump = units::mhz(80.0);
  p.chi = {units::mhz(10.0), units::mhz(10.0)};
  const double g = units::mhz(10.0);
  p.g = {{{g, g}, {g, g}}};
  p.kappa = 0.0;
  p.alpha_c_min = 0.04;
  p.delta2 = -2.0 * g * p.alpha() / p.alpha_c_min;
  return p;
}

double SystemParamsII::alpha() const { return std::sqrt(pump / kerr); }

void SystemParamsII::validate() const {
  if (!(kerr > 0.0)) throw Error(ErrorKind::invalid_argument, "K~ must be positive");
  if (!(pump > 0.0)) throw Error(ErrorKind::invalid_argument, "p~ must be positive");
  if (kappa < 0.0) throw Error(ErrorKind::invalid_argument, "kappa must be non-negative");
}

SystemParams SystemParamsII::as_main() const {
  SystemParams p;
  p.kerr = kerr;
  p.pump = pump;
  p.chi = chi;
  p.g = {{{g[0], g[1]}, {g[0], g[1]}}};
  p.kappa = kappa;
  p.delta2 = delta2;
  return p;
}

SparseOp TimeDependentHamiltonian::at(double t) const {
  SparseOp h = constant;
  for (const auto& term : terms) h += term.coeff(t) * term.op;
  return h;
}

SparseOp build_h_main(const SystemParams& params, double delta1, const CompositeBasis& basis) {
  return build(terms_of(params), delta1, basis);
}

SparseOp build_h_circuit2(const SystemParamsII& params, double delta1_tilde,
                          const CompositeBasis& basis) {
  return build(terms_of(params), delta1_tilde, basis);
}

TimeDependentHamiltonian build_h_main_td(const SystemParams& params,
                                         std::function<double(double)> delta1,
                                         const CompositeBasis& basis) {
  return build_td(terms_of(params), std::move(delta1), basis);
}

TimeDependentHamiltonian build_h_circuit2_td(const SystemParamsII& params,
                                             std::function<double(double)> delta1_tilde,
                                             const CompositeBasis& basis) {
  return build_td(terms_of(params), std::move(delta1_tilde), basis);
}

std::vector<SparseOp> loss_operators(const CompositeBasis& basis) {
  return {basis.annihilation(Mode::kpo1), basis.annihilation(Mode::kpo2),
          basis.annihilation(Mode::c1), basis.annihilation(Mode::c2)};
}

double coupler_displacement(const SystemParams& params, double delta_k) {
  return displacement(params.g[0][0], params.alpha(), delta_k);
}

Matrix conditioned_coupler_hamiltonian(const SystemParams& params, double delta1, int i, int j,
                                       int coupler_cutoff) {
  if (i < 0 || i > 1 || j < 0 || j > 1) {
    throw Error(ErrorKind::invalid_argument, "qubit labels must be 0 or 1");
  }
  const double alpha = params.alpha();
  const double deltas[2] = {delta1, params.delta2};
  const int n = coupler_cutoff;
  const Matrix a = fock_annihilation(n);
  const Matrix id = Matrix::Identity(n, n);
  const double sign = (i % 2 == 0) ? 1.0 : -1.0;  // (-1)^i

  Matrix h = Matrix::Zero(n * n, n * n);
  for (int k = 0; k < 2; ++k) {
    const double ak = displacement(params.g[0][k], alpha, deltas[k]);
    Matrix single = Matrix::Zero(n, n);
    const Matrix adag = a.adjoint();
    single += -0.5 * params.chi[k] * adag * adag * a * a;
    if (i == j) {
      const double s = sign * ak;
      single += deltas[k] * (adag * a + s * (a + adag) + s * s * id);
      single -= 2.0 * params.g[0][k] * alpha * ak * id;
    } else {
      single += deltas[k] * adag * a;
    }
    h += (k == 0) ? Matrix(Eigen::kroneckerProduct(single, id))
                  : Matrix(Eigen::kroneckerProduct(id, single));
  }
  h += params.kerr * std::pow(alpha, 4) * Matrix::Identity(n * n, n * n);
  return h;
}

double conditioned_energy_same(const SystemParams& params, double delta1) {
  const double alpha = params.alpha();
  const double a1 = displacement(params.g[0][0], alpha, delta1);
  const double a2 = displacement(params.g[0][1], alpha, params.delta2);
  return -2.0 * params.g[0][0] * alpha * (a1 + a2) + params.kerr * std::pow(alpha, 4);
}

double conditioned_energy_different(const SystemParams& params) {
  return params.kerr * std::pow(params.alpha(), 4);
}

SmallChiReport check_small_chi(const SystemParams& params, double delta1, double threshold) {
  SmallChiReport report;
  report.threshold = threshold;
  const double alpha = params.alpha();
  const double deltas[2] = {delta1, params.delta2};
  report.pass = true;
  for (int k = 0; k < 2; ++k) {
    const double ak = displacement(params.g[0][k], alpha, deltas[k]);
    report.ratio[k] = params.chi[k] * std::pow(std::abs(ak), 3) / (params.g[0][k] * alpha);
    report.pass = report.pass && report.ratio[k] < threshold;
  }
  return report;
}

double conditioned_energy_same_model2(const SystemParamsII& p, double delta1) {
  const double a2 = p.pump / p.kerr;
  const double denom = delta1 * p.delta2 - p.g_c * p.g_c;
  if (denom == 0.0) throw Error(ErrorKind::singular_detuning, "Delta1 Delta2 = g_c^2");
  return 2.0 * p.g_kpo * a2 + p.kerr * a2 * a2 -
         4.0 * a2 * (p.g[0] * p.g[0] * p.delta2 + p.g[1] * p.g[1] * delta1 - 2.0 * p.g[0] * p.g[1] * p.g_c) /
             denom;
}

double conditioned_energy_different_model2(const SystemParamsII& p) {
  const double a2 = p.pump / p.kerr;
  return -2.0 * p.g_kpo * a2 + p.kerr * a2 * a2;
}

double detuning_condition_model2(const SystemParamsII& p) {
  const double denom = p.g_kpo * p.delta2 - p.g[1] * p.g[1];
  if (denom == 0.0) {
    throw Error(ErrorKind::singular_condition, "g_KPO Delta~_2 equals g_2^2; no suppressing Delta~_1 exists");
  }
  return (p.g[0] * p.g[0] * p.delta2 + p.g_kpo * p.g_c * p.g_c - 2.0 * p.g[0] * p.g[1] * p.g_c) / denom;
}

Matrix conditioned_drive_on_kpos(const SystemParams& params, double delta1, Parity parity,
                                 int label, const CompositeBasis& basis) {
  const int d1 = basis.mode(Mode::kpo1).dim();
  const int d2 = basis.mode(Mode::kpo2).dim();
  if (parity == Parity::different) return Matrix::Zero(d1 * d2, d1 * d2);
  const double alpha = params.alpha();
  const double a1 = displacement(params.g[0][0], alpha, delta1);
  const double a2 = displacement(params.g[0][1], alpha, params.delta2);
  const double sign = (label % 2 == 0) ? -1.0 : 1.0;  // (-1)^{i+1}
  const double coeff = sign * params.g[0][0] * (a1 + a2);
  const Matrix& x1 = basis.mode(Mode::kpo1).annihilation;
  const Matrix& x2 = basis.mode(Mode::kpo2).annihilation;
  const Matrix q1 = x1 + x1.adjoint();
  const Matrix q2 = x2 + x2.adjoint();
  return coeff * (Matrix(Eigen::kroneckerProduct(q1, Matrix::Identity(d2, d2))) +
                  Matrix(Eigen::kroneckerProduct(Matrix::Identity(d1, d1), q2)));
}

double drive_to_gap_ratio(const SystemParams& params, double delta1, const CompositeBasis& basis) {
  const auto& kpo = basis.mode(Mode::kpo1);
  if (kpo.spec.kind != ModeKind::kpo_eigen || kpo.dim() < 3) {
    throw Error(ErrorKind::invalid_argument, "gap needs a kpo-eigen basis with at least three levels");
  }
  const double alpha = params.alpha();
  const double a1 = displacement(params.g[0][0], alpha, delta1);
  const double a2 = displacement(params.g[0][1], alpha, params.delta2);
  const double gap = kpo.energies(0) - kpo.energies(2);
  return std::abs(params.g[0][0] * (a1 + a2)) / gap;
}

}  // namespace kerrzz
