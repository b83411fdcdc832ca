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

#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "kerrzz/analysis.hpp"
#include "kerrzz/model.hpp"
#include "kerrzz/units.hpp"
#include "oracles.hpp"

using namespace kerrzz;

namespace {

// Dense Fock-space Hamiltonian written straight from the model definition.
oracle::Mat dense_h(const SystemParams& p, double delta1, int nk, int nc, double g_kpo = 0.0,
                    double g_c = 0.0) {
  const std::vector<int> dims{nk, nk, nc, nc};
  std::vector<oracle::Mat> a(4);
  for (int m = 0; m < 4; ++m) a[m] = oracle::on_mode(oracle::destroy(dims[m]), m, dims);
  const double deltas[2] = {delta1, p.delta2};
  const Eigen::Index n = a[0].rows();
  oracle::Mat h = oracle::Mat::Zero(n, n);
  for (int j = 0; j < 2; ++j) {
    const oracle::Mat ad = a[j].adjoint();
    h += -0.5 * p.kerr * ad * ad * a[j] * a[j] + 0.5 * p.pump * (ad * ad + a[j] * a[j]);
  }
  for (int k = 0; k < 2; ++k) {
    const oracle::Mat cd = a[2 + k].adjoint();
    h += -0.5 * p.chi[k] * cd * cd * a[2 + k] * a[2 + k] + deltas[k] * cd * a[2 + k];
  }
  for (int j = 0; j < 2; ++j)
    for (int k = 0; k < 2; ++k)
      h += p.g[j][k] * (a[j] * a[2 + k].adjoint() + a[j].adjoint() * a[2 + k]);
  h += g_kpo * (a[0] * a[1].adjoint() + a[0].adjoint() * a[1]);
  h += g_c * (a[2] * a[3].adjoint() + a[2].adjoint() * a[3]);
  return h;
}

// ZZ coefficient of the effective Hamiltonian on the dressed logical manifold.
// The four eigenstates with the largest weight on the (Lowdin-orthonormalized)
// logical kets are projected onto them, P = L^dag Phi, and the projections are
// orthonormalized, Q = P (P^dag P)^{-1/2}; then M = Q E Q^dag and ZZ = tr(M Z(x)Z) / 4.
double dressed_zz(const SystemParams& p, double delta1, const CompositeBasis& b) {
  const auto inv_sqrt = [](const Matrix& s) {
    const Eigen::SelfAdjointEigenSolver<Matrix> es(s);
    return Matrix(es.eigenvectors() * es.eigenvalues().cwiseInverse().cwiseSqrt().asDiagonal() *
                  es.eigenvectors().adjoint());
  };
  const LogicalFrame f(b);
  Matrix l(b.total_dim(), 4);
  for (int k = 0; k < 4; ++k) l.col(k) = f.ket(k / 2, k % 2);
  l = l * inv_sqrt(l.adjoint() * l);

  const Eigen::SelfAdjointEigenSolver<Matrix> es(Matrix(build_h_main(p, delta1, b)));
  const Eigen::VectorXd weight = (l.adjoint() * es.eigenvectors()).cwiseAbs2().colwise().sum();
  std::vector<int> idx(weight.size());
  for (int i = 0; i < static_cast<int>(idx.size()); ++i) idx[i] = i;
  std::partial_sort(idx.begin(), idx.begin() + 4, idx.end(), [&](int a, int c) { return weight(a) > weight(c); });
  Matrix proj(4, 4);
  Eigen::VectorXd e(4);
  for (int k = 0; k < 4; ++k) {
    proj.col(k) = l.adjoint() * es.eigenvectors().col(idx[k]);
    e(k) = es.eigenvalues()(idx[k]);
  }
  const Matrix q = proj * inv_sqrt(proj.adjoint() * proj);
  const Matrix m = q * e.cast<cplx>().asDiagonal() * q.adjoint();
  return 0.25 * (m(0, 0) - m(1, 1) - m(2, 2) + m(3, 3)).real();
}

}  // namespace

TEST_CASE("table I parameters") {
  const SystemParams p = SystemParams::table1();
  CHECK(units::to_mhz(p.kerr) == doctest::Approx(20.0));
  CHECK(units::to_mhz(p.pump) == doctest::Approx(80.0));
  CHECK(units::to_mhz(p.chi[0]) == doctest::Approx(10.0));
  CHECK(units::to_mhz(p.g[1][0]) == doctest::Approx(10.0));
  CHECK(p.alpha() == doctest::Approx(2.0));
  // Delta_2 = -2 g alpha / alpha_min = -2pi x 1 GHz
  CHECK(units::to_ghz(p.delta2) == doctest::Approx(-1.0));
  CHECK(coupler_displacement(p, -p.delta2) == doctest::Approx(0.04));
}

TEST_CASE("model I Hamiltonian matches the dense oracle in a Fock basis") {
  SystemParams p = SystemParams::table1();
  p.chi = {units::mhz(7.0), units::mhz(12.0)};
  p.g = {{{units::mhz(10.0), units::mhz(9.0)}, {units::mhz(11.0), units::mhz(8.0)}}};
  const CompositeBasis b = CompositeBasis::build(ModeSpec::fock(5), ModeSpec::fock(3), p.kerr, p.pump);
  const double delta1 = units::ghz(0.7);
  const Matrix h = Matrix(build_h_main(p, delta1, b));
  const oracle::Mat ref = dense_h(p, delta1, 5, 3);
  CHECK((h - ref).norm() / ref.norm() < 1e-14);
  CHECK(relative_hermiticity_error(build_h_main(p, delta1, b)) < 1e-15);
}

TEST_CASE("model II Hamiltonian adds the direct exchange terms") {
  SystemParamsII q;
  q.kerr = units::mhz(17.5);
  q.pump = units::mhz(69.3);
  q.chi = {units::mhz(17.5), units::mhz(17.5)};
  q.g = {units::mhz(8.39), units::mhz(7.60)};
  q.g_kpo = units::khz(29.2);
  q.g_c = units::khz(28.6);
  q.delta2 = units::ghz(-1.43);
  const CompositeBasis b = CompositeBasis::build(ModeSpec::fock(4), ModeSpec::fock(3), q.kerr, q.pump);
  const double d1 = units::ghz(1.01);
  const oracle::Mat ref = dense_h(q.as_main(), d1, 4, 3, q.g_kpo, q.g_c);
  CHECK((Matrix(build_h_circuit2(q, d1, b)) - ref).norm() / ref.norm() < 1e-14);

  // g_kpo = g_c = 0 reduces to model I.
  q.g_kpo = q.g_c = 0.0;
  CHECK(Matrix(build_h_circuit2(q, d1, b) - build_h_main(q.as_main(), d1, b)).norm() == 0.0);
}

TEST_CASE("kpo eigenbasis Hamiltonian is the projected Fock Hamiltonian") {
  const SystemParams p = SystemParams::table1();
  const CompositeBasis fock = CompositeBasis::build(ModeSpec::fock(24), ModeSpec::fock(2), p.kerr, p.pump);
  const CompositeBasis eig = CompositeBasis::build(ModeSpec::kpo_eigen(24, 4), ModeSpec::fock(2), p.kerr, p.pump);
  const Matrix t = eig.mode(Mode::kpo1).transform;
  const Matrix id2 = Matrix::Identity(2, 2);
  const Matrix iso = oracle::kron(oracle::kron(oracle::kron(t, t), id2), id2);
  const double d1 = -p.delta2;
  const Matrix projected = iso.adjoint() * Matrix(build_h_main(p, d1, fock)) * iso;
  const Matrix direct = Matrix(build_h_main(p, d1, eig));
  CHECK((projected - direct).norm() / direct.norm() < 1e-10);
}

TEST_CASE("Hamiltonian is linear in Delta_1") {
  const SystemParams p = SystemParams::table1();
  const CompositeBasis b = CompositeBasis::build(ModeSpec::kpo_eigen(20, 4), ModeSpec::fock(3), p.kerr, p.pump);
  const double da = units::ghz(0.37), db = units::ghz(0.81);
  const SparseOp lhs = build_h_main(p, da, b) + build_h_main(p, db, b) - build_h_main(p, 0.0, b);
  CHECK(Matrix(lhs - build_h_main(p, da + db, b)).norm() / Matrix(lhs).norm() < 1e-15);
}

TEST_CASE("residual ZZ at the degenerate point is 100x below the switched-on scale") {
  const SystemParams p = SystemParams::table1();
  const CompositeBasis b = CompositeBasis::build(ModeSpec::kpo_eigen(24, 4), ModeSpec::fock(4), p.kerr, p.pump);
  const double alpha = p.alpha(), g = p.g[0][0];
  const double on_delta1 = 2 * g * alpha / 0.524;
  const double zz_on = dressed_zz(p, on_delta1, b);
  const double zz_off = dressed_zz(p, -p.delta2, b);
  // Second-order estimate (same - different) / 2 = -g alpha (alpha_1 + alpha_2).
  const double estimate = -g * alpha * (0.524 - 0.04);
  CHECK(zz_on == doctest::Approx(estimate).epsilon(0.1));
  CHECK(std::abs(zz_off) < 0.01 * std::abs(zz_on));
}

TEST_CASE("time-dependent builder reproduces the static Hamiltonian") {
  const SystemParams p = SystemParams::table1();
  const CompositeBasis b = CompositeBasis::build(ModeSpec::kpo_eigen(20, 4), ModeSpec::fock(3), p.kerr, p.pump);
  const auto delta1 = [](double t) { return units::ghz(1.0) + 1e17 * t; };
  const TimeDependentHamiltonian td = build_h_main_td(p, delta1, b);
  for (double t : {0.0, 1e-9, 7.3e-9}) {
    const Matrix diff = Matrix(td.at(t) - build_h_main(p, delta1(t), b));
    CHECK(diff.norm() / units::ghz(1.0) < 1e-14);
  }
  CHECK_THROWS_AS(build_h_main(p, 1.0, CompositeBasis::build(ModeSpec::fock(3), ModeSpec::fock(2), p.kerr, 2.0 * p.pump)),
                  Error);
}

TEST_CASE("degeneracy condition of model I") {
  const SystemParams p = SystemParams::table1();
  // Delta_1 = -Delta_2 makes same- and different-label energies equal.
  CHECK(conditioned_energy_same(p, -p.delta2) == doctest::Approx(conditioned_energy_different(p)).epsilon(1e-14));
  CHECK(conditioned_energy_same(p, units::ghz(0.5)) != doctest::Approx(conditioned_energy_different(p)));

  // Oracle: spectrum of the conditioned coupler Hamiltonian (chi = 0) contains the closed form.
  SystemParams q = p;
  q.chi = {0.0, 0.0};
  for (double d1 : {-p.delta2, units::ghz(0.6)}) {
    for (int i = 0; i < 2; ++i) {
      const Matrix h = conditioned_coupler_hamiltonian(q, d1, i, i, 8);
      const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Matrix>(h).eigenvalues();
      const double target = conditioned_energy_same(q, d1);
      CHECK((ev.array() - target).abs().minCoeff() / std::abs(target) < 1e-9);
    }
    const Matrix hd = conditioned_coupler_hamiltonian(q, d1, 0, 1, 8);
    const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Matrix>(hd).eigenvalues();
    CHECK((ev.array() - conditioned_energy_different(q)).abs().minCoeff() < 1e-6);
  }
  CHECK_THROWS_AS(conditioned_coupler_hamiltonian(p, 1.0, 2, 0, 4), Error);
}

TEST_CASE("small-chi report") {
  const SystemParams p = SystemParams::table1();
  const SmallChiReport r = check_small_chi(p, -p.delta2);
  // chi |alpha_k|^3 / (g alpha) = 0.04^3 / 2
  CHECK(r.ratio[0] == doctest::Approx(0.5 * std::pow(0.04, 3)));
  CHECK(r.pass);
  CHECK_FALSE(check_small_chi(p, units::mhz(20.0)).pass);
}

TEST_CASE("model II detuning condition makes the energies degenerate") {
  SystemParamsII q;
  q.kerr = units::mhz(17.5);
  q.pump = units::mhz(69.3);
  q.g = {units::mhz(8.39), units::mhz(7.60)};
  q.g_kpo = units::khz(29.2);
  q.g_c = units::khz(28.6);
  q.delta2 = units::ghz(-1.43);
  const double d1 = detuning_condition_model2(q);
  CHECK(conditioned_energy_same_model2(q, d1) ==
        doctest::Approx(conditioned_energy_different_model2(q)).epsilon(1e-12));
  q.g_kpo = q.g[1] * q.g[1] / q.delta2;
  CHECK_THROWS_AS(detuning_condition_model2(q), Error);
}

TEST_CASE("conditioned drive vanishes at the suppression point") {
  const SystemParams p = SystemParams::table1();
  const CompositeBasis b = CompositeBasis::build(ModeSpec::kpo_eigen(20, 4), ModeSpec::fock(2), p.kerr, p.pump);
  CHECK(conditioned_drive_on_kpos(p, -p.delta2, Parity::same, 0, b).norm() < 1e-6);
  CHECK(conditioned_drive_on_kpos(p, units::ghz(0.3), Parity::different, 0, b).norm() == 0.0);
  CHECK(drive_to_gap_ratio(p, units::ghz(0.3), b) > 0.0);
}

TEST_CASE("validation rejects unphysical parameters") {
  SystemParams p = SystemParams::table1();
  p.kerr = -1.0;
  CHECK_THROWS_AS(p.validate(), Error);
  p = SystemParams::table1();
  p.kappa = -1.0;
  CHECK_THROWS_AS(p.validate(), Error);
}
