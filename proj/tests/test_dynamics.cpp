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

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>

#include "doctest.h"
#include "kerrzz/analysis.hpp"
#include "kerrzz/dynamics.hpp"
#include "kerrzz/units.hpp"
#include "oracles.hpp"

using namespace kerrzz;

namespace {

// Driven, detuned, damped qutrit with a time-dependent drive.
struct Toy {
  int n = 3;
  Matrix a = oracle::destroy(3);
  double omega = 2.0e8, drive = 5.0e7, rate = 3.0e6, freq = 1.3e8;
  Matrix h0() const { return omega * a.adjoint() * a - 0.3 * omega * a.adjoint() * a.adjoint() * a * a; }
  Matrix x() const { return a + a.adjoint(); }
  double coeff(double t) const { return drive * std::cos(freq * t); }

  LindbladProblem problem(double t_end, const Matrix& rho0) const {
    LindbladProblem p;
    p.hamiltonian.constant = to_sparse(h0());
    const double d = drive, f = freq;
    p.hamiltonian.terms.push_back({to_sparse(x()), [d, f](double t) { return d * std::cos(f * t); }});
    p.collapse_ops.push_back({to_sparse(a), rate});
    p.collapse_ops.push_back({to_sparse(Matrix(a.adjoint() * a)), 0.5 * rate});
    p.rho0 = rho0;
    p.t_end = t_end;
    p.sample_times = {0.5 * t_end, t_end};
    return p;
  }
  oracle::Mat liouvillian(double t) const {
    const double s = std::sqrt(rate), s2 = std::sqrt(0.5 * rate);
    return oracle::liouvillian(h0() + coeff(t) * x(), {s * a, s2 * Matrix(a.adjoint() * a)});
  }
};

}  // namespace

TEST_CASE("lindblad rhs matches the vectorized Liouvillian") {
  const Toy toy;
  std::mt19937_64 rng(17);
  const DensityMatrix rho = oracle::random_density(3, rng);
  const LindbladProblem p = toy.problem(1e-8, rho);
  const LindbladGenerator gen(p);
  for (double t : {0.0, 3.1e-9}) {
    const oracle::Vec ref = toy.liouvillian(t) * oracle::vec(rho);
    const DensityMatrix out = lindblad_rhs(rho, t, p);
    CHECK((oracle::vec(out) - ref).norm() / ref.norm() < 1e-13);
    DensityMatrix out2;
    gen.apply(t, rho, out2);
    CHECK((out2 - out).norm() / ref.norm() < 1e-14);
  }
}

TEST_CASE("adaptive integrator agrees with a fine RK4 oracle") {
  const Toy toy;
  std::mt19937_64 rng(23);
  const DensityMatrix rho0 = oracle::random_density(3, rng);
  const double t_end = 4e-8;
  IntegratorOptions opt;
  opt.keep_states = true;
  const TimeSeries ts = evolve(toy.problem(t_end, rho0), opt);
  const auto f = [&toy](double t, const oracle::Vec& y) { return oracle::Vec(toy.liouvillian(t) * y); };
  const oracle::Vec ref = oracle::rk4(f, oracle::vec(rho0), 0.0, t_end, 40000);
  CHECK((oracle::vec(ts.final_state) - ref).norm() < 1e-8);
  CHECK(ts.states.size() == 2);
  CHECK((ts.states.back() - ts.final_state).norm() == 0.0);
  CHECK(ts.stats.steps > 0);
}

TEST_CASE("damped oscillator keeps a coherent state coherent") {
  // H = w a^dag a, L = sqrt(k) a: <a>(t) = a0 exp(-i w t - k t / 2).
  const int n = 14;
  const double w = 1e9, k = 2e7, t_end = 5e-8;
  const cplx a0(1.2, 0.4);
  LindbladProblem p;
  const Matrix a = fock_annihilation(n);
  p.hamiltonian.constant = to_sparse(Matrix(w * a.adjoint() * a));
  p.collapse_ops.push_back({to_sparse(a), k});
  p.rho0 = projector(coherent_state(a0, n));
  p.t_end = t_end;
  p.sample_times = {t_end};
  const TimeSeries ts = evolve(p);
  const cplx expected = a0 * std::exp(cplx(-k * t_end / 2, -w * t_end));
  CHECK(std::abs((a * ts.final_state).trace() - expected) < 1e-7);
  // The state stays pure: tr rho^2 = 1.
  CHECK(std::abs((ts.final_state * ts.final_state).trace() - 1.0) < 1e-6);
}

TEST_CASE("pure-state path reproduces Rabi oscillations") {
  const double rabi = 3e8, t_end = 4e-8;
  Matrix sx(2, 2);
  sx << 0, 1, 1, 0;
  SchrodingerProblem p;
  p.hamiltonian.constant = to_sparse(Matrix(0.5 * rabi * sx));
  p.psi0 = Vector::Unit(2, 0);
  p.t_end = t_end;
  for (int i = 1; i <= 8; ++i) p.sample_times.push_back(t_end * i / 8);
  IntegratorOptions opt;
  opt.keep_states = true;
  const PureTimeSeries ts = evolve_pure(p, opt);
  REQUIRE(ts.states.size() == 8);
  for (size_t i = 0; i < 8; ++i) {
    const double t = ts.times[i];
    CHECK(std::abs(ts.states[i](0) - std::cos(0.5 * rabi * t)) < 1e-8);
    CHECK(std::abs(ts.states[i](1) - cplx(0, -std::sin(0.5 * rabi * t))) < 1e-8);
  }
  CHECK(ts.stats.max_trace_error < 1e-8);
}

TEST_CASE("property: trace, Hermiticity, positivity and purity") {
  std::mt19937_64 rng(31);
  const Toy toy;
  IntegratorOptions opt;
  opt.check_positivity = true;
  for (int trial = 0; trial < 4; ++trial) {
    const TimeSeries ts = evolve(toy.problem(3e-8, oracle::random_density(3, rng)), opt);
    const DensityCheck c = check_density(ts.final_state);
    CHECK(c.trace_error < 1e-7);
    CHECK(c.hermiticity_error < 1e-12);
    CHECK(ts.stats.max_trace_error < 1e-7);
    CHECK(ts.stats.min_eigenvalue > -1e-7);
  }
  // Loss-free: purity is conserved.
  Toy closed;
  closed.rate = 0.0;
  const TimeSeries ts = evolve(closed.problem(3e-8, projector(oracle::random_ket(3, rng))), opt);
  CHECK(ts.stats.max_purity_drift < 1e-8);
}

TEST_CASE("halving the tolerances moves the result below the error budget") {
  std::mt19937_64 rng(37);
  const Toy toy;
  const DensityMatrix rho0 = oracle::random_density(3, rng);
  IntegratorOptions loose, tight;
  tight.rtol = 0.5 * loose.rtol;
  tight.atol = 0.5 * loose.atol;
  const TimeSeries a = evolve(toy.problem(3e-8, rho0), loose);
  const TimeSeries b = evolve(toy.problem(3e-8, rho0), tight);
  CHECK((a.final_state - b.final_state).norm() < 1e-8);
}

TEST_CASE("observer values are recorded at every sample") {
  const Toy toy;
  std::mt19937_64 rng(41);
  const LindbladProblem p = toy.problem(1e-8, oracle::random_density(3, rng));
  const TimeSeries ts = evolve(p, {}, [](double t, const DensityMatrix& r) {
    return std::vector<double>{t, r.trace().real()};
  });
  REQUIRE(ts.values.size() == 2);
  CHECK(ts.values[1][0] == doctest::Approx(1e-8));
  CHECK(ts.values[1][1] == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("checkpoint round trip") {
  const auto path = (std::filesystem::temp_directory_path() / "kerrzz_ckpt_test.bin").string();
  std::mt19937_64 rng(43);
  const Matrix m = oracle::random_density(5, rng);
  write_checkpoint(path, 1.25e-8, m);
  const auto [t, back] = read_checkpoint(path);
  CHECK(t == 1.25e-8);
  CHECK((back - m).norm() == 0.0);
  std::remove(path.c_str());
  CHECK_THROWS_AS(read_checkpoint(path), Error);
}

TEST_CASE("problem validation") {
  const Toy toy;
  std::mt19937_64 rng(47);
  LindbladProblem p = toy.problem(1e-8, oracle::random_density(3, rng));
  p.sample_times = {2e-8};
  CHECK_THROWS_AS(p.validate(), Error);
  p = toy.problem(1e-8, oracle::random_density(3, rng));
  p.rho0 *= 2.0;
  CHECK_THROWS_AS(p.validate(), Error);
  p = toy.problem(1e-8, oracle::random_density(3, rng));
  p.collapse_ops[0].rate = -1.0;
  CHECK_THROWS_AS(p.validate(), Error);
  SchrodingerProblem s;
  s.hamiltonian.constant = to_sparse(Matrix(Matrix::Identity(2, 2)));
  s.psi0 = Vector::Ones(3);
  CHECK_THROWS_AS(s.validate(), Error);
}
