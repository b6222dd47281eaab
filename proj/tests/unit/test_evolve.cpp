// Copyright 2026 The nlo_quanta Authors
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
#include <numbers>

#include "doctest.h"
#include "nloq/diagnostics.hpp"
#include "nloq/evolve.hpp"
#include "nloq/models.hpp"
#include "support.hpp"

using namespace nloq;
using nloq::test::linspace;

namespace {

ModelSpec damped_mode(const Space& s, double gamma) {
  return ModelSpec{"damped", s, 0.0 * identity(s), {}, {{annihilation(s, 0), gamma}}, {},
                   Frame::lab};
}

// <a(t)> for a diagonal Hamiltonian from the Fock amplitudes directly.
cplx diagonal_mean(const CVec& c, const std::vector<double>& energy, double t) {
  cplx sum = 0.0;
  for (int n = 0; n + 1 < c.size(); ++n)
    sum += std::conj(c(n)) * c(n + 1) * std::sqrt(n + 1.0) *
           std::polar(1.0, -(energy[n + 1] - energy[n]) * t);
  return sum;
}

}  // namespace

TEST_CASE("free evolution rotates a coherent state") {
  const Space s = make_space({30});
  const double w = 1.7;
  const cplx alpha(1.1, -0.4);
  const auto r = evolve_pure(h_kerr_single(s, w, 0.0), coherent_state(s, {alpha}),
                             {0.0, 0.5, 2.0, 7.3});
  for (std::size_t i = 0; i < r.times.size(); ++i) {
    const State want = coherent_state(s, {alpha * std::polar(1.0, -w * r.times[i])});
    CHECK((r.states[i].vector() - want.vector()).norm() < 1e-9);
  }
}

TEST_CASE("Kerr evolution against the diagonal Fock sum") {
  const Space s = make_space({50});
  const double w = 0.3, k = 1.0;
  const State psi0 = coherent_state(s, {2.0});
  std::vector<double> energy(50);
  for (int n = 0; n < 50; ++n) energy[n] = n * w + n * (n - 1) * k / 2;
  const std::vector<double> times = linspace(0.0, 2 * std::numbers::pi, 25);
  auto r = evolve_pure(h_kerr_single(s, w, k), psi0, times);
  r.record("a", annihilation(s, 0));
  for (std::size_t i = 0; i < times.size(); ++i) {
    CHECK(std::abs(r.observables.at("a")[i] - diagonal_mean(psi0.vector(), energy, times[i])) <
          1e-10);
    CHECK(std::abs(r.states[i].vector().norm() - 1.0) < 1e-9);
  }
  CHECK(r.observables.count("n") == 1);
}

TEST_CASE("two-mode chi2 conserves M, energy, and signal parity") {
  const Space s = make_space({30, 16});
  const ModelSpec m = h_two_mode_chi2(s, 1.0, 0.15);
  const std::vector<double> times = linspace(0.0, 8.0, 17);
  auto r = evolve_pure(m, coherent_state(s, {0.0, 1.2}), times);
  r.record("H", m.hamiltonian);
  const std::vector<cplx>& M = r.observables.at("M");
  const std::vector<cplx>& H = r.observables.at("H");
  const Operator parity = phase_rotation(make_space({30}), 0, std::numbers::pi);
  for (std::size_t i = 0; i < times.size(); ++i) {
    CHECK(std::abs(M[i] - M[0]) < 1e-10);
    CHECK(std::abs(H[i] - H[0]) < 1e-9);
    const CMat rho = partial_trace(r.states[i], {0}).matrix();
    const CMat p = parity.dense();
    CHECK((p * rho - rho * p).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("signal rotation covariance follows the pump symmetry") {
  // Coherent pump (order 1): signal invariant under pi.
  const Space s = make_space({24, 15});
  const ModelSpec m = h_two_mode_chi2(s, 0.0, 0.2);
  const auto r1 = evolve_pure(m, coherent_state(s, {0.0, 1.0}), {1.0, 3.0});
  for (const State& st : r1.states) CHECK(rotation_invariance(partial_trace(st, {0}), 0, 1) < 1e-9);

  // Pump superposition of |0> and |2> (order 2): signal invariant under pi/2.
  CVec psi = CVec::Zero(static_cast<Eigen::Index>(s.total()));
  psi(static_cast<Eigen::Index>(s.flat_index({0, 0}))) = std::sqrt(0.5);
  psi(static_cast<Eigen::Index>(s.flat_index({0, 2}))) = std::sqrt(0.5);
  const auto r2 = evolve_pure(m, State::pure(s, psi), {1.0, 3.0});
  for (const State& st : r2.states) {
    const State red = partial_trace(st, {0});
    CHECK(rotation_invariance(red, 0, 2) < 1e-9);
  }
}

TEST_CASE("time-dependent lab-frame pump matches the rotating-frame generator") {
  const Space s = make_space({30});
  const double w = 2.0, kappa = 0.1;
  const ModelSpec lab = h_parametric_lab(s, w, kappa, 0.5);
  // kappa * beta = i (k'/2)|b'| e^{i phi}: k' = 0.1, |b'| = 1, phi = -pi/2.
  const ModelSpec rot = h_parametric_classical_pump(s, 0.1, 1.0, -std::numbers::pi / 2);
  const std::vector<double> times = linspace(0.0, 5.0, 6);
  auto rl = evolve_pure(lab, fock_state(s, {0}), times);
  auto rr = evolve_pure(rot, fock_state(s, {0}), times);
  rl.record("n", number_operator(s, 0));
  rr.record("n", number_operator(s, 0));
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double u = 0.1 * times[i];
    CHECK(std::abs(rl.observables.at("n")[i].real() - rr.observables.at("n")[i].real()) < 1e-8);
    CHECK(std::abs(rr.observables.at("n")[i].real() - std::sinh(u) * std::sinh(u)) < 1e-9);
  }
}

TEST_CASE("static propagation: eigen and Taylor paths agree") {
  const Space s = make_space({14, 10});
  const ModelSpec m = h_two_mode_chi2(s, 0.7, 0.3);
  const CVec psi0 = coherent_state(s, {0.3, 0.5}).vector();
  EvolutionOptions eig, taylor;
  taylor.eigen_limit = 1;
  for (double t : {0.1, 2.5, -1.3}) {
    const CVec a = propagate_static(m.hamiltonian, psi0, t, eig);
    const CVec b = propagate_static(m.hamiltonian, psi0, t, taylor);
    CHECK((a - b).norm() < 1e-10);
  }
}

TEST_CASE("evolve_pure rejects dissipative models") {
  const Space s = make_space({4});
  CHECK_ERRC(evolve_pure(damped_mode(s, 1.0), fock_state(s, {1}), {1.0}), Errc::contract);
}

TEST_CASE("Lindblad damping of a number state") {
  const Space s = make_space({8});
  const double gamma = 0.4;
  const std::vector<double> times = linspace(0.0, 3.0, 7);
  auto r = evolve_lindblad(damped_mode(s, gamma), fock_state(s, {5}), times);
  r.record("n", number_operator(s, 0));
  for (std::size_t i = 0; i < times.size(); ++i) {
    CHECK(std::abs(r.observables.at("n")[i].real() - 5.0 * std::exp(-2 * gamma * times[i])) <
          1e-8);
    CHECK(std::abs(r.states[i].matrix().trace() - 1.0) < 1e-8);
    const CMat& rho = r.states[i].matrix();
    CHECK((rho - rho.adjoint()).cwiseAbs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("Lindblad without dissipators reproduces unitary evolution") {
  const Space s = make_space({10, 8});
  const ModelSpec m = h_two_mode_chi2(s, 1.0, 0.2);
  const State psi0 = coherent_state(s, {0.0, 0.4});
  const std::vector<double> times = {0.5, 2.0};
  const auto u = evolve_pure(m, psi0, times);
  const auto l = evolve_lindblad(m, psi0, times);
  for (std::size_t i = 0; i < times.size(); ++i)
    CHECK((u.states[i].density_matrix() - l.states[i].matrix()).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("steady states") {
  SUBCASE("pure damping relaxes to vacuum") {
    const Space s = make_space({6});
    const State rho = steady_state(damped_mode(s, 0.7));
    CHECK(std::abs(rho.matrix()(0, 0) - 1.0) < 1e-10);
  }

  SUBCASE("driven damped pump without coupling") {
    const Space s = make_space({2, 16});
    const double E0 = 0.8, gb = 1.0;
    SteadyStateInfo info;
    const State rho = steady_state(dpo_model(s, 0.0, E0, 1.0, gb), {}, &info);
    CHECK(std::abs(expectation(rho, annihilation(s, 1)) - E0 / gb) < 1e-8);
    CHECK(info.residual < 1e-10);
  }

  SUBCASE("steady state is stationary under Lindblad evolution") {
    const Space s = make_space({6, 4});
    const ModelSpec m = dpo_model(s, 0.5, 2.0, 1.0, 4.0);
    const State rho = steady_state(m);
    CHECK(apply_liouvillian(m, rho.matrix()).cwiseAbs().maxCoeff() < 1e-10);
    const auto r = evolve_lindblad(m, rho, {0.5});
    CHECK((r.states[0].matrix() - rho.matrix()).cwiseAbs().maxCoeff() < 1e-8);
  }

  SUBCASE("iterative and dense solvers agree") {
    const Space s = make_space({6, 4});
    const ModelSpec m = dpo_model(s, 0.5, 2.0, 1.0, 4.0);
    SteadyStateOptions iterative, direct;
    iterative.dense_limit = 0;
    direct.dense_limit = 24 * 24;
    SteadyStateInfo di, ii;
    const State dense = steady_state(m, direct, &di);
    const State iter = steady_state(m, iterative, &ii);
    CHECK(di.method != ii.method);
    CHECK((dense.matrix() - iter.matrix()).cwiseAbs().maxCoeff() < 1e-8);
  }

  SUBCASE("degenerate null space is reported") {
    const Space s = make_space({3, 3});
    ModelSpec m{"half_damped", s, 0.0 * identity(s), {}, {{annihilation(s, 0), 1.0}}, {},
                Frame::lab};
    CHECK_ERRC(steady_state(m), Errc::ambiguity);
    SteadyStateOptions iterative;
    iterative.dense_limit = 0;
    CHECK_ERRC(steady_state(m, iterative), Errc::ambiguity);
  }

  SUBCASE("a model without dissipation has no unique steady state") {
    CHECK_ERRC(steady_state(h_kerr_single(make_space({4}), 1.0, 1.0)), Errc::contract);
  }
}

TEST_CASE("Liouvillian matrix matches the superoperator action") {
  const Space s = make_space({3, 3});
  const ModelSpec m = dpo_model(s, 0.4, 1.0, 1.0, 2.0);
  const CMat L = liouvillian_matrix(m);
  CMat x = CMat::Zero(9, 9);
  for (int i = 0; i < 9; ++i)
    for (int j = 0; j < 9; ++j) x(i, j) = cplx(std::sin(i + 2.0 * j), std::cos(3.0 * i - j));
  const CMat direct = apply_liouvillian(m, x);
  CVec vec(81);
  for (int i = 0; i < 9; ++i)
    for (int j = 0; j < 9; ++j) vec(i * 9 + j) = x(i, j);
  const CVec lv = L * vec;
  double worst = 0.0;
  for (int i = 0; i < 9; ++i)
    for (int j = 0; j < 9; ++j) worst = std::max(worst, std::abs(lv(i * 9 + j) - direct(i, j)));
  CHECK(worst < 1e-12);
}
