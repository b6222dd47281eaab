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

#include "doctest.h"
#include "nloq/models.hpp"
#include "support.hpp"

using namespace nloq;

namespace {

cplx element(const ModelSpec& m, const std::vector<int>& row, const std::vector<int>& col) {
  return m.hamiltonian.element(m.space.flat_index(row), m.space.flat_index(col));
}

double commutator_norm(const Operator& h, const Operator& q) {
  return commutator(h, q).max_abs();
}

bool is_diagonal(const Operator& op) {
  const CMat d = op.dense();
  return (d - CMat(d.diagonal().asDiagonal())).cwiseAbs().maxCoeff() == 0.0;
}

}  // namespace

TEST_CASE("two-mode chi2") {
  const Space s = make_space({6, 4});
  const ModelSpec m = h_two_mode_chi2(s, 1.3, 0.2);
  CHECK(commutator_norm(m.hamiltonian, m.charge("M")) < 1e-10);
  CHECK(std::abs(element(m, {2, 0}, {0, 1}) - 0.2 * std::sqrt(2.0)) < 1e-14);
  CHECK(m.hamiltonian.hermiticity_defect() < 1e-12);
  CHECK(is_diagonal(h_two_mode_chi2(s, 1.3, 0.0).hamiltonian));
  CHECK_ERRC(h_two_mode_chi2(make_space({4}), 1.0, 1.0), Errc::contract);
}

TEST_CASE("three-mode chi2 with pump first") {
  const Space s = make_space({3, 4, 4});
  const ModelSpec m = h_three_mode_chi2(s, 1.0, 1.7, 0.3);
  CHECK(commutator_norm(m.hamiltonian, m.charge("M1")) < 1e-10);
  CHECK(commutator_norm(m.hamiltonian, m.charge("M2")) < 1e-10);
  CHECK(std::abs(element(m, {0, 1, 1}, {1, 0, 0}) - 0.3) < 1e-14);
  CHECK(is_diagonal(h_three_mode_chi2(s, 1.0, 1.7, 0.0).hamiltonian));
  // Free energy of the pump is the sum of the signal and idler frequencies.
  CHECK(std::abs(element(m, {1, 0, 0}, {1, 0, 0}) - 2.7) < 1e-14);
  CHECK_ERRC(h_three_mode_chi2(make_space({3, 3}), 1.0, 1.0, 1.0), Errc::contract);
}

TEST_CASE("Kerr models are diagonal with the expected spectrum") {
  const Space s = make_space({8});
  const double w = 0.7, k = 0.15;
  const ModelSpec m = h_kerr_single(s, w, k);
  CHECK(is_diagonal(m.hamiltonian));
  for (int n = 0; n < 8; ++n)
    CHECK(std::abs(element(m, {n}, {n}) - (n * w + n * (n - 1) * k / 2)) < 1e-13);
  const ModelSpec free = h_kerr_single(s, w, 0.0);
  for (int n = 0; n < 8; ++n) CHECK(std::abs(element(free, {n}, {n}) - n * w) < 1e-14);

  const Space s2 = make_space({5, 6});
  const ModelSpec x = h_kerr_cross(s2, 0.4, 1.1, 0.3);
  CHECK(is_diagonal(x.hamiltonian));
  for (int n = 0; n < 5; ++n)
    for (int mm = 0; mm < 6; ++mm)
      CHECK(std::abs(element(x, {n, mm}, {n, mm}) - (n * 0.4 + mm * 1.1 + 0.3 * n * mm / 2)) <
            1e-13);
  CHECK_ERRC(h_kerr_single(s2, 1.0, 1.0), Errc::contract);
  CHECK_ERRC(h_kerr_cross(s, 1.0, 1.0, 1.0), Errc::contract);
}

TEST_CASE("n-photon down conversion") {
  const Space s = make_space({7, 3});
  const ModelSpec two = h_nphoton(s, 0.9, 0.2, 2);
  const ModelSpec chi2 = h_two_mode_chi2(s, 0.9, 0.2);
  CHECK((two.hamiltonian.dense() - chi2.hamiltonian.dense()).norm() == 0.0);

  for (int n : {2, 3, 4}) {
    const ModelSpec m = h_nphoton(s, 0.9, 0.2, n);
    const Operator q = number_operator(s, 0) + static_cast<double>(n) * number_operator(s, 1);
    CHECK(commutator_norm(m.hamiltonian, q) < 1e-10);
  }
  const ModelSpec three = h_nphoton(s, 0.0, 0.5, 3);
  CHECK(std::abs(element(three, {3, 0}, {0, 1}) - 0.5 * std::sqrt(6.0)) < 1e-13);
  CHECK_ERRC(h_nphoton(make_space({3, 3}), 1.0, 1.0, 3), Errc::truncation);
  CHECK_ERRC(h_nphoton(s, 1.0, 1.0, 1), Errc::parameter);
}

TEST_CASE("classical-pump parametric generator") {
  const Space s = make_space({10});
  const double kappa = 0.4, phi = 0.6;
  const cplx beta = std::polar(3.0, 0.2);
  const ModelSpec m = h_parametric_classical_pump(s, kappa, beta, phi);
  CHECK(m.hamiltonian.hermiticity_defect() == 0.0);
  CHECK(m.frame == Frame::interaction);
  const cplx want = cplx(0, 0.5 * kappa * 3.0) * std::sqrt(2.0) * std::polar(1.0, phi);
  CHECK(std::abs(element(m, {2}, {0}) - want) < 1e-14);

  // With phi = 0 it equals the quantized-pump generator with b -> sqrt(Np).
  const ModelSpec c = h_parametric_classical_pump(s, kappa, 3.0, 0.0);
  const ModelSpec q = h_degenerate_amplifier(make_space({10, 2}), kappa, 3.0);
  for (int i = 0; i < 10; ++i)
    for (int j = 0; j < 10; ++j)
      CHECK(std::abs(c.hamiltonian.element(i, j) -
                     q.hamiltonian.element(q.space.flat_index({i, 0}),
                                           q.space.flat_index({j, 0}))) < 1e-14);
  CHECK_ERRC(h_parametric_classical_pump(s, kappa, 0.0, 0.0), Errc::parameter);
}

TEST_CASE("lab-frame parametric model is hermitian at every time") {
  const ModelSpec m = h_parametric_lab(make_space({8}), 1.0, 0.1, cplx(0.5, 0.5));
  CHECK(m.time_dependent());
  for (double t : {0.0, 0.37, 2.0, 11.1}) CHECK(m.hamiltonian_at(t).hermiticity_defect() < 1e-12);
}

TEST_CASE("degenerate parametric oscillator model") {
  const Space s = make_space({4, 3});
  const ModelSpec damp = dpo_model(s, 0.0, 0.0, 1.0, 2.0);
  CHECK(damp.hamiltonian.max_abs() == 0.0);
  CHECK(damp.dissipators.size() == 2);
  CHECK(damp.dissipators[0].rate == 1.0);
  CHECK(damp.dissipators[1].rate == 2.0);

  const ModelSpec m = dpo_model(s, 0.5, 1.7, 1.0, 2.0);
  CHECK(m.hamiltonian.hermiticity_defect() == 0.0);
  CHECK(std::abs(element(m, {0, 1}, {0, 0}) - cplx(0.0, 1.7)) < 1e-14);
  CHECK(std::abs(element(m, {2, 0}, {0, 1}) - cplx(0.0, 0.25 * std::sqrt(2.0))) < 1e-14);
  CHECK_ERRC(dpo_model(s, 0.5, 1.0, -1.0, 1.0), Errc::parameter);
  CHECK_ERRC(dpo_model(s, 0.5, 1.0, 1.0, -0.1), Errc::parameter);
}

TEST_CASE("every constructor passes its own validation") {
  const Space two = make_space({5, 4});
  CHECK_NOTHROW(h_two_mode_chi2(two, 1, 1).validate());
  CHECK_NOTHROW(h_three_mode_chi2(make_space({3, 3, 3}), 1, 2, 1).validate());
  CHECK_NOTHROW(h_kerr_single(make_space({5}), 1, 1).validate());
  CHECK_NOTHROW(h_kerr_cross(two, 1, 2, 1).validate());
  CHECK_NOTHROW(h_nphoton(two, 1, 1, 3).validate());
  CHECK_NOTHROW(h_degenerate_amplifier(two, 1, 0.0).validate());
  CHECK_NOTHROW(dpo_model(two, 1, 1, 1, 1).validate());

  ModelSpec bad = h_two_mode_chi2(two, 1, 1);
  bad.charges.push_back({"n_a", number_operator(two, 0)});
  CHECK_ERRC(bad.validate(), Errc::contract);
  CHECK_ERRC(bad.charge("missing"), Errc::contract);
}
