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
#include "nloq/soliton.hpp"
#include "support.hpp"

using namespace nloq;
using nloq::test::rel_err;

namespace {

double max_abs(const FieldProfile& f) {
  double m = 0.0;
  for (const cplx& v : f.values) m = std::max(m, std::abs(v));
  return m;
}

double l2_distance(const FieldProfile& a, const FieldProfile& b) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.values.size(); ++j) s += std::norm(a.values[j] - b.values[j]);
  return std::sqrt(s * a.grid.dx());
}

int stable_steps(double t, const FiberParams& p) {
  const double dt_max = p.grid.dx() * p.grid.dx() / (std::numbers::pi * p.omega1_dblprime);
  return static_cast<int>(std::ceil(std::abs(t) / dt_max));
}

FieldProfile scaled(FieldProfile f, double s) {
  for (auto& v : f.values) v *= s;
  return f;
}

}  // namespace

TEST_CASE("fiber nonlinearity coefficient") {
  CHECK(rel_err(g3_from_fiber(2.0, 4.0, 3.0, 5.0, 0.5), 3.0 * 2.0 / 32.0 * 56.25) < 1e-15);
  CHECK(g3_from_fiber(-1.0, 1.0, 1.0, 1.0, 1.0) < 0.0);
  CHECK_ERRC(g3_from_fiber(1.0, 0.0, 1.0, 1.0, 1.0), Errc::parameter);
}

TEST_CASE("Hartree soliton profile") {
  FiberParams p;
  for (int n : {2, 3, 6}) {
    CAPTURE(n);
    const FieldProfile h = hartree_profile(n, 0.0, 0.0, p);
    CHECK(std::abs(h.norm() - 1.0) < 1e-8);
    const int N = p.grid.points;
    for (int j = 1; j < N / 2; ++j)
      CHECK(std::abs(std::abs(h.values[j]) - std::abs(h.values[N - j])) < 1e-14);
    const double kappa = soliton_kappa(n, p);
    CHECK(rel_err(kappa, (n - 1.0) * std::abs(p.g3) / p.omega1_dblprime) < 1e-15);
    CHECK(rel_err(max_abs(h), std::sqrt(kappa / 2)) < 1e-12);
    // The periodic wrap of the sech tail limits the residual on short grids.
    FiberParams long_grid = p;
    long_grid.grid.length = 128.0;
    long_grid.grid.points = 4096;
    CHECK(hartree_residual(n, long_grid, 0.0) < 1e-8);
    CHECK(hartree_residual(n, long_grid, 0.7) < 1e-8);
  }
  // A moving soliton keeps its norm and shifts its centre at omega'' q.
  const FieldProfile moving = hartree_profile(4, 0.3, -3.0, p, 2.0);
  CHECK(std::abs(moving.norm() - 1.0) < 1e-8);

  FiberParams wide;
  wide.g3 = -0.05;
  CHECK_ERRC(hartree_profile(2, 0.0, 0.0, wide), Errc::truncation);
  CHECK_ERRC(hartree_profile(1, 0.0, 0.0, p), Errc::parameter);
  FiberParams repulsive;
  repulsive.g3 = 0.5;
  CHECK_ERRC(hartree_profile(2, 0.0, 0.0, repulsive), Errc::parameter);
  FiberParams odd;
  odd.grid.points = 1023;
  CHECK_ERRC(hartree_profile(2, 0.0, 0.0, odd), Errc::parameter);
}

TEST_CASE("split-step propagation") {
  SUBCASE("free Gaussian spreading") {
    FiberParams p;
    p.g3 = -1e-15;
    const double s2 = 4.0, t = 2.0;
    FieldProfile g{p.grid, std::vector<cplx>(p.grid.points)};
    FieldProfile want = g;
    const cplx st = s2 + cplx(0, p.omega1_dblprime * t);
    for (int j = 0; j < p.grid.points; ++j) {
      const double x = p.grid.x(j);
      g.values[j] = std::exp(-x * x / (2 * s2));
      want.values[j] = std::sqrt(s2 / st) * std::exp(-x * x / (2.0 * st));
    }
    const FieldProfile out = split_step_nlse(g, p, t, 20);
    CHECK(l2_distance(out, want) < 1e-10);
  }

  SUBCASE("soliton returns after one period") {
    FiberParams p;
    const int n = 3;
    const FieldProfile psi0 = scaled(hartree_profile(n, 0.0, 0.0, p), std::sqrt(n - 1.0));
    const double T = soliton_period(n, p);
    const FieldProfile psi = split_step_nlse(psi0, p, T, 4 * stable_steps(T, p));
    CHECK(std::abs(psi.norm() - psi0.norm()) < 1e-10);
    CHECK(aligned_modulus_deviation(psi0, psi) < 1e-3);
    CHECK(l2_distance(psi, psi0) / std::sqrt(psi0.norm()) < 1e-2);
    CHECK(rel_err(nlse_energy(psi, p), nlse_energy(psi0, p)) < 1e-4);
  }

  SUBCASE("time reversal") {
    FiberParams p;
    const FieldProfile psi0 = scaled(hartree_profile(2, 0.2, 1.0, p), 1.3);
    const int steps = stable_steps(1.5, p);
    const FieldProfile fwd = split_step_nlse(psi0, p, 1.5, steps);
    const FieldProfile back = split_step_nlse(fwd, p, -1.5, steps);
    CHECK(l2_distance(back, psi0) < 1e-10);
  }

  FiberParams p;
  const FieldProfile h = hartree_profile(2, 0.0, 0.0, p);
  CHECK_ERRC(split_step_nlse(h, p, 1.0, 0), Errc::parameter);
  FiberParams other;
  other.grid.points = 512;
  CHECK_ERRC(split_step_nlse(h, other, 1.0, 10), Errc::contract);
  CHECK_ERRC(overlap(h, hartree_profile(2, 0.0, 0.0, other)), Errc::contract);
}

TEST_CASE("neighbouring soliton overlap phase") {
  FiberParams p;
  p.g3 = -0.01;
  p.grid.length = 4000.0;
  p.grid.points = 1 << 14;
  for (int n : {20, 40, 80})
    for (double t : {0.5, 3.0}) {
      const cplx o = std::pow(overlap(hartree_profile(n, 0.0, 0.0, p, t),
                                      hartree_profile(n + 1, 0.0, 0.0, p, t)),
                              n);
      const double phase = t * p.g3 * p.g3 * n * (2.0 * n - 1.0) / (2.0 * p.omega1_dblprime);
      CHECK(std::abs(o / std::abs(o) - std::polar(1.0, phase)) < 1e-9);
      CHECK(std::abs(o) <= 1.0);
    }
}

TEST_CASE("coherent mean field") {
  const cplx alpha = 20.0;
  const double n0 = std::norm(alpha);
  FiberParams q;
  q.g3 = -2.0 / (n0 - 1.0);

  const MeanFieldResult m0 = mean_field(alpha, q, 0.0);
  CHECK(m0.tail_bound < 1e-10);
  CHECK(m0.n_min == 200);
  CHECK(m0.n_max == 600);
  const FieldProfile ref = scaled(hartree_profile(400, 0.0, 0.0, q), 20.0);
  CHECK(aligned_modulus_deviation(ref, m0.field) < 1e-2);

  const double t_diff = 1.0 / (q.g3 * q.g3 * n0 * std::sqrt(n0));
  const MeanFieldResult early = mean_field(alpha, q, 0.05 * t_diff);
  CHECK(early.short_time);
  CHECK(early.diffusion_parameter == doctest::Approx(0.05));
  CHECK(aligned_modulus_deviation(m0.field, early.field) < 0.05);
  const MeanFieldResult late = mean_field(alpha, q, 3.0 * t_diff);
  CHECK_FALSE(late.short_time);
  CHECK(max_abs(late.field) < 0.5 * max_abs(m0.field));

  // The carrier phase rotates the whole field.
  FiberParams c = q;
  c.omega1 = 1.7;
  const MeanFieldResult rot = mean_field(alpha, c, 0.3);
  const MeanFieldResult plain = mean_field(alpha, q, 0.3);
  CHECK(std::abs(rot.field.values[512] - plain.field.values[512] * std::polar(1.0, 1.7 * 0.3)) <
        1e-12 * std::abs(plain.field.values[512]));

  CHECK_ERRC(mean_field(1.9, q, 0.0), Errc::parameter);
  FiberParams bad = q;
  bad.g3 = 0.0;
  CHECK_ERRC(mean_field(alpha, bad, 0.0), Errc::parameter);
}
