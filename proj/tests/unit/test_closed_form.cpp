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
#include <random>

#include "doctest.h"
#include "nloq/closed_form.hpp"
#include "nloq/evolve.hpp"
#include "nloq/models.hpp"
#include "support.hpp"

using namespace nloq;
using nloq::test::linspace;

namespace {

constexpr double kPi = std::numbers::pi;

// Signal after the quantized-pump amplifier, pump written as beta + b with
// b starting in vacuum.
State amplified_vacuum(double Np, double u, int signal_dim, int pump_dim) {
  const double kappa = 0.05;
  const Space s = make_space({signal_dim, pump_dim});
  const ModelSpec m = h_degenerate_amplifier(s, kappa, std::sqrt(Np));
  return evolve_pure(m, fock_state(s, {0, 0}), {u / (kappa * std::sqrt(Np))}).states[0];
}

}  // namespace

TEST_CASE("Bogoliubov solution") {
  const BogoliubovSolution id = para_solution(0.0, 0.4);
  CHECK(id.cosh_coeff == cplx(1.0));
  CHECK(std::abs(id.sinh_coeff) == 0.0);
  for (double u : {0.1, 0.7, 2.0})
    for (double phi : {0.0, 1.0, kPi}) {
      const BogoliubovSolution b = para_solution(u, phi);
      CHECK(std::abs(std::norm(b.cosh_coeff) - std::norm(b.sinh_coeff) - 1.0) < 1e-12);
    }
}

TEST_CASE("parametric variances") {
  const QuadratureVariances z = para_variances(0.0, 1.1);
  CHECK(z.var_x1 == doctest::Approx(0.25));
  CHECK(z.var_x2 == doctest::Approx(0.25));
  for (double u : {0.2, 0.9}) {
    const QuadratureVariances v = para_variances(u, 0.0);
    CHECK(std::abs(v.var_x1 - std::exp(2 * u) / 4) < 1e-15);
    CHECK(std::abs(v.var_x2 - std::exp(-2 * u) / 4) < 1e-15);
    const QuadratureVariances w = para_variances(u, kPi);
    CHECK(std::abs(w.var_x1 - v.var_x2) < 1e-15);
    CHECK(std::abs(w.var_x2 - v.var_x1) < 1e-15);
  }
  // Minimum uncertainty only at phi_p in {0, pi}.
  for (double u : {0.3, 1.0})
    for (double phi : linspace(0.0, 2 * kPi, 17)) {
      const QuadratureVariances v = para_variances(u, phi);
      const double prod = v.var_x1 * v.var_x2;
      CHECK(prod >= 1.0 / 16 - 1e-15);
      const bool edge = std::abs(std::sin(phi)) < 1e-9;
      CHECK((std::abs(prod - 1.0 / 16) < 1e-12) == edge);
    }
}

TEST_CASE("parametric approximation against the quantized pump") {
  const double u = 0.3;
  const State st = amplified_vacuum(400.0, u, 30, 8);
  const double n = expectation(st, number_operator(st.space(), 0)).real();
  CHECK(nloq::test::rel_err(n, std::sinh(u) * std::sinh(u)) < 0.02);
}

TEST_CASE("pump phase-noise squeezing limit") {
  for (double Np : {1.0, 25.0, 1e4}) {
    CHECK(std::abs(phase_averaged_var_x2(0.0, Np) - (0.25 + 1 / (64 * Np))) < 1e-15);
    const MaxSqueezing m = max_squeezing(Np);
    CHECK(std::abs(m.u_star - 0.25 * std::log(16 * Np)) < 1e-12);
    CHECK(std::abs(m.var_min * 8 * std::sqrt(Np) - 1.0) < 1e-12);
    CHECK(std::abs(m.u_numeric - m.u_star) < 1e-10);
    CHECK(std::abs(m.var_numeric - m.var_min) < 1e-10);
    for (double u : linspace(0.0, 2 * m.u_star, 21)) {
      CHECK(phase_averaged_var_x2(u, Np) >= m.var_min - 1e-15);
      CHECK(phase_averaged_var_x2(u, Np) >= para_variances(u, 0.0).var_x2);
      if (u > 0) CHECK(corrected_var_x2(u, Np) < phase_averaged_var_x2(u, Np));
    }
  }
  const MaxSqueezing m4 = max_squeezing(1e4);
  CHECK(m4.var_min == doctest::Approx(1.25e-3));
  CHECK(m4.u_star == doctest::Approx(2.9957).epsilon(1e-4));
  CHECK(max_squeezing(1.0).var_min == doctest::Approx(0.125));
  CHECK(std::abs(phase_averaged_var_x2(0.8, 1e15) - std::exp(-1.6) / 4) < 1e-12);
  CHECK(std::abs(corrected_var_x2(0.8, 1e15) - std::exp(-1.6) / 4) < 1e-12);
  CHECK_ERRC(max_squeezing(0.0), Errc::parameter);
  CHECK_ERRC(phase_averaged_var_x2(0.1, -1.0), Errc::parameter);

  SUBCASE("third term is small at the optimum") {
    for (double Np : {100.0, 1e4, 1e6}) {
      const double u = max_squeezing(Np).u_star;
      const double third = 3 * std::exp(4 * u) / (1024 * Np * Np);
      const double first_two = phase_averaged_var_x2(u, Np);
      CHECK(third / first_two < 0.2);
    }
  }
}

TEST_CASE("corrected variance against the quantized pump at Np = 25") {
  const double Np = 25.0;
  for (double u : {0.4, 0.8, 1.2}) {
    CAPTURE(u);
    const State st = amplified_vacuum(Np, u, 40, 30);
    const double v = variance(st, quadrature(st.space(), 0, kPi / 2));
    CHECK(nloq::test::rel_err(v, corrected_var_x2(u, Np)) < 0.15);
  }
}

TEST_CASE("Kerr mean amplitude") {
  const cplx alpha(1.2, 0.5);
  for (double t : {0.0, 0.3, 4.0})
    CHECK(std::abs(kerr_mean_amplitude(alpha, 0.7, 0.0, t) - alpha * std::polar(1.0, -0.7 * t)) <
          1e-14);
  const double kappa = 0.8, w = 0.3;
  for (double t : {0.1, 1.3, 5.0}) {
    const double T = 2 * kPi / kappa;
    const cplx a = kerr_mean_amplitude(alpha, w, kappa, t);
    const cplx b = kerr_mean_amplitude(alpha, w, kappa, t + T);
    CHECK(std::abs(b - a * std::polar(1.0, -w * T)) < 1e-12);
  }
  CHECK(std::abs(kerr_mean_amplitude(alpha, w, kappa, 2 * kPi / kappa) -
                 alpha * std::polar(1.0, -w * 2 * kPi / kappa)) < 1e-12);

  const Space s = make_space({50});
  auto r = evolve_pure(h_kerr_single(s, 0.0, 1.0), coherent_state(s, {2.0}), {0.1});
  r.record("a", annihilation(s, 0));
  CHECK(std::abs(r.observables.at("a")[0] - kerr_mean_amplitude(2.0, 0.0, 1.0, 0.1)) < 1e-10);
  // The Gaussian form is a short-time approximation of the same quantity.
  double prev = 1.0;
  for (double t : {0.04, 0.02, 0.01}) {
    const double d = std::abs(kerr_mean_amplitude_gaussian(2.0, 0.0, 1.0, t) -
                              kerr_mean_amplitude(2.0, 0.0, 1.0, t));
    CHECK(d < prev / 3);
    prev = d;
  }
  CHECK(prev < 2e-3);
}

TEST_CASE("Kerr beam-splitter excess") {
  CHECK(kerr_bs_excess(3.0, 0.0, 0.2, 0.0, 1.0).value == 0.0);
  for (double alpha : {3.0, 4.0, 6.0})
    for (double phi : {0.1, 0.25}) {
      const KerrBsOptimum o = kerr_bs_optimum(alpha, phi);
      const double x = alpha * phi;
      CHECK(std::abs(o.excess_literature -
                     (-2 * alpha * alpha * alpha * phi * std::exp(-x * x) /
                      (1 - std::exp(-2 * x * x)))) < 1e-12 * std::abs(o.excess_literature));
      CHECK(std::abs(kerr_bs_excess(alpha, 0.0, phi, o.r_opt, o.eta).value - o.excess) <
            1e-9 * std::abs(o.excess));
      for (double dr : {-0.05, 0.05})
        CHECK(kerr_bs_excess(alpha, 0.0, phi, o.r_opt + dr, o.eta).value >= o.excess);
      for (double de : {-0.05, 0.05})
        CHECK(kerr_bs_excess(alpha, 0.0, phi, o.r_opt, o.eta + de).value >= o.excess);
      CHECK(o.excess < 0.0);
      CHECK(o.valid);
    }
  // The derived optimum differs from the literature form by a factor |alpha| phi.
  for (double phi : {0.1, 0.25, 0.4}) {
    const KerrBsOptimum o = kerr_bs_optimum(4.0, phi);
    CHECK(o.excess / o.excess_literature == doctest::Approx(4.0 * phi).epsilon(1e-12));
  }
  const KerrBsOptimum far = kerr_bs_optimum(10.0, 0.5);
  CHECK_FALSE(far.valid);
  CHECK_FALSE(far.warning.empty());
}

TEST_CASE("QND phase shift") {
  const cplx alpha(0.8, -0.3);
  const double w = 1.1, k = 0.4, t = 2.0;
  CHECK(std::abs(qnd_phase_shift(alpha, w, k, 0, t) - alpha * std::polar(1.0, -w * t)) < 1e-15);
  for (int n = 0; n < 4; ++n) {
    const double d = std::arg(qnd_phase_shift(alpha, w, k, n, t) /
                              qnd_phase_shift(alpha, w, k, n + 1, t));
    CHECK(std::abs(d - k * t / 2) < 1e-12);
  }
  const Space s = make_space({25, 5});
  for (int n : {0, 1, 3}) {
    const State in = tensor_product(coherent_state(make_space({25}), {alpha}),
                                    fock_state(make_space({5}), {n}));
    const State out = evolve_pure(h_kerr_cross(s, w, 0.0, k), in, {t}).states[0];
    const State want = tensor_product(
        coherent_state(make_space({25}), {qnd_phase_shift(alpha, w, k, n, t)}),
        fock_state(make_space({5}), {n}));
    CHECK((out.vector() - want.vector()).norm() < 1e-10);
  }
  CHECK_ERRC(qnd_phase_shift(alpha, w, k, -1, t), Errc::parameter);
}

TEST_CASE("phase-matching function") {
  const std::array<double, 3> l{1.0, 2.0, 0.5};
  CHECK(phase_match_h({0, 0, 0}, l) == doctest::Approx(1.0));
  CHECK(std::abs(phase_match_h({2 * kPi / l[0], 0.3, 0.1}, l)) < 1e-15);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> dist(-10.0, 10.0);
  for (int i = 0; i < 50; ++i) {
    const std::array<double, 3> k{dist(rng), dist(rng), dist(rng)};
    const std::array<double, 3> mk{-k[0], -k[1], -k[2]};
    CHECK(phase_match_h(k, l) == doctest::Approx(phase_match_h(mk, l)).epsilon(1e-14));
  }
  // Continuous through the small-argument branch.
  const double z = 1e-4 * (1 + 1e-9);
  CHECK(phase_match_h({z / l[0], 0, 0}, l) ==
        doctest::Approx(phase_match_h({0.999999 * z / l[0], 0, 0}, l)).epsilon(1e-12));
}

TEST_CASE("down-conversion kernel") {
  for (double k0 : {0.5, 1.0, 3.0}) {
    const cplx zero = downconv_kernel(0.0, k0).value;
    CHECK(std::abs(zero - k0 * k0 * k0 / 6) < 1e-8 * k0 * k0 * k0 / 6);
    double prev = 1e300;
    for (int k = 2; k <= 6; ++k) {
      const double eps = std::pow(10.0, -k) / k0;
      const double dev = std::abs(downconv_kernel(eps, k0).value - zero);
      CHECK(dev <= prev);
      prev = dev;
    }
    CHECK(prev < 1e-6 * k0 * k0 * k0);
    // Direct evaluation of the bracket away from the series region.
    for (double dz : {0.7, 5.0, -2.3}) {
      const cplx e = std::polar(1.0, k0 * dz);
      const cplx want =
          cplx(0, 2) * (1.0 - e) / (dz * dz * dz) - k0 * (1.0 + e) / (dz * dz);
      CHECK(std::abs(downconv_kernel(dz, k0).value - want) < 1e-12 * std::abs(want));
      CHECK(std::abs(downconv_kernel(-dz, k0).value - std::conj(downconv_kernel(dz, k0).value)) <
            1e-12 * std::abs(want));
    }
  }
  CHECK_ERRC(downconv_kernel(1.0, 0.0), Errc::parameter);

  const DecayFit fit = fit_kernel_decay(1.0, 50.0, 2000.0);
  CHECK(std::abs(fit.exponent - 2.0) < 0.1);

  SUBCASE("branches swap under detector exchange") {
    const double k0 = 1.3;
    const KernelBranches a = downconv_kernel_symmetrized(0.2, 0.1, 3.0, 0.4, k0);
    const KernelBranches b = downconv_kernel_symmetrized(3.0, 0.4, 0.2, 0.1, k0);
    CHECK(std::abs(a.direct - b.exchanged) < 1e-14);
    CHECK(std::abs(a.exchanged - b.direct) < 1e-14);
    CHECK(std::abs(a.total - (a.direct + a.exchanged)) < 1e-15);
    CHECK(a.delta_z == doctest::Approx(2.5));
  }

  SUBCASE("coarse momentum-space quadrature has the same shape") {
    KernelOracleOptions coarse;
    coarse.n_kz = 200;
    coarse.n_rho = 100;
    const double n0 = std::abs(downconv_kernel_numeric(0.0, 1.0, coarse));
    const double c0 = std::abs(downconv_kernel_symmetrized(0, 0, 0, 0, 1.0).total);
    for (double dz : {1.0, 4.0}) {
      const double rn = std::abs(downconv_kernel_numeric(dz, 1.0, coarse)) / n0;
      const double rc = std::abs(downconv_kernel_symmetrized(0, 0, dz, 0, 1.0).total) / c0;
      CHECK(rn < 1.0);
      CHECK(std::abs(rn - rc) < 0.05);
    }
  }
}
