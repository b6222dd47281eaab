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

#pragma once

#include <vector>

#include "nloq/fock.hpp"

namespace nloq {

// Periodic lattice x_j = -length/2 + j * length/points, j = 0..points-1.
struct Grid {
  double length = 48.0;
  int points = 1024;

  double dx() const { return length / points; }
  double x(int j) const { return -0.5 * length + j * dx(); }
  void validate() const;
};

// Propagation in the frame moving at v1; omega1 only enters the analytic
// carrier phase e^{i omega1 t}.
struct FiberParams {
  double omega1_dblprime = 2.0;
  double g3 = -1.0;
  double v1 = 0.0;
  double omega1 = 0.0;
  Grid grid;

  void validate() const;
};

struct FieldProfile {
  Grid grid;
  std::vector<cplx> values;

  double norm() const;  // sum |psi|^2 dx
};

// g3 = (3 beta3 / 8A) (k1 v1 eps1)^2 with hbar = 1.
double g3_from_fiber(double beta3, double A, double k1, double v1, double eps1);

// Inverse width of the n-photon Hartree soliton, |g3| (n - 1) / omega''.
double soliton_kappa(int n, const FiberParams& p);
// Period of the soliton's internal phase, 4 pi / (omega'' kappa^2).
double soliton_period(int n, const FiberParams& p);

// Normalized Hartree soliton
//   h = sqrt(kappa/2) sech(kappa (x - x0 + omega'' q t))
//       exp(-i q (x - x0) + i (omega''/2)(kappa^2 - q^2) t),  q = 2 xi sqrt(2/omega'').
// Throws a truncation error when more than 1e-8 of the norm lies off-grid.
FieldProfile hartree_profile(int n, double xi, double x0, const FiberParams& p,
                             double t = 0.0);

// Largest |LHS - RHS| of the Hartree equation
// i dh/dt = -(omega''/2) h'' + 2 g3 (n - 1) |h|^2 h at t, relative to the
// largest |dh/dt|, with x-derivatives taken spectrally.
double hartree_residual(int n, const FiberParams& p, double t = 0.0);

// Strang split-step for i psi_t = -(omega''/2) psi_xx + 2 g3 |psi|^2 psi on
// the periodic grid. Negative t_final runs backwards. Steps above
// dx^2 / (pi omega'') resolve the highest grid wavenumber poorly; that is
// the caller's choice.
FieldProfile split_step_nlse(const FieldProfile& psi0, const FiberParams& p,
                             double t_final, int n_steps);

// E = sum [(omega''/2) |psi_x|^2 + g3 |psi|^4] dx, conserved by the flow.
double nlse_energy(const FieldProfile& psi, const FiberParams& p);

// <a|b> = sum conj(a) b dx.
cplx overlap(const FieldProfile& a, const FieldProfile& b);

// L2 distance between |a| and |b| after aligning b's centroid onto a's
// (spectral shift), relative to the L2 norm of |a|.
double aligned_modulus_deviation(const FieldProfile& a, const FieldProfile& b);

struct MeanFieldResult {
  FieldProfile field;
  int n_min = 2;
  int n_max = 2;
  // Poisson weight of omitted photon numbers (below n_min, above n_max).
  double tail_bound = 0.0;
  // g3^2 t n0 sqrt(n0); the short-time regime is diffusion_parameter < 0.1.
  double diffusion_parameter = 0.0;
  bool short_time = true;
};

// <Psi(x)> for a coherent superposition of Hartree solitons,
// alpha e^{-|alpha|^2} sum_n |alpha|^{2n}/n! h_{n+1}(x, t) <h_n|h_{n+1}>^n,
// over n in [max(2, n0 - 10 sqrt n0), n0 + 10 sqrt n0]; n = 0, 1 have no
// bound h_n and are counted in the tail bound. Requires |alpha|^2 >= 4.
MeanFieldResult mean_field(cplx alpha, const FiberParams& p, double t);

}  // namespace nloq
