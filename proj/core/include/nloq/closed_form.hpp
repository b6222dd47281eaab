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

#include <array>
#include <string>
#include <vector>

#include "nloq/fock.hpp"

namespace nloq {

// Parametric approximation: a(t) = cosh_coeff a(0) + sinh_coeff a^dag(0),
// u = kappa sqrt(Np) t.
struct BogoliubovSolution {
  cplx cosh_coeff;
  cplx sinh_coeff;
  double u = 0.0;
  double phi_p = 0.0;
};

BogoliubovSolution para_solution(double u, double phi_p);

struct QuadratureVariances {
  double var_x1 = 0.25;  // X(0)
  double var_x2 = 0.25;  // X(pi/2)
};

// Vacuum-input quadrature variances under the parametric approximation.
QuadratureVariances para_variances(double u, double phi_p);

// Variance of X2 averaged over the pump phase noise of a coherent pump with
// Np photons: e^{-2u}/4 + e^{2u}/(64 Np).
double phase_averaged_var_x2(double u, double Np);

struct MaxSqueezing {
  double u_star = 0.0;     // (1/4) ln(16 Np)
  double var_min = 0.0;    // 1/(8 sqrt(Np))
  double u_numeric = 0.0;  // independent numerical minimizer
  double var_numeric = 0.0;
};

MaxSqueezing max_squeezing(double Np);

// Adds the leading O(1/Np^2) correction: - 3 e^{4u} / (1024 Np^2).
double corrected_var_x2(double u, double Np);

// <a(t)> for a coherent input under omega n + (kappa/2) a^dag^2 a^2 (exact).
cplx kerr_mean_amplitude(cplx alpha, double omega, double kappa, double t);
// Short-time Gaussian approximation of the same quantity.
cplx kerr_mean_amplitude_gaussian(cplx alpha, double omega, double kappa,
                                  double t);

// Kerr state mixed with a strong coherent field (xi = r e^{i eta}) on a
// beam splitter close to full transmission; photon-number excess of the
// transmitted mode. Valid for phi << 1, |alpha| >> 1, |alpha| phi = O(1).
struct KerrBsExcess {
  double value = 0.0;
  bool valid = true;
  std::string warning;
};

KerrBsExcess kerr_bs_excess(double alpha_mag, double theta, double phi,
                            double r, double eta);

struct KerrBsOptimum {
  double excess = 0.0;   // minimum over r with the phase locked
  double mean_n = 0.0;   // |alpha|^2 + r_opt^2
  double r_opt = 0.0;
  double eta = 0.0;      // pi/2 + theta - |alpha|^2 phi
  // Literature closed forms for comparison. They agree with the derived
  // optimum only at |alpha| phi = 1.
  double excess_literature = 0.0;
  double mean_n_literature = 0.0;
  bool valid = true;
  std::string warning;
};

KerrBsOptimum kerr_bs_optimum(double alpha_mag, double phi, double theta = 0.0);

// Coherent amplitude after cross-Kerr evolution with n_b photons in the
// probe: alpha exp(-i t (omega1 + n_b kappa / 2)).
cplx qnd_phase_shift(cplx alpha, double omega1, double kappa, int n_b,
                     double t);

// prod_j 2 sin(k_j l_j / 2) / k_j with the k_j -> 0 limit l_j.
double phase_match_h(const std::array<double, 3>& dk,
                     const std::array<double, 3>& l);

// Pair-correlation kernel shape for collinear degenerate down conversion.
// value = 2i(1 - e^{i k0 dz})/dz^3 - k0 (1 + e^{i k0 dz})/dz^2 (one branch),
// with the removable singularity at dz = 0 handled by series (limit k0^3/6).
struct KernelPoint {
  double delta_z = 0.0;
  double k0 = 0.0;
  cplx value;
};

KernelPoint downconv_kernel(double delta_z, double k0);

// Both branches of the symmetrized kernel for detectors at z1, z2 with
// retarded times t1, t2 (c = 1): direct carries e^{i k0 (z1 - t1)}, the
// exchanged branch swaps (z1, t1) <-> (z2, t2).
struct KernelBranches {
  double delta_z = 0.0;
  cplx direct;
  cplx exchanged;
  cplx total;
};

KernelBranches downconv_kernel_symmetrized(double z1, double t1, double z2,
                                           double t2, double k0);

struct KernelOracleOptions {
  int n_kz = 400;          // longitudinal momentum samples over (0, k0)
  int n_rho = 200;         // transverse momentum samples
  double sigma_rel = 2e-3; // energy-delta width relative to c k0
};

// Direct quadrature of the momentum-space pair amplitude for on-axis
// detectors at z1 = 0 and z2 = delta_z (equal times), energy delta
// regularized as a Gaussian. Same normalization as downconv_kernel_symmetrized
// up to the regularization error.
cplx downconv_kernel_numeric(double delta_z, double k0,
                             const KernelOracleOptions& opts = {});

struct DecayFit {
  double exponent = 0.0;  // p in |value| ~ dz^{-p}
  int maxima_used = 0;
};

// Fits the decay of the local maxima of |downconv_kernel| over
// [z_min, z_max] by least squares in log-log space.
DecayFit fit_kernel_decay(double k0, double z_min, double z_max,
                          int samples = 20000);

}  // namespace nloq
