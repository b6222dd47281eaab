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

#include <string>
#include <utility>
#include <vector>

namespace nloq {

// SI units throughout this header.
namespace si {
inline constexpr double epsilon0 = 8.8541878128e-12;  // F/m
inline constexpr double mu0 = 1.25663706212e-6;       // H/m
inline constexpr double hbar = 1.054571817e-34;       // J s
inline constexpr double c = 299792458.0;              // m/s
}  // namespace si

// Two-level medium driven off resonance, rotating-wave approximation.
struct TwoLevelParams {
  double delta = 1.0;      // omega_0 - nu (rad/s)
  double g = 1.0;          // coupling per unit field (rad/s per V/m)
  double E0 = 0.0;         // field amplitude |E0| (V/m)
  double n_density = 1.0;  // atoms per m^3

  double gE() const { return g * E0; }
};

struct MuRoots {
  double mu_plus = 0.0;   // continuous with the ground state as E0 -> 0
  double mu_minus = 0.0;
};

// Roots of mu^2 + delta mu - (gE)^2 = 0, each evaluated without cancellation.
MuRoots two_level_mu(const TwoLevelParams& p);

// Coefficient c in P(t) = c (E0* e^{i nu t} + E0 e^{-i nu t}), exact in E0.
double two_level_polarization(const TwoLevelParams& p);
// Cubic truncation of the same coefficient: n (-hbar g^2/delta
// + 2 hbar g^4 |E0|^2 / delta^3).
double two_level_polarization_series(const TwoLevelParams& p);

// chi1 = -hbar g^2 / (eps0 delta); chi3(-nu, nu, nu) = hbar g^4 / (3 pi eps0 delta^3).
// Both are per-atom in the source convention (multiply by n_density for a
// bulk response). delta = 0 raises a singularity error.
double chi1_two_level(const TwoLevelParams& p);
double chi3_two_level(const TwoLevelParams& p);

struct Tone {
  double frequency = 0.0;  // rad/s
  double amplitude = 0.0;  // coefficient of cos(frequency t)
  std::string label;
};

// Second-order response eps0 chi2 E(t)^2 to E(t) = sum_i E_i cos(w_i t).
// Each input contributes a DC and a second-harmonic line; each pair
// contributes sum and difference lines. Coincident frequencies are kept
// as separate entries.
std::vector<Tone> chi2_mixing_spectrum(const std::vector<Tone>& inputs,
                                       double chi2);

// sum_j amplitude_j cos(frequency_j t).
double synthesize(const std::vector<Tone>& tones, double t);

// chi1 + (3/4) chi3 E0^2.
double effective_chi_kerr(double chi1, double chi3, double E0);

// beta(w) = beta_nu + w beta_nu' + w^2 beta_nu'' / 2 (inverse permittivity).
struct DispersionCoeffs {
  double beta_nu = 1.0 / si::epsilon0;
  double beta_nu_prime = 0.0;
  double beta_nu_dblprime = 0.0;
  double mu0 = si::mu0;

  double beta(double omega) const {
    return beta_nu + omega * beta_nu_prime + 0.5 * omega * omega * beta_nu_dblprime;
  }
};

struct DispersionRoots {
  double omega_plus = 0.0;
  double omega_minus = 0.0;
};

// Roots of mu0 w^2 = k^2 (beta_nu +/- w beta' + w^2 beta''/2).
DispersionRoots dispersion_omega(double k, const DispersionCoeffs& c);

// Relative residuals of both roots in the quadratic above.
std::pair<double, double> dispersion_residuals(double k, const DispersionCoeffs& c);

// Analytic d omega_plus / dk and its central finite difference.
double group_velocity(double k, const DispersionCoeffs& c);
double group_velocity_fd(double k, const DispersionCoeffs& c,
                         double rel_step = 1e-6);

struct ModeNorm {
  double A_k = 0.0;             // [k^4 beta'^2/4 + (mu0 - beta'' k^2/2) k^2 beta_nu]^{1/4}
  double A_k_group = 0.0;       // sqrt(k beta(omega_plus) / v_k)
  double relative_mismatch = 0.0;
};

// Throws a domain error when the radicand is not positive. The two forms
// must agree to 1e-10 relative; a larger mismatch is a numeric error.
ModeNorm mode_norm_Ak(double k, const DispersionCoeffs& c);

}  // namespace nloq
