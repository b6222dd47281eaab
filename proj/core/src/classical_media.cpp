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

#include "nloq/classical_media.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "nloq/error.hpp"

namespace nloq {

namespace {

void require_detuning(double delta) {
  if (delta == 0.0)
    throw Error(Errc::singularity, "susceptibility is singular at zero detuning");
}

struct DispersionTerms {
  double D;  // mu0 - beta'' k^2 / 2
  double h;  // k^2 beta' / 2
  double R;  // h^2 + D k^2 beta_nu
};

DispersionTerms terms(double k, const DispersionCoeffs& c) {
  DispersionTerms t;
  t.D = c.mu0 - 0.5 * c.beta_nu_dblprime * k * k;
  t.h = 0.5 * k * k * c.beta_nu_prime;
  t.R = t.h * t.h + t.D * k * k * c.beta_nu;
  if (!(t.D > 0.0)) {
    std::ostringstream os;
    os << "mu0 - beta'' k^2/2 = " << t.D << " at k = " << k
       << "; the expansion is invalid here";
    throw Error(Errc::domain, os.str());
  }
  if (!(t.R > 0.0)) {
    std::ostringstream os;
    os << "dispersion radicand " << t.R << " is not positive at k = " << k;
    throw Error(Errc::domain, os.str());
  }
  return t;
}

}  // namespace

MuRoots two_level_mu(const TwoLevelParams& p) {
  const double d = p.delta;
  const double ge2 = p.gE() * p.gE();
  const double root = std::sqrt(d * d + 4.0 * ge2);
  MuRoots m;
  if (d >= 0.0) {
    m.mu_plus = 2.0 * ge2 / (d + root);
    m.mu_minus = -0.5 * (d + root);
  } else {
    m.mu_plus = 0.5 * (root - d);
    m.mu_minus = -2.0 * ge2 / (root - d);
  }
  return m;
}

double two_level_polarization(const TwoLevelParams& p) {
  const double d = p.delta;
  const double ge2 = p.gE() * p.gE();
  const double pre = -p.n_density * si::hbar * p.g * p.g;
  if (d > 0.0) {
    // mu_plus = s (gE)^2 keeps the E0 -> 0 limit finite.
    const double s = 2.0 / (d + std::sqrt(d * d + 4.0 * ge2));
    return pre * s / (1.0 + s * s * ge2);
  }
  if (d == 0.0 && ge2 == 0.0)
    throw Error(Errc::singularity, "polarization is singular at zero detuning and field");
  const double mu = two_level_mu(p).mu_plus;
  return pre * mu / (ge2 + mu * mu);
}

double two_level_polarization_series(const TwoLevelParams& p) {
  require_detuning(p.delta);
  const double d = p.delta, g2 = p.g * p.g;
  return p.n_density * si::hbar *
         (-g2 / d + 2.0 * g2 * g2 * p.E0 * p.E0 / (d * d * d));
}

double chi1_two_level(const TwoLevelParams& p) {
  require_detuning(p.delta);
  return -si::hbar * p.g * p.g / (si::epsilon0 * p.delta);
}

double chi3_two_level(const TwoLevelParams& p) {
  require_detuning(p.delta);
  const double g2 = p.g * p.g;
  return si::hbar * g2 * g2 /
         (3.0 * std::numbers::pi * si::epsilon0 * p.delta * p.delta * p.delta);
}

std::vector<Tone> chi2_mixing_spectrum(const std::vector<Tone>& inputs,
                                       double chi2) {
  std::vector<Tone> out;
  if (chi2 == 0.0) return out;
  const double pre = si::epsilon0 * chi2;
  const std::size_t n = inputs.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double e2 = 0.5 * pre * inputs[i].amplitude * inputs[i].amplitude;
    const std::string tag = std::to_string(i + 1);
    out.push_back({0.0, e2, "dc_" + tag});
    out.push_back({2.0 * inputs[i].frequency, e2, "shg_" + tag});
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double cross = pre * inputs[i].amplitude * inputs[j].amplitude;
      const std::string tag = std::to_string(i + 1) + std::to_string(j + 1);
      out.push_back({inputs[i].frequency + inputs[j].frequency, cross, "sum_" + tag});
      out.push_back({inputs[i].frequency - inputs[j].frequency, cross, "diff_" + tag});
    }
  return out;
}

double synthesize(const std::vector<Tone>& tones, double t) {
  double s = 0.0;
  for (const auto& tone : tones) s += tone.amplitude * std::cos(tone.frequency * t);
  return s;
}

double effective_chi_kerr(double chi1, double chi3, double E0) {
  return chi1 + 0.75 * chi3 * E0 * E0;
}

DispersionRoots dispersion_omega(double k, const DispersionCoeffs& c) {
  const DispersionTerms t = terms(k, c);
  const double sq = std::sqrt(t.R);
  const double kb = k * k * c.beta_nu;
  // Of (sq + h)/D and (sq - h)/D, evaluate the cancelling one through the
  // product of roots instead.
  DispersionRoots r;
  if (t.h >= 0.0) {
    r.omega_plus = (sq + t.h) / t.D;
    r.omega_minus = kb / (sq + t.h);
  } else {
    r.omega_plus = kb / (sq - t.h);
    r.omega_minus = (sq - t.h) / t.D;
  }
  return r;
}

std::pair<double, double> dispersion_residuals(double k, const DispersionCoeffs& c) {
  const DispersionRoots r = dispersion_omega(k, c);
  auto resid = [&](double w, double sign) {
    const double lhs = c.mu0 * w * w;
    const double rhs = k * k *
                       (c.beta_nu + sign * w * c.beta_nu_prime +
                        0.5 * w * w * c.beta_nu_dblprime);
    return std::abs(lhs - rhs) / std::max(std::abs(lhs), std::abs(rhs));
  };
  return {resid(r.omega_plus, 1.0), resid(r.omega_minus, -1.0)};
}

double group_velocity(double k, const DispersionCoeffs& c) {
  // Implicit differentiation of D(k) w^2 - 2 h(k) w - k^2 beta_nu = 0.
  const DispersionTerms t = terms(k, c);
  const double w = dispersion_omega(k, c).omega_plus;
  const double num = k * (c.beta_nu_dblprime * w * w +
                          2.0 * c.beta_nu_prime * w + 2.0 * c.beta_nu);
  return num / (2.0 * (t.D * w - t.h));
}

double group_velocity_fd(double k, const DispersionCoeffs& c, double rel_step) {
  const double h = rel_step * k;
  return (dispersion_omega(k + h, c).omega_plus -
          dispersion_omega(k - h, c).omega_plus) /
         (2.0 * h);
}

ModeNorm mode_norm_Ak(double k, const DispersionCoeffs& c) {
  const DispersionTerms t = terms(k, c);
  ModeNorm m;
  m.A_k = std::pow(t.R, 0.25);
  const double w = dispersion_omega(k, c).omega_plus;
  const double v = group_velocity(k, c);
  m.A_k_group = std::sqrt(k * c.beta(w) / v);
  m.relative_mismatch = std::abs(m.A_k - m.A_k_group) / m.A_k;
  if (!(m.relative_mismatch < 1e-10)) {
    std::ostringstream os;
    os << "mode norm forms disagree by " << m.relative_mismatch
       << " (relative) at k = " << k;
    throw Error(Errc::numeric, os.str());
  }
  return m;
}

}  // namespace nloq
