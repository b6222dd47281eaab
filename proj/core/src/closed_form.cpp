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

#include "nloq/closed_form.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <boost/math/tools/minima.hpp>

namespace nloq {

namespace {

constexpr cplx kI{0.0, 1.0};

void require_photons(double Np) {
  if (!(Np > 0.0) || !std::isfinite(Np))
    throw Error(Errc::parameter, "pump photon number must be positive");
}

// g(x) = int_0^1 s (1 - s) e^{i s x} ds.
cplx kernel_shape(double x) {
  if (std::abs(x) < 2.0) {
    // sum_p (i x)^p (p + 1) / (p + 3)!
    cplx term = 1.0 / 6.0;  // p = 0
    cplx sum = term;
    cplx power = 1.0;
    double fact = 6.0;
    for (int p = 1; p < 40; ++p) {
      power *= kI * x;
      fact *= p + 3;
      term = power * static_cast<double>(p + 1) / fact;
      sum += term;
      if (std::abs(term) < 1e-18) break;
    }
    return sum;
  }
  const cplx e = std::exp(kI * x);
  return 2.0 * kI * (1.0 - e) / (x * x * x) - (1.0 + e) / (x * x);
}

}  // namespace

BogoliubovSolution para_solution(double u, double phi_p) {
  return {std::cosh(u), std::polar(std::sinh(u), phi_p), u, phi_p};
}

QuadratureVariances para_variances(double u, double phi_p) {
  const double up = 0.25 * std::exp(2.0 * u);
  const double dn = 0.25 * std::exp(-2.0 * u);
  const double c2 = std::pow(std::cos(0.5 * phi_p), 2);
  const double s2 = std::pow(std::sin(0.5 * phi_p), 2);
  return {up * c2 + dn * s2, up * s2 + dn * c2};
}

double phase_averaged_var_x2(double u, double Np) {
  require_photons(Np);
  return 0.25 * std::exp(-2.0 * u) + std::exp(2.0 * u) / (64.0 * Np);
}

MaxSqueezing max_squeezing(double Np) {
  require_photons(Np);
  MaxSqueezing m;
  m.u_star = 0.25 * std::log(16.0 * Np);
  m.var_min = 1.0 / (8.0 * std::sqrt(Np));

  // Brent search on a wide bracket, then Newton on the stationarity condition
  // to remove the sqrt(eps) floor of a derivative-free minimizer.
  auto f = [Np](double u) { return phase_averaged_var_x2(u, Np); };
  const double hi = 0.5 * std::log(64.0 * Np) + 5.0;
  auto [u, fu] = boost::math::tools::brent_find_minima(
      f, -5.0, hi, std::numeric_limits<double>::digits);
  for (int it = 0; it < 8; ++it) {
    const double d1 = -0.5 * std::exp(-2.0 * u) + std::exp(2.0 * u) / (32.0 * Np);
    const double d2 = std::exp(-2.0 * u) + std::exp(2.0 * u) / (16.0 * Np);
    const double step = d1 / d2;
    u -= step;
    if (std::abs(step) < 1e-15 * std::max(1.0, std::abs(u))) break;
  }
  (void)fu;
  m.u_numeric = u;
  m.var_numeric = f(u);
  return m;
}

double corrected_var_x2(double u, double Np) {
  require_photons(Np);
  return phase_averaged_var_x2(u, Np) -
         3.0 * std::exp(4.0 * u) / (1024.0 * Np * Np);
}

cplx kerr_mean_amplitude(cplx alpha, double omega, double kappa, double t) {
  return alpha * std::polar(1.0, -omega * t) *
         std::exp(-std::norm(alpha) * (1.0 - std::polar(1.0, -kappa * t)));
}

cplx kerr_mean_amplitude_gaussian(cplx alpha, double omega, double kappa,
                                  double t) {
  const double n = std::norm(alpha);
  const double x = kappa * t * n;
  return alpha * std::polar(std::exp(-0.5 * x * x), -t * (omega + kappa * n));
}

KerrBsExcess kerr_bs_excess(double alpha_mag, double theta, double phi,
                            double r, double eta) {
  KerrBsExcess out;
  const double x = alpha_mag * phi;
  const double psi = eta - theta + alpha_mag * alpha_mag * phi;
  const double a2 = alpha_mag * alpha_mag;
  const double g1 = std::exp(-0.5 * x * x);
  const double g2 = std::exp(-x * x);
  out.value = -4.0 * r * phi * a2 * alpha_mag * g1 * std::sin(psi) +
              2.0 * r * r * a2 * (1.0 - g2) * (1.0 - g2 * std::cos(2.0 * psi));
  if (x > 3.0) {
    std::ostringstream os;
    os << "|alpha| phi = " << x << " exceeds 3; small-phi expansion unreliable";
    out.valid = false;
    out.warning = os.str();
  }
  return out;
}

KerrBsOptimum kerr_bs_optimum(double alpha_mag, double phi, double theta) {
  KerrBsOptimum o;
  const double x = alpha_mag * phi;
  const double a2 = alpha_mag * alpha_mag;
  o.eta = 0.5 * std::numbers::pi + theta - a2 * phi;
  o.mean_n = a2;
  o.mean_n_literature = a2;
  const double denom = 1.0 - std::exp(-2.0 * x * x);
  if (denom > 0.0) {
    // With the phase locked the excess is -A r + B r^2.
    const double A = 4.0 * phi * a2 * alpha_mag * std::exp(-0.5 * x * x);
    const double B = 2.0 * a2 * denom;
    o.r_opt = A / (2.0 * B);
    o.excess = -A * A / (4.0 * B);
    o.mean_n = a2 + o.r_opt * o.r_opt;
    o.excess_literature =
        -2.0 * a2 * alpha_mag * phi * std::exp(-x * x) / denom;
    o.mean_n_literature = a2 + x * std::exp(-0.5 * x * x) / denom;
  }
  const KerrBsExcess check = kerr_bs_excess(alpha_mag, theta, phi, o.r_opt, o.eta);
  o.valid = check.valid;
  o.warning = check.warning;
  return o;
}

cplx qnd_phase_shift(cplx alpha, double omega1, double kappa, int n_b,
                     double t) {
  if (n_b < 0) throw Error(Errc::parameter, "probe photon number must be >= 0");
  return alpha * std::polar(1.0, -t * (omega1 + 0.5 * n_b * kappa));
}

double phase_match_h(const std::array<double, 3>& dk,
                     const std::array<double, 3>& l) {
  double h = 1.0;
  for (int j = 0; j < 3; ++j) {
    const double z = dk[j] * l[j];
    if (std::abs(z) < 1e-4)
      h *= l[j] * (1.0 - z * z / 24.0);
    else
      h *= 2.0 * std::sin(0.5 * z) / dk[j];
  }
  return h;
}

KernelPoint downconv_kernel(double delta_z, double k0) {
  if (!(k0 > 0.0)) throw Error(Errc::parameter, "k0 must be positive");
  return {delta_z, k0, k0 * k0 * k0 * kernel_shape(k0 * delta_z)};
}

KernelBranches downconv_kernel_symmetrized(double z1, double t1, double z2,
                                           double t2, double k0) {
  const double dz = (z2 - z1) - (t2 - t1);
  KernelBranches b;
  b.delta_z = dz;
  b.direct = std::polar(1.0, k0 * (z1 - t1)) * downconv_kernel(dz, k0).value;
  b.exchanged = std::polar(1.0, k0 * (z2 - t2)) * downconv_kernel(-dz, k0).value;
  b.total = b.direct + b.exchanged;
  return b;
}

cplx downconv_kernel_numeric(double delta_z, double k0,
                             const KernelOracleOptions& opts) {
  if (!(k0 > 0.0)) throw Error(Errc::parameter, "k0 must be positive");
  if (opts.n_kz < 2 || opts.n_rho < 2 || !(opts.sigma_rel > 0.0))
    throw Error(Errc::parameter, "invalid kernel oracle grid");
  const double sigma = opts.sigma_rel * k0;
  // The energy mismatch is ~ rho^2 k0 / (2 kz (k0 - kz)) >= 2 rho^2 / k0;
  // integrate out to 6 sigma on the widest slice.
  const double rho_max = 1.1 * std::sqrt(3.0 * sigma * k0);
  const double dkz = k0 / opts.n_kz;
  const double drho = rho_max / opts.n_rho;
  // One-sided Gaussian: the mismatch is non-negative, so the half-line
  // weight is doubled to keep unit mass.
  const double norm = 2.0 / (std::sqrt(2.0 * std::numbers::pi) * sigma);
  cplx sum = 0.0;
  for (int i = 0; i < opts.n_kz; ++i) {
    const double kz = (i + 0.5) * dkz;
    const double kz2 = k0 - kz;
    double w = 0.0;
    for (int j = 0; j < opts.n_rho; ++j) {
      const double rho = (j + 0.5) * drho;
      const double k1 = std::hypot(rho, kz);
      const double k2 = std::hypot(rho, kz2);
      if (k1 >= k0 || k2 >= k0) continue;
      const double mismatch = (k1 + k2 - k0) / sigma;
      w += 2.0 * std::numbers::pi * rho * norm * std::exp(-0.5 * mismatch * mismatch);
    }
    w *= drho * dkz;
    // Detectors on axis at z1 = 0, z2 = delta_z: the direct branch carries
    // e^{i kz dz}, the exchanged one e^{i (k0 - kz) dz}.
    sum += w * (std::polar(1.0, kz * delta_z) + std::polar(1.0, kz2 * delta_z));
  }
  // Transverse integration yields 2 pi kz (k0 - kz) / k0; rescale to the
  // analytic normalization k0^3 int s (1 - s) e^{i s x} ds.
  return sum * (k0 / (2.0 * std::numbers::pi));
}

DecayFit fit_kernel_decay(double k0, double z_min, double z_max, int samples) {
  if (!(z_max > z_min) || !(z_min > 0.0) || samples < 3)
    throw Error(Errc::parameter, "decay fit needs 0 < z_min < z_max");
  std::vector<double> z(samples), v(samples);
  for (int i = 0; i < samples; ++i) {
    z[i] = z_min + (z_max - z_min) * i / (samples - 1);
    v[i] = std::abs(downconv_kernel(z[i], k0).value);
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (int i = 1; i + 1 < samples; ++i) {
    if (v[i] > v[i - 1] && v[i] >= v[i + 1] && v[i] > 0.0) {
      const double lx = std::log(z[i]), ly = std::log(v[i]);
      sx += lx;
      sy += ly;
      sxx += lx * lx;
      sxy += lx * ly;
      ++n;
    }
  }
  if (n < 2) throw Error(Errc::numeric, "too few kernel maxima to fit a decay");
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return {-slope, n};
}

}  // namespace nloq
