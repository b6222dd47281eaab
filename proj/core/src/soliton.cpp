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

#include "nloq/soliton.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <sstream>

#include <fftw3.h>

namespace nloq {

namespace {

// FFTW planning is not thread-safe; execution of distinct plans is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

class Fft {
 public:
  explicit Fft(int n) : n_(n) {
    buf_ = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
    if (!buf_) throw Error(Errc::numeric, "FFT buffer allocation failed");
    std::lock_guard<std::mutex> lock(planner_mutex());
    fwd_ = fftw_plan_dft_1d(n, buf_, buf_, FFTW_FORWARD, FFTW_ESTIMATE);
    bwd_ = fftw_plan_dft_1d(n, buf_, buf_, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  ~Fft() {
    {
      std::lock_guard<std::mutex> lock(planner_mutex());
      fftw_destroy_plan(fwd_);
      fftw_destroy_plan(bwd_);
    }
    fftw_free(buf_);
  }
  Fft(const Fft&) = delete;
  Fft& operator=(const Fft&) = delete;

  cplx* data() { return reinterpret_cast<cplx*>(buf_); }
  void forward() { fftw_execute(fwd_); }
  // Unnormalized; callers divide by n.
  void backward() { fftw_execute(bwd_); }

 private:
  int n_;
  fftw_complex* buf_ = nullptr;
  fftw_plan fwd_ = nullptr;
  fftw_plan bwd_ = nullptr;
};

std::vector<double> wavenumbers(const Grid& g) {
  std::vector<double> k(g.points);
  const double dk = 2.0 * std::numbers::pi / g.length;
  for (int j = 0; j < g.points; ++j)
    k[j] = dk * (j < g.points / 2 ? j : j - g.points);
  return k;
}

// Spectral derivative of given order (1 or 2).
std::vector<cplx> derivative(const FieldProfile& f, int order) {
  const int n = f.grid.points;
  Fft fft(n);
  std::copy(f.values.begin(), f.values.end(), fft.data());
  fft.forward();
  const std::vector<double> k = wavenumbers(f.grid);
  for (int j = 0; j < n; ++j) {
    if (order == 1)
      fft.data()[j] *= (2 * j == n) ? cplx(0.0) : cplx(0.0, k[j]);
    else
      fft.data()[j] *= -k[j] * k[j];
  }
  fft.backward();
  std::vector<cplx> out(fft.data(), fft.data() + n);
  for (auto& v : out) v /= static_cast<double>(n);
  return out;
}

double off_grid_mass(double kappa, double centre, double half_length) {
  auto tail = [kappa](double d) { return 1.0 / (1.0 + std::exp(2.0 * kappa * d)); };
  return tail(half_length - centre) + tail(half_length + centre);
}

FieldProfile profile_unchecked(int n, double xi, double x0, const FiberParams& p,
                               double t) {
  const double kappa = soliton_kappa(n, p);
  const double w2 = p.omega1_dblprime;
  const double q = 2.0 * xi * std::sqrt(2.0 / w2);
  const double amp = std::sqrt(0.5 * kappa);
  const double phase_t = 0.5 * w2 * (kappa * kappa - q * q) * t;
  FieldProfile f{p.grid, std::vector<cplx>(p.grid.points)};
  for (int j = 0; j < p.grid.points; ++j) {
    const double x = p.grid.x(j);
    const double env = amp / std::cosh(kappa * (x - x0 + w2 * q * t));
    f.values[j] = std::polar(env, -q * (x - x0) + phase_t);
  }
  return f;
}

double centroid(const FieldProfile& f) {
  double m = 0.0, mx = 0.0;
  for (int j = 0; j < f.grid.points; ++j) {
    const double w = std::norm(f.values[j]);
    m += w;
    mx += w * f.grid.x(j);
  }
  return m > 0.0 ? mx / m : 0.0;
}

}  // namespace

void Grid::validate() const {
  if (!(length > 0.0) || !std::isfinite(length))
    throw Error(Errc::parameter, "grid length must be positive");
  if (points < 4 || points % 2)
    throw Error(Errc::parameter, "grid needs an even number (>= 4) of points");
}

void FiberParams::validate() const {
  grid.validate();
  if (!(omega1_dblprime > 0.0))
    throw Error(Errc::parameter, "bound solitons need omega'' > 0");
  if (!(g3 < 0.0)) throw Error(Errc::parameter, "bound solitons need g3 < 0");
}

double FieldProfile::norm() const {
  double s = 0.0;
  for (const auto& v : values) s += std::norm(v);
  return s * grid.dx();
}

double g3_from_fiber(double beta3, double A, double k1, double v1, double eps1) {
  if (!(A > 0.0)) throw Error(Errc::parameter, "mode area must be positive");
  const double s = k1 * v1 * eps1;
  return 3.0 * beta3 / (8.0 * A) * s * s;
}

double soliton_kappa(int n, const FiberParams& p) {
  if (n < 2) throw Error(Errc::parameter, "Hartree solitons need n >= 2 photons");
  p.validate();
  return std::abs(p.g3) * (n - 1) / p.omega1_dblprime;
}

double soliton_period(int n, const FiberParams& p) {
  const double kappa = soliton_kappa(n, p);
  return 4.0 * std::numbers::pi / (p.omega1_dblprime * kappa * kappa);
}

FieldProfile hartree_profile(int n, double xi, double x0, const FiberParams& p,
                             double t) {
  const double kappa = soliton_kappa(n, p);
  const double q = 2.0 * xi * std::sqrt(2.0 / p.omega1_dblprime);
  const double centre = x0 - p.omega1_dblprime * q * t;
  const double lost = off_grid_mass(kappa, centre, 0.5 * p.grid.length);
  if (lost > 1e-8) {
    std::ostringstream os;
    os << "grid of length " << p.grid.length << " leaves " << lost
       << " of the n = " << n << " soliton norm off-grid";
    throw Error(Errc::truncation, os.str());
  }
  return profile_unchecked(n, xi, x0, p, t);
}

double hartree_residual(int n, const FiberParams& p, double t) {
  const FieldProfile h = hartree_profile(n, 0.0, 0.0, p, t);
  const double kappa = soliton_kappa(n, p);
  const double rate = 0.5 * p.omega1_dblprime * kappa * kappa;
  const std::vector<cplx> hxx = derivative(h, 2);
  double worst = 0.0, scale = 0.0;
  for (int j = 0; j < p.grid.points; ++j) {
    const cplx lhs = -rate * h.values[j];  // i dh/dt with dh/dt = i rate h
    const cplx rhs = -0.5 * p.omega1_dblprime * hxx[j] +
                     2.0 * p.g3 * (n - 1) * std::norm(h.values[j]) * h.values[j];
    worst = std::max(worst, std::abs(lhs - rhs));
    scale = std::max(scale, std::abs(lhs));
  }
  return worst / scale;
}

FieldProfile split_step_nlse(const FieldProfile& psi0, const FiberParams& p,
                             double t_final, int n_steps) {
  p.validate();
  if (n_steps < 1) throw Error(Errc::parameter, "split-step needs at least one step");
  if (psi0.grid.points != p.grid.points || psi0.grid.length != p.grid.length ||
      static_cast<int>(psi0.values.size()) != p.grid.points)
    throw Error(Errc::contract, "initial field does not live on the fiber grid");
  const int n = p.grid.points;
  const double dt = t_final / n_steps;
  const std::vector<double> k = wavenumbers(p.grid);
  std::vector<cplx> linear(n);
  for (int j = 0; j < n; ++j)
    linear[j] = std::polar(1.0 / n, -0.5 * p.omega1_dblprime * k[j] * k[j] * dt);

  Fft fft(n);
  cplx* u = fft.data();
  std::copy(psi0.values.begin(), psi0.values.end(), u);
  auto nonlinear = [&](double tau) {
    for (int j = 0; j < n; ++j)
      u[j] *= std::polar(1.0, -2.0 * p.g3 * std::norm(u[j]) * tau);
  };
  nonlinear(0.5 * dt);
  for (int s = 0; s < n_steps; ++s) {
    fft.forward();
    for (int j = 0; j < n; ++j) u[j] *= linear[j];
    fft.backward();
    // Adjacent nonlinear half steps commute and merge.
    nonlinear(s + 1 < n_steps ? dt : 0.5 * dt);
    if ((s % 256 == 255 || s + 1 == n_steps)) {
      for (int j = 0; j < n; ++j)
        if (!std::isfinite(u[j].real()) || !std::isfinite(u[j].imag())) {
          std::ostringstream os;
          os << "split-step field became non-finite by step " << s + 1
             << " (t = " << (s + 1) * dt << ", dt = " << dt << ")";
          throw Error(Errc::numeric, os.str());
        }
    }
  }
  return {p.grid, std::vector<cplx>(u, u + n)};
}

double nlse_energy(const FieldProfile& psi, const FiberParams& p) {
  const std::vector<cplx> dpsi = derivative(psi, 1);
  double e = 0.0;
  for (std::size_t j = 0; j < psi.values.size(); ++j) {
    const double r2 = std::norm(psi.values[j]);
    e += 0.5 * p.omega1_dblprime * std::norm(dpsi[j]) + p.g3 * r2 * r2;
  }
  return e * psi.grid.dx();
}

cplx overlap(const FieldProfile& a, const FieldProfile& b) {
  if (a.values.size() != b.values.size())
    throw Error(Errc::contract, "profiles live on different grids");
  cplx s = 0.0;
  for (std::size_t j = 0; j < a.values.size(); ++j)
    s += std::conj(a.values[j]) * b.values[j];
  return s * a.grid.dx();
}

double aligned_modulus_deviation(const FieldProfile& a, const FieldProfile& b) {
  if (a.values.size() != b.values.size())
    throw Error(Errc::contract, "profiles live on different grids");
  const int n = a.grid.points;
  const double shift = centroid(a) - centroid(b);
  Fft fft(n);
  for (int j = 0; j < n; ++j) fft.data()[j] = std::abs(b.values[j]);
  fft.forward();
  const std::vector<double> k = wavenumbers(a.grid);
  for (int j = 0; j < n; ++j) fft.data()[j] *= std::polar(1.0 / n, -k[j] * shift);
  fft.backward();
  double num = 0.0, den = 0.0;
  for (int j = 0; j < n; ++j) {
    const double ma = std::abs(a.values[j]);
    num += std::pow(ma - fft.data()[j].real(), 2);
    den += ma * ma;
  }
  return std::sqrt(num / den);
}

MeanFieldResult mean_field(cplx alpha, const FiberParams& p, double t) {
  p.validate();
  const double n0 = std::norm(alpha);
  if (!(n0 >= 4.0))
    throw Error(Errc::parameter, "mean field series needs |alpha|^2 >= 4");
  const double spread = 10.0 * std::sqrt(n0);
  MeanFieldResult r;
  r.n_min = std::max(2, static_cast<int>(std::floor(n0 - spread)));
  r.n_max = static_cast<int>(std::ceil(n0 + spread));
  auto weight = [n0](int n) {
    return std::exp(-n0 + n * std::log(n0) - std::lgamma(n + 1.0));
  };
  for (int n = 0; n < r.n_min; ++n) r.tail_bound += weight(n);
  for (int n = r.n_max + 1; n <= r.n_max + 1 + static_cast<int>(5 * spread) + 50; ++n)
    r.tail_bound += weight(n);

  const double g2 = p.g3 * p.g3;
  r.diffusion_parameter = g2 * t * n0 * std::sqrt(n0);
  r.short_time = r.diffusion_parameter < 0.1;

  // e^{-|alpha|^2} |alpha|^{2n}/n! is the Poisson weight; the bare alpha
  // factor carries the phase and the remaining sqrt(n0).
  std::vector<cplx> acc(p.grid.points, 0.0);
  FieldProfile lower = profile_unchecked(r.n_min, 0.0, 0.0, p, t);
  for (int n = r.n_min; n <= r.n_max; ++n) {
    const FieldProfile upper = profile_unchecked(n + 1, 0.0, 0.0, p, t);
    const cplx factor = weight(n) * std::pow(overlap(lower, upper), n);
    for (int j = 0; j < p.grid.points; ++j) acc[j] += factor * upper.values[j];
    lower = upper;
  }
  const cplx carrier = alpha * std::polar(1.0, p.omega1 * t);
  for (auto& v : acc) v *= carrier;
  r.field = {p.grid, std::move(acc)};
  return r;
}

}  // namespace nloq
