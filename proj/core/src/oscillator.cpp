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

#include "nloq/oscillator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "nloq/models.hpp"

namespace nloq {

const char* to_string(BranchKind b) noexcept {
  switch (b) {
    case BranchKind::below: return "below";
    case BranchKind::above_plus: return "above+";
    case BranchKind::above_minus: return "above-";
  }
  return "below";
}

void DpoParams::validate() const {
  auto bad = [](double v) { return !std::isfinite(v); };
  if (bad(kappa) || bad(E0) || bad(gamma_a) || bad(gamma_b))
    throw Error(Errc::parameter, "oscillator parameters must be finite");
  if (kappa < 0.0 || E0 < 0.0)
    throw Error(Errc::parameter, "kappa and E0 must be non-negative");
  if (!(gamma_a > 0.0) || !(gamma_b > 0.0))
    throw Error(Errc::parameter, "damping rates must be positive");
}

std::vector<SteadyBranch> steady_branches(const DpoParams& p) {
  p.validate();
  const double ratio = p.threshold_ratio();
  std::vector<SteadyBranch> out;
  out.push_back({0.0, p.E0 / p.gamma_b, BranchKind::below, ratio});
  if (ratio >= 1.0 && p.kappa > 0.0) {
    const double amp = std::numbers::sqrt2 / p.kappa *
                       std::sqrt(std::max(0.0, p.E0 * p.kappa - p.gamma_a * p.gamma_b));
    const double beta0 = p.gamma_a / p.kappa;
    out.push_back({amp, beta0, BranchKind::above_plus, ratio});
    out.push_back({-amp, beta0, BranchKind::above_minus, ratio});
  }
  return out;
}

std::array<cplx, 2> steady_residual(const DpoParams& p, const SteadyBranch& b) {
  return {p.kappa * std::conj(b.alpha0) * b.beta0 - p.gamma_a * b.alpha0,
          -0.5 * p.kappa * b.alpha0 * b.alpha0 + p.E0 - p.gamma_b * b.beta0};
}

Eigen::Matrix4cd linearization_matrix(const DpoParams& p, const SteadyBranch& b) {
  const double k = p.kappa;
  const cplx a = b.alpha0, bt = b.beta0;
  Eigen::Matrix4cd m;
  m << -p.gamma_a, k * bt, k * std::conj(a), 0.0,
       k * std::conj(bt), -p.gamma_a, 0.0, k * a,
       -k * a, 0.0, -p.gamma_b, 0.0,
       0.0, -k * std::conj(a), 0.0, -p.gamma_b;
  return m;
}

std::array<cplx, 4> stability_eigenvalues(const DpoParams& p,
                                          const SteadyBranch& b) {
  Eigen::ComplexEigenSolver<Eigen::Matrix4cd> es(linearization_matrix(p, b),
                                                 false);
  if (es.info() != Eigen::Success)
    throw Error(Errc::numeric, "linearization eigenvalue solve failed");
  std::array<cplx, 4> ev;
  for (int i = 0; i < 4; ++i) ev[i] = es.eigenvalues()(i);
  std::sort(ev.begin(), ev.end(), [](cplx x, cplx y) {
    return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
  });
  return ev;
}

bool is_stable(const std::array<cplx, 4>& eigenvalues) {
  return std::all_of(eigenvalues.begin(), eigenvalues.end(),
                     [](cplx l) { return l.real() < 0.0; });
}

cplx characteristic_polynomial(const DpoParams& p, const SteadyBranch& b,
                               cplx lambda) {
  const cplx base = (lambda + p.gamma_a) * (lambda + p.gamma_b) +
                    p.kappa * p.kappa * std::norm(b.alpha0);
  const cplx shift = p.kappa * std::abs(b.beta0) * (lambda + p.gamma_b);
  return (base + shift) * (base - shift);
}

BelowThresholdMoments below_threshold_moments(const DpoParams& p) {
  p.validate();
  const double ratio = p.threshold_ratio();
  if (!(ratio < 1.0 - 1e-9)) {
    std::ostringstream os;
    os << "threshold ratio " << ratio
       << " is not strictly below 1; linearized moments do not apply";
    throw Error(Errc::domain, os.str());
  }
  const double g = p.gamma_a * p.gamma_b;
  const double k = p.kappa * p.E0;
  const double d = 2.0 * (g * g - k * k);
  return {k * k / d, g * k / d};
}

double below_threshold_squeezing(const DpoParams& p) {
  p.validate();
  // Regular up to threshold, unlike the moments, so only ratio < 1 is required.
  if (!(p.threshold_ratio() < 1.0)) {
    std::ostringstream os;
    os << "threshold ratio " << p.threshold_ratio() << " is not below 1; squeezing undefined";
    throw Error(Errc::domain, os.str());
  }
  const double g = p.gamma_a * p.gamma_b;
  return 0.25 * g / (g + p.kappa * p.E0);
}

DpoLindbladMoments dpo_lindblad_moments(const DpoParams& p, int signal_dim,
                                        int pump_dim,
                                        const SteadyStateOptions& opts) {
  p.validate();
  const Space space = make_space({signal_dim, pump_dim});
  const ModelSpec model = dpo_model(space, p.kappa, p.E0, p.gamma_a, p.gamma_b);
  DpoLindbladMoments m;
  const State rho = steady_state(model, opts, &m.info);

  const Operator a = annihilation(space, 0);
  const Operator b = annihilation(space, 1);
  m.mean_a = expectation(rho, a);
  m.mean_b = expectation(rho, b);
  m.n_fluct = expectation(rho, number_operator(space, 0)).real() -
              std::norm(m.mean_a);
  m.a2_fluct = expectation(rho, a * a) - m.mean_a * m.mean_a;
  m.var_x2 = variance(rho, quadrature(space, 0, 0.5 * std::numbers::pi));

  const CMat sig = partial_trace(rho, {0}).matrix();
  const CMat pmp = partial_trace(rho, {1}).matrix();
  m.signal_edge_population = sig(signal_dim - 1, signal_dim - 1).real();
  m.pump_edge_population = pmp(pump_dim - 1, pump_dim - 1).real();
  return m;
}

}  // namespace nloq
