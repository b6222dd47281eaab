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

#include "nloq/evolve.hpp"
#include "nloq/fock.hpp"

namespace nloq {

// Degenerate parametric oscillator: signal a, pump b driven at rate E0.
struct DpoParams {
  double kappa = 0.0;
  double E0 = 0.0;
  double gamma_a = 1.0;
  double gamma_b = 1.0;

  double threshold_ratio() const { return kappa * E0 / (gamma_a * gamma_b); }
  void validate() const;
};

enum class BranchKind { below, above_plus, above_minus };

const char* to_string(BranchKind b) noexcept;

struct SteadyBranch {
  cplx alpha0;
  cplx beta0;
  BranchKind branch = BranchKind::below;
  double threshold_ratio = 0.0;
};

// Classical steady states. The below branch is always present; the two
// above branches appear once kappa E0 >= gamma_a gamma_b.
std::vector<SteadyBranch> steady_branches(const DpoParams& p);

// Residuals of the classical steady-state equations at a branch.
std::array<cplx, 2> steady_residual(const DpoParams& p, const SteadyBranch& b);

// Linearization matrix for (d alpha, d alpha*, d beta, d beta*).
Eigen::Matrix4cd linearization_matrix(const DpoParams& p, const SteadyBranch& b);

// Eigenvalues of the linearization, sorted by real part then imaginary part.
std::array<cplx, 4> stability_eigenvalues(const DpoParams& p,
                                          const SteadyBranch& b);

bool is_stable(const std::array<cplx, 4>& eigenvalues);

// The factorized characteristic polynomial evaluated at lambda.
cplx characteristic_polynomial(const DpoParams& p, const SteadyBranch& b,
                               cplx lambda);

struct BelowThresholdMoments {
  double n_fluct = 0.0;    // <da^dag da>
  double a2_fluct = 0.0;   // <(da)^2>
};

// Linearized signal fluctuations; throws a domain error unless the ratio is
// below 1 - 1e-9.
BelowThresholdMoments below_threshold_moments(const DpoParams& p);

// (dX2)^2 = (1/4) gamma_a gamma_b / (gamma_a gamma_b + kappa E0).
// Defined for any ratio strictly below 1; tends to 1/8 at threshold.
double below_threshold_squeezing(const DpoParams& p);

struct DpoLindbladMoments {
  double n_fluct = 0.0;
  cplx a2_fluct;
  double var_x2 = 0.0;
  cplx mean_a;
  cplx mean_b;
  double signal_edge_population = 0.0;  // population in the top signal level
  double pump_edge_population = 0.0;
  SteadyStateInfo info;
};

// Full master-equation steady state on dims {signal_dim, pump_dim}.
DpoLindbladMoments dpo_lindblad_moments(const DpoParams& p, int signal_dim,
                                        int pump_dim,
                                        const SteadyStateOptions& opts = {});

}  // namespace nloq
