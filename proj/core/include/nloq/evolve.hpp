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

#include <map>
#include <string>
#include <vector>

#include "nloq/fock.hpp"
#include "nloq/models.hpp"

namespace nloq {

struct EvolutionOptions {
  // Static Hamiltonians below this dimension are diagonalized; larger ones
  // use a sub-stepped Taylor expansion of exp(-iH dt) acting on the vector.
  std::size_t eigen_limit = 512;
  // Adaptive integrator tolerances (time-dependent and Lindblad evolution).
  double abs_tol = 1e-12;
  double rel_tol = 1e-12;
  double norm_tol = 1e-9;
  double trace_tol = 1e-8;
};

struct EvolutionResult {
  std::vector<double> times;
  std::vector<State> states;
  // Expectation value of every model charge at each sample, keyed by name.
  std::map<std::string, std::vector<cplx>> observables;
  std::vector<Charge> charges;

  // Adds <op> at every sample under the given name.
  void record(const std::string& name, const Operator& op);
};

// Evolves from t = 0 to each of the (non-decreasing, non-negative) times.
EvolutionResult evolve_pure(const ModelSpec& model, const State& psi0,
                            const std::vector<double>& times,
                            const EvolutionOptions& opts = {});

EvolutionResult evolve_lindblad(const ModelSpec& model, const State& rho0,
                                const std::vector<double>& times,
                                const EvolutionOptions& opts = {});

// exp(-i H t) psi for a static Hermitian H.
CVec propagate_static(const Operator& h, const CVec& psi, double t,
                      const EvolutionOptions& opts = {});

// L(rho) = -i[H(t), rho] + sum_k gamma_k (2 c rho c^dag - c^dag c rho - rho c^dag c).
CMat apply_liouvillian(const ModelSpec& model, const CMat& rho, double t = 0.0);

// Dense D^2 x D^2 Liouvillian; row-major vectorization, vec(A X B) = (A kron B^T) vec(X).
CMat liouvillian_matrix(const ModelSpec& model);

struct SteadyStateOptions {
  // Spaces with D^2 at or below this use a dense SVD of the Liouvillian;
  // larger spaces use preconditioned GMRES.
  std::size_t dense_limit = 256;
  double residual_tol = 1e-10;
  // Singular values below null_tol * sigma_max count towards the null space.
  double null_tol = 1e-9;
  // Iterative path: solve a second time from a different start and compare.
  bool check_degeneracy = true;
  int gmres_restart = 80;
  int max_iterations = 2000;
};

struct SteadyStateInfo {
  std::string method;
  int iterations = 0;
  double residual = 0.0;
  int null_dimension = 1;
};

State steady_state(const ModelSpec& model, const SteadyStateOptions& opts = {},
                   SteadyStateInfo* info = nullptr);

}  // namespace nloq
