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

#include <utility>
#include <vector>

#include "nloq/models.hpp"

namespace nloq::detail {

// Lindblad generator split as L(rho) = A rho + rho A^dag + sum 2 gamma c rho c^dag
// with A = -iH - sum gamma c^dag c.
struct LindbladParts {
  Operator a_static;
  std::vector<RotatingTerm> rotating;
  std::vector<Operator> rotating_adjoint;
  std::vector<std::pair<Operator, double>> jumps;
};

LindbladParts lindblad_parts(const ModelSpec& model);

// Writes L(rho) for Hermitian rho; the result is exactly Hermitian.
void lindblad_rhs(const LindbladParts& p, const CMat& rho, CMat& out, double t);

}  // namespace nloq::detail
