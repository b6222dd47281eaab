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

#include <optional>
#include <string>
#include <vector>

#include "nloq/fock.hpp"

namespace nloq {

// Contributes op * exp(-i frequency t) + h.c. to the Hamiltonian.
struct RotatingTerm {
  Operator op;
  double frequency;
};

struct Dissipator {
  Operator op;
  double rate;  // gamma in gamma (2 c rho c^dag - c^dag c rho - rho c^dag c)
};

struct Charge {
  std::string name;
  Operator op;
};

// lab: full Hamiltonian including free-field terms.
// interaction: free-field part removed; phases are relative to the carriers.
enum class Frame { lab, interaction };

struct ModelSpec {
  std::string name;
  Space space;
  Operator hamiltonian;
  std::vector<RotatingTerm> rotating;
  std::vector<Dissipator> dissipators;
  std::vector<Charge> charges;
  Frame frame = Frame::lab;

  bool time_dependent() const noexcept { return !rotating.empty(); }
  Operator hamiltonian_at(double t) const;
  const Operator& charge(const std::string& charge_name) const;

  // Hermiticity of H (and each rotating sum) and [H, M] = 0 for every charge.
  void validate() const;
};

ModelSpec h_two_mode_chi2(const Space& space, double omega, double kappa,
                          StorageOptions opts = {});
// Mode order is (c, a, b): pump c at omega1 + omega2, signal a, idler b.
ModelSpec h_three_mode_chi2(const Space& space, double omega1, double omega2,
                            double kappa, StorageOptions opts = {});
ModelSpec h_kerr_single(const Space& space, double omega, double kappa,
                        StorageOptions opts = {});
ModelSpec h_kerr_cross(const Space& space, double omega1, double omega2,
                       double kappa, StorageOptions opts = {});
ModelSpec h_nphoton(const Space& space, double omega, double kappa_n, int n,
                    StorageOptions opts = {});

// Rotating-frame classical-pump generator i(kappa/2) sqrt(Np)
// [e^{i phi_p} (a^dag)^2 - e^{-i phi_p} a^2] with Np = |beta|^2.
ModelSpec h_parametric_classical_pump(const Space& space, double kappa,
                                      cplx beta, double phi_p,
                                      StorageOptions opts = {});

// Lab-frame classical pump omega a^dag a + kappa [beta e^{-2 i omega t}
// (a^dag)^2 + h.c.], kept as a rotating term.
ModelSpec h_parametric_lab(const Space& space, double omega, double kappa,
                           cplx beta, StorageOptions opts = {});

// Degenerate amplifier with a quantized pump in the interaction frame,
// i(kappa/2)[B (a^dag)^2 - B^dag a^2] with B = beta + b. Mode 0 is the signal,
// mode 1 carries the pump fluctuations around the coherent offset beta; with
// beta = 0 it is the plain two-mode amplifier.
ModelSpec h_degenerate_amplifier(const Space& space, double kappa,
                                 cplx pump_offset = 0.0,
                                 StorageOptions opts = {});

// Driven degenerate parametric oscillator: mode 0 signal a, mode 1 pump b.
ModelSpec dpo_model(const Space& space, double kappa, double E0,
                    double gamma_a, double gamma_b, StorageOptions opts = {});

}  // namespace nloq
