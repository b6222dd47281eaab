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
#include <vector>

#include "nloq/evolve.hpp"
#include "nloq/fock.hpp"

namespace nloq {

// Slack applied to every strict inequality below.
inline constexpr double kCriterionSlack = 1e-12;

enum class Verdict { inconclusive, nonclassical, entangled };

const char* to_string(Verdict v) noexcept;

struct CriterionReport {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  Verdict verdict = Verdict::inconclusive;
};

// (dn)^2 - <n>; nonclassical below zero.
CriterionReport mandel_excess(const State& s, int mode);

// (dX(phi))^2 with X = (e^{i phi} a^dag + e^{-i phi} a)/2; squeezed below 1/4.
CriterionReport quadrature_squeezing(const State& s, int mode, double phi);

// [d(x_a + x_b)]^2 + [d(p_a - p_b)]^2 with x = (a^dag + a)/sqrt2,
// p = i(a^dag - a)/sqrt2; entangled below 2.
CriterionReport duan_simon_sum(const State& s, int mode_a, int mode_b);

// Product of the two variances above; entangled below 1.
CriterionReport epr_product(const State& s, int mode_a, int mode_b);

// Var(n_a - n_b) - <n_a> - <n_b>; nonclassical below zero.
CriterionReport number_diff_criterion(const State& s, int mode_a, int mode_b);

// value = <Q_o> (odd projector), threshold = <Q'_e> (even projector without
// vacuum); nonclassical when value < threshold.
CriterionReport parity_test(const State& s, int mode);

// max |rho - U rho U^dag| for U = exp(i (pi/n) n_mode).
double rotation_invariance(const State& s, int mode, int n);

// Triangle bounds on number fluctuations implied by a conserved charge
// Q = w_j n_j + w_k n_k:
//   |w_k| dn_k + dQ(0) >= |w_j| dn_j >= | |w_k| dn_k - dQ(0) |.
struct FluctuationSample {
  double time = 0.0;
  double lower = 0.0;
  double middle = 0.0;
  double upper = 0.0;
  double slack = 0.0;  // min(middle - lower, upper - middle)
  bool violated = false;
};

struct FluctuationReport {
  std::string charge;  // two-mode charge actually used, e.g. "M" or "(M2+M1)/2"
  int mode_j = 0;
  int mode_k = 1;
  double weight_j = 1.0;
  double weight_k = 1.0;
  std::vector<FluctuationSample> samples;
  bool any_violation = false;
};

// Evaluates the bounds for a named charge carried by the evolution. A charge
// touching three modes is split into two-mode combinations with another
// two-mode charge of the same evolution (one report each). Violations beyond
// tolerance are flagged per sample.
std::vector<FluctuationReport> fluctuation_bounds(const EvolutionResult& r,
                                                  const std::string& charge,
                                                  double tolerance = 1e-9);

// Q(alpha) = <alpha| rho_mode |alpha> / pi, with the exact (untruncated)
// coherent amplitudes restricted to the mode's dimension.
std::vector<double> husimi_q(const State& s, int mode,
                             const std::vector<cplx>& points);

struct HusimiGrid {
  double re_min = -4.0, re_max = 4.0;
  double im_min = -4.0, im_max = 4.0;
  int n_re = 81, n_im = 81;
};

struct HusimiField {
  std::vector<double> re;
  std::vector<double> im;
  Eigen::MatrixXd q;  // q(i, j) at re[i] + i im[j]
};

HusimiField husimi_q(const State& s, int mode, const HusimiGrid& grid);

}  // namespace nloq
