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

#include "nloq/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace nloq {

const char* to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::nonclassical: return "nonclassical";
    case Verdict::entangled: return "entangled";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

namespace {

void check_pair(const State& s, int a, int b) {
  s.space().check_mode(a);
  s.space().check_mode(b);
  if (a == b) throw Error(Errc::contract, "criterion needs two distinct modes");
}

CriterionReport below(std::string name, double value, double threshold,
                      Verdict hit) {
  return {std::move(name), value, threshold,
          value < threshold - kCriterionSlack ? hit : Verdict::inconclusive};
}

// Var(x_a + x_b) and Var(p_a - p_b) in the sqrt2 convention.
std::pair<double, double> epr_variances(const State& s, int ma, int mb) {
  const Space& sp = s.space();
  const Operator a = annihilation(sp, ma);
  const Operator b = annihilation(sp, mb);
  const double r = 1.0 / std::numbers::sqrt2;
  const Operator x = (r * (a.adjoint() + a + b.adjoint() + b)).as_hermitian();
  const Operator p =
      (cplx(0.0, r) * (a.adjoint() - a - b.adjoint() + b)).as_hermitian();
  return {variance(s, x), variance(s, p)};
}

double stddev(const State& s, const Operator& op) {
  return std::sqrt(std::max(0.0, variance(s, op)));
}

// Per-mode weights of a charge diagonal in the number basis.
std::vector<double> charge_weights(const Operator& q) {
  const Space& sp = q.space();
  const double base = q.element(0, 0).real();
  std::vector<double> w(sp.modes());
  for (int m = 0; m < sp.modes(); ++m) {
    std::vector<int> occ(sp.modes(), 0);
    occ[m] = 1;
    const std::size_t k = sp.flat_index(occ);
    w[m] = q.element(k, k).real() - base;
  }
  return w;
}

std::vector<int> support(const std::vector<double>& w) {
  std::vector<int> s;
  for (int m = 0; m < static_cast<int>(w.size()); ++m)
    if (std::abs(w[m]) > 1e-12) s.push_back(m);
  return s;
}

FluctuationReport two_mode_bounds(const EvolutionResult& r,
                                  const std::string& label, const Operator& q,
                                  int j, int k, double wj, double wk,
                                  double tolerance) {
  FluctuationReport rep;
  rep.charge = label;
  rep.mode_j = j;
  rep.mode_k = k;
  rep.weight_j = wj;
  rep.weight_k = wk;
  const Space& sp = q.space();
  const Operator nj = number_operator(sp, j);
  const Operator nk = number_operator(sp, k);
  const double dq0 = stddev(r.states.front(), q);
  for (std::size_t i = 0; i < r.states.size(); ++i) {
    FluctuationSample smp;
    smp.time = r.times[i];
    const double a = std::abs(wj) * stddev(r.states[i], nj);
    const double b = std::abs(wk) * stddev(r.states[i], nk);
    smp.middle = a;
    smp.lower = std::abs(b - dq0);
    smp.upper = b + dq0;
    smp.slack = std::min(smp.middle - smp.lower, smp.upper - smp.middle);
    smp.violated = smp.slack < -tolerance;
    rep.any_violation = rep.any_violation || smp.violated;
    rep.samples.push_back(smp);
  }
  return rep;
}

}  // namespace

CriterionReport mandel_excess(const State& s, int mode) {
  const Operator n = number_operator(s.space(), mode);
  const double value = variance(s, n) - expectation(s, n).real();
  return below("mandel_excess", value, 0.0, Verdict::nonclassical);
}

CriterionReport quadrature_squeezing(const State& s, int mode, double phi) {
  const double value = variance(s, quadrature(s.space(), mode, phi));
  return below("quadrature_squeezing", value, 0.25, Verdict::nonclassical);
}

CriterionReport duan_simon_sum(const State& s, int mode_a, int mode_b) {
  check_pair(s, mode_a, mode_b);
  const auto [vx, vp] = epr_variances(s, mode_a, mode_b);
  return below("duan_simon_sum", vx + vp, 2.0, Verdict::entangled);
}

CriterionReport epr_product(const State& s, int mode_a, int mode_b) {
  check_pair(s, mode_a, mode_b);
  const auto [vx, vp] = epr_variances(s, mode_a, mode_b);
  return below("epr_product", vx * vp, 1.0, Verdict::entangled);
}

CriterionReport number_diff_criterion(const State& s, int mode_a, int mode_b) {
  check_pair(s, mode_a, mode_b);
  const Operator na = number_operator(s.space(), mode_a);
  const Operator nb = number_operator(s.space(), mode_b);
  const double value = variance(s, (na - nb).as_hermitian()) -
                       expectation(s, na).real() - expectation(s, nb).real();
  return below("number_diff_criterion", value, 0.0, Verdict::nonclassical);
}

CriterionReport parity_test(const State& s, int mode) {
  const State red = partial_trace(s, {mode});
  const CMat& rho = red.matrix();
  double odd = 0.0, even = 0.0;
  for (Eigen::Index n = 1; n < rho.rows(); ++n)
    (n % 2 ? odd : even) += rho(n, n).real();
  return below("parity_test", odd, even, Verdict::nonclassical);
}

double rotation_invariance(const State& s, int mode, int n) {
  if (n < 1) throw Error(Errc::parameter, "symmetry order must be >= 1");
  const Operator u = phase_rotation(s.space(), mode, std::numbers::pi / n);
  const CMat rho = s.density_matrix();
  const CMat rotated = transform(u, s.to_density()).matrix();
  return (rho - rotated).cwiseAbs().maxCoeff();
}

std::vector<FluctuationReport> fluctuation_bounds(const EvolutionResult& r,
                                                  const std::string& charge,
                                                  double tolerance) {
  if (r.states.empty()) return {};
  const Operator* q = nullptr;
  for (const auto& c : r.charges)
    if (c.name == charge) q = &c.op;
  if (!q) throw Error(Errc::contract, "evolution carries no charge '" + charge + "'");

  const std::vector<double> w = charge_weights(*q);
  const std::vector<int> sup = support(w);
  if (sup.size() == 2)
    return {two_mode_bounds(r, charge, *q, sup[0], sup[1], w[sup[0]],
                            w[sup[1]], tolerance)};
  if (sup.size() != 3)
    throw Error(Errc::contract,
                "fluctuation bounds need a charge on two or three modes");

  // Combine with a two-mode companion so each half-sum/difference touches
  // two modes only.
  for (const auto& c : r.charges) {
    if (c.name == charge) continue;
    const std::vector<double> wc = charge_weights(c.op);
    if (support(wc).size() != 2) continue;
    std::vector<FluctuationReport> out;
    for (double sign : {1.0, -1.0}) {
      const Operator k = (0.5 * (*q + sign * c.op)).as_hermitian();
      std::vector<double> wk(w.size());
      for (std::size_t m = 0; m < w.size(); ++m)
        wk[m] = 0.5 * (w[m] + sign * wc[m]);
      const std::vector<int> sk = support(wk);
      if (sk.size() != 2) continue;
      // j is the mode shared with the companion charge.
      const int j = std::abs(wc[sk[0]]) > 1e-12 ? sk[0] : sk[1];
      const int kk = j == sk[0] ? sk[1] : sk[0];
      std::ostringstream label;
      label << "(" << charge << (sign > 0 ? "+" : "-") << c.name << ")/2";
      out.push_back(two_mode_bounds(r, label.str(), k, j, kk, wk[j], wk[kk],
                                    tolerance));
    }
    if (!out.empty()) return out;
  }
  throw Error(Errc::contract,
              "three-mode charge '" + charge + "' has no two-mode companion");
}

std::vector<double> husimi_q(const State& s, int mode,
                             const std::vector<cplx>& points) {
  const State red = partial_trace(s, {mode});
  const CMat& rho = red.matrix();
  const Eigen::Index d = rho.rows();
  std::vector<double> out;
  out.reserve(points.size());
  CVec c(d);
  for (const cplx& alpha : points) {
    if (!std::isfinite(alpha.real()) || !std::isfinite(alpha.imag()))
      throw Error(Errc::parameter, "Husimi grid point is not finite");
    c(0) = std::exp(-0.5 * std::norm(alpha));
    for (Eigen::Index n = 1; n < d; ++n)
      c(n) = c(n - 1) * alpha / std::sqrt(static_cast<double>(n));
    const double q = (c.adjoint() * rho * c)(0, 0).real() / std::numbers::pi;
    out.push_back(q);
  }
  return out;
}

HusimiField husimi_q(const State& s, int mode, const HusimiGrid& g) {
  if (g.n_re < 1 || g.n_im < 1)
    throw Error(Errc::parameter, "Husimi grid needs at least one point per axis");
  HusimiField f;
  auto axis = [](double lo, double hi, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i)
      v[i] = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
    return v;
  };
  f.re = axis(g.re_min, g.re_max, g.n_re);
  f.im = axis(g.im_min, g.im_max, g.n_im);
  std::vector<cplx> pts;
  pts.reserve(static_cast<std::size_t>(g.n_re) * g.n_im);
  for (double x : f.re)
    for (double y : f.im) pts.emplace_back(x, y);
  const std::vector<double> q = husimi_q(s, mode, pts);
  f.q.resize(g.n_re, g.n_im);
  for (int i = 0; i < g.n_re; ++i)
    for (int j = 0; j < g.n_im; ++j) f.q(i, j) = q[static_cast<std::size_t>(i) * g.n_im + j];
  return f;
}

}  // namespace nloq
