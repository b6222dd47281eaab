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

#include "nloq_tools/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <numbers>
#include <numeric>
#include <random>
#include <thread>

#include "nloq/classical_media.hpp"
#include "nloq/closed_form.hpp"
#include "nloq/diagnostics.hpp"
#include "nloq/error.hpp"
#include "nloq/evolve.hpp"
#include "nloq/fock.hpp"
#include "nloq/models.hpp"
#include "nloq/oscillator.hpp"
#include "nloq/soliton.hpp"
#include "nloq_tools/validation.hpp"

namespace nloq::tools {

namespace {

constexpr double kPi = std::numbers::pi;
const double kNan = std::numeric_limits<double>::quiet_NaN();

using Row = std::vector<Cell>;

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = n == 1 ? a : a + (b - a) * i / (n - 1);
  return v;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError(what);
}

// Runs f(i) for i in [0, n) on `threads` workers. A nonzero seed shuffles
// the evaluation order; callers key results by index so output is unchanged.
template <class F>
void parallel_for(std::size_t n, int threads, std::uint64_t seed, F&& f) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  if (seed != 0) std::shuffle(order.begin(), order.end(), std::mt19937_64(seed));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex m;
  auto worker = [&] {
    for (std::size_t k = next++; k < n; k = next++) {
      try {
        f(order[k]);
      } catch (...) {
        std::lock_guard<std::mutex> lock(m);
        if (!failure) failure = std::current_exception();
        next = n;
      }
    }
  };
  const int count = std::max(1, std::min<int>(threads, static_cast<int>(n)));
  std::vector<std::thread> pool;
  for (int t = 1; t < count; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

struct Common {
  std::uint64_t seed = 0;
};

Common read_common(const Config& c) {
  Common out;
  const int seed = c.get_int("run", "seed", 0);
  require(seed >= 0, "run.seed must be non-negative");
  out.seed = static_cast<std::uint64_t>(seed);
  return out;
}

void finish_reading(const Config& c, const std::string& command) {
  c.restrict_sections({command, "run"});
  c.check_all_used();
}

// ---------------------------------------------------------------- squeeze

ScenarioResult cmd_squeeze(const Config& c, const RunContext&) {
  const std::string s = "squeeze";
  const std::vector<double> nps = c.get_list(s, "Np", {1e4});
  const double u_max = c.get_double(s, "u_max", 1.0);
  const int u_points = c.get_int(s, "u_points", 21);
  const double phi_p = c.get_double(s, "phi_p", 0.0);
  const bool fock = c.get_bool(s, "fock", false);
  const double kappa = c.get_double(s, "kappa", 0.025);
  const int signal_dim = c.get_int(s, "signal_dim", 40);
  const int pump_dim = c.get_int(s, "pump_dim", 60);
  read_common(c);
  finish_reading(c, s);
  require(!nps.empty(), "squeeze.Np needs at least one value");
  for (double np : nps) require(np > 0.0, "squeeze.Np values must be positive");
  require(u_max >= 0.0 && u_points >= 2, "squeeze needs u_max >= 0 and u_points >= 2");
  if (fock)
    require(kappa > 0.0 && signal_dim >= 2 && pump_dim >= 2,
            "squeeze.fock needs kappa > 0 and dims >= 2");

  ScenarioResult r;
  r.command = s;
  r.modules = {"closed_form"};
  Table var("variances", {{"Np", "photons"},
                          {"u", "1"},
                          {"phi_p", "rad"},
                          {"var_x1", "1"},
                          {"var_x2", "1"},
                          {"var_x2_phase_averaged", "1"},
                          {"var_x2_corrected", "1"}});
  Table best("max_squeezing", {{"Np", "photons"},
                               {"u_star", "1"},
                               {"var_min", "1"},
                               {"u_numeric", "1"},
                               {"var_numeric", "1"},
                               {"var_min_times_8_sqrt_Np", "1"}});
  for (double np : nps) {
    for (double u : linspace(0.0, u_max, u_points)) {
      const QuadratureVariances v = para_variances(u, phi_p);
      var.add_row({np, u, phi_p, v.var_x1, v.var_x2, phase_averaged_var_x2(u, np),
                   corrected_var_x2(u, np)});
    }
    const MaxSqueezing m = max_squeezing(np);
    best.add_row({np, m.u_star, m.var_min, m.u_numeric, m.var_numeric,
                  m.var_numeric * 8.0 * std::sqrt(np)});
    r.summary["var_min"][format_number(np)] = m.var_min;
  }
  r.tables.push_back(std::move(var));
  r.tables.push_back(std::move(best));

  if (fock) {
    r.modules.push_back("models");
    r.modules.push_back("evolve");
    const double np = nps.front();
    const Space space = make_space({signal_dim, pump_dim});
    const ModelSpec model =
        h_degenerate_amplifier(space, kappa, std::polar(std::sqrt(np), phi_p));
    const std::vector<double> us = linspace(0.0, u_max, u_points);
    std::vector<double> times;
    for (double u : us) times.push_back(u / (kappa * std::sqrt(np)));
    const EvolutionResult ev = evolve_pure(model, fock_state(space, {0, 0}), times);
    const Operator x1 = quadrature(space, 0, 0.0), x2 = quadrature(space, 0, 0.5 * kPi);
    Table t("fock", {{"u", "1"},
                     {"t", "s"},
                     {"var_x1_fock", "1"},
                     {"var_x2_fock", "1"},
                     {"var_x1_closed", "1"},
                     {"var_x2_closed", "1"},
                     {"signal_edge_population", "1"}});
    for (std::size_t i = 0; i < us.size(); ++i) {
      const QuadratureVariances v = para_variances(us[i], phi_p);
      const CMat rho_s = partial_trace(ev.states[i], {0}).matrix();
      t.add_row({us[i], times[i], variance(ev.states[i], x1), variance(ev.states[i], x2),
                 v.var_x1, v.var_x2, rho_s(signal_dim - 1, signal_dim - 1).real()});
    }
    r.tables.push_back(std::move(t));
  }
  return r;
}

// --------------------------------------------------------------- entangle

ScenarioResult cmd_entangle(const Config& c, const RunContext&) {
  const std::string s = "entangle";
  const int points = c.get_int(s, "points", 181);
  const int dim = c.get_int(s, "dim", 3);
  read_common(c);
  finish_reading(c, s);
  require(points >= 3, "entangle.points must be >= 3");
  require(dim >= 2, "entangle.dim must be >= 2");

  const Space space = make_space({dim, dim});
  auto state_at = [&](double theta) {
    CVec psi = CVec::Zero(static_cast<Eigen::Index>(space.total()));
    psi(static_cast<Eigen::Index>(space.flat_index({0, 0}))) = std::cos(theta);
    psi(static_cast<Eigen::Index>(space.flat_index({1, 1}))) = std::sin(theta);
    return State::pure(space, psi);
  };
  ScenarioResult r;
  r.command = s;
  r.modules = {"fock", "diagnostics"};
  Table t("scan", {{"theta", "rad"},
                   {"c0", "1"},
                   {"c1", "1"},
                   {"duan_sum", "1"},
                   {"epr_product", "1"},
                   {"verdict", "label"}});
  for (double theta : linspace(0.0, kPi, points)) {
    const State st = state_at(theta);
    const CriterionReport d = duan_simon_sum(st, 0, 1);
    t.add_row({theta, std::cos(theta), std::sin(theta), d.value,
               epr_product(st, 0, 1).value, std::string(to_string(d.verdict))});
  }
  r.tables.push_back(std::move(t));

  // The sum is sinusoidal in 2 theta on this family; three samples fix it.
  auto f = [&](double th) { return duan_simon_sum(state_at(th), 0, 1).value; };
  const double f0 = f(0.0), f1 = f(kPi / 4.0), f2 = f(kPi / 2.0);
  const double a = 0.5 * (f0 + f2), b = 0.5 * (f0 - f2), cc = f1 - a;
  double theta = 0.5 * std::atan2(-cc, -b);
  const double sign = std::cos(theta) < 0.0 ? -1.0 : 1.0;
  r.summary["minimum"] = f(theta);
  r.summary["minimum_reference"] = 4.0 - 2.0 * std::numbers::sqrt2;
  r.summary["c0_at_minimum"] = sign * std::cos(theta);
  r.summary["c1_at_minimum"] = sign * std::sin(theta);
  return r;
}

// ------------------------------------------------------------------- kerr

ScenarioResult cmd_kerr(const Config& c, const RunContext&) {
  const std::string s = "kerr";
  const double alpha_mag = c.get_double(s, "alpha", 2.0);
  const double alpha_phase = c.get_double(s, "alpha_phase", 0.0);
  const int dim = c.get_int(s, "dim", 50);
  const double omega = c.get_double(s, "omega", 0.0);
  const double kappa = c.get_double(s, "kappa", 1.0);
  const double t_max = c.get_double(s, "t_max", 2.0 * kPi);
  const int samples = c.get_int(s, "samples", 100);
  const double bs_phi = c.get_double(s, "bs_phi", 0.25);
  const bool bs_pipeline = c.get_bool(s, "bs_pipeline", false);
  const int bs_dim = c.get_int(s, "bs_dim", 60);
  read_common(c);
  finish_reading(c, s);
  require(alpha_mag >= 0.0, "kerr.alpha must be non-negative");
  require(dim >= 2 && samples >= 1 && t_max >= 0.0, "kerr needs dim >= 2, samples >= 1, t_max >= 0");
  require(bs_phi > 0.0 && bs_dim >= 2, "kerr needs bs_phi > 0 and bs_dim >= 2");

  const cplx alpha = std::polar(alpha_mag, alpha_phase);
  const Space space = make_space({dim});
  // Validates the truncation before evolving.
  const State psi0 = coherent_state(space, {alpha});
  if (bs_pipeline) coherent_state(make_space({bs_dim}), {alpha});

  ScenarioResult r;
  r.command = s;
  r.modules = {"models", "evolve", "closed_form", "diagnostics"};
  const std::vector<double> times = linspace(0.0, t_max, samples);
  EvolutionResult ev = evolve_pure(h_kerr_single(space, omega, kappa), psi0, times);
  ev.record("a", annihilation(space, 0));
  Table t("mean", {{"t", "s"},
                   {"re_closed", "sqrt(photons)"},
                   {"im_closed", "sqrt(photons)"},
                   {"re_fock", "sqrt(photons)"},
                   {"im_fock", "sqrt(photons)"},
                   {"abs_error", "sqrt(photons)"},
                   {"re_gaussian", "sqrt(photons)"},
                   {"im_gaussian", "sqrt(photons)"}});
  double worst = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const cplx closed = kerr_mean_amplitude(alpha, omega, kappa, times[i]);
    const cplx fock = ev.observables.at("a")[i];
    const cplx gauss = kerr_mean_amplitude_gaussian(alpha, omega, kappa, times[i]);
    worst = std::max(worst, std::abs(closed - fock));
    t.add_row({times[i], closed.real(), closed.imag(), fock.real(), fock.imag(),
               std::abs(closed - fock), gauss.real(), gauss.imag()});
  }
  r.tables.push_back(std::move(t));
  r.summary["max_abs_error"] = worst;

  const KerrBsOptimum opt = kerr_bs_optimum(alpha_mag, bs_phi);
  double pipeline = kNan;
  if (bs_pipeline) {
    const Space one = make_space({bs_dim});
    const EvolutionResult k = evolve_pure(h_kerr_single(one, 0.0, 1.0),
                                          coherent_state(one, {alpha_mag}), {bs_phi});
    const double R = opt.r_opt * opt.r_opt / (alpha_mag * alpha_mag);
    const cplx b = std::polar(opt.r_opt / std::sqrt(R), opt.eta);
    const State in = tensor_product(k.states.back(), coherent_state(one, {b}));
    const State out = transform(beam_splitter(make_space({bs_dim, bs_dim}), 1.0 - R, 0, 1), in);
    pipeline = mandel_excess(out, 0).value;
  }
  Table bs("bs_optimum", {{"alpha_mag", "sqrt(photons)"},
                          {"phi", "rad"},
                          {"r_opt", "sqrt(photons)"},
                          {"eta", "rad"},
                          {"excess", "photons"},
                          {"mean_n", "photons"},
                          {"excess_literature", "photons"},
                          {"mean_n_literature", "photons"},
                          {"valid", "flag"},
                          {"pipeline_excess", "photons"}});
  bs.add_row({alpha_mag, bs_phi, opt.r_opt, opt.eta, opt.excess, opt.mean_n,
              opt.excess_literature, opt.mean_n_literature,
              static_cast<long long>(opt.valid), pipeline});
  r.tables.push_back(std::move(bs));
  if (!opt.warning.empty()) r.summary["warning"] = opt.warning;
  return r;
}

// ------------------------------------------------------------- oscillator

ScenarioResult cmd_oscillator(const Config& c, const RunContext& ctx) {
  const std::string s = "oscillator";
  DpoParams base;
  base.kappa = c.get_double(s, "kappa", 0.5);
  base.gamma_a = c.get_double(s, "gamma_a", 1.0);
  base.gamma_b = c.get_double(s, "gamma_b", 10.0);
  const double ratio_min = c.get_double(s, "ratio_min", 0.05);
  const double ratio_max = c.get_double(s, "ratio_max", 1.0);
  const int ratio_points = c.get_int(s, "ratio_points", 20);
  const std::vector<double> lindblad = c.get_list(s, "lindblad_ratios", {});
  const int signal_dim = c.get_int(s, "signal_dim", 25);
  const int pump_dim = c.get_int(s, "pump_dim", 15);
  const Common common = read_common(c);
  finish_reading(c, s);
  base.validate();
  require(base.kappa > 0.0, "oscillator.kappa must be positive");
  require(ratio_min >= 0.0 && ratio_max >= ratio_min && ratio_points >= 1,
          "oscillator needs 0 <= ratio_min <= ratio_max and ratio_points >= 1");
  for (double x : lindblad)
    require(x >= 0.0 && x < 1.0, "oscillator.lindblad_ratios must lie in [0, 1)");
  require(signal_dim >= 2 && pump_dim >= 2, "oscillator dims must be >= 2");

  auto at_ratio = [&](double ratio) {
    DpoParams p = base;
    p.E0 = ratio * p.gamma_a * p.gamma_b / p.kappa;
    return p;
  };
  const std::vector<double> ratios = linspace(ratio_min, ratio_max, ratio_points);
  std::vector<std::vector<Row>> rows(ratios.size());
  parallel_for(ratios.size(), ctx.threads, common.seed, [&](std::size_t i) {
    const DpoParams p = at_ratio(ratios[i]);
    for (const SteadyBranch& b : steady_branches(p)) {
      const auto ev = stability_eigenvalues(p, b);
      double n_fl = kNan, a2_fl = kNan, sq = kNan;
      if (b.branch == BranchKind::below) {
        const double ratio = p.threshold_ratio();
        if (ratio < 1.0 - 1e-9) {
          const BelowThresholdMoments m = below_threshold_moments(p);
          n_fl = m.n_fluct;
          a2_fl = m.a2_fluct;
          sq = below_threshold_squeezing(p);
        } else if (ratio <= 1.0) {
          // Moments diverge here; the squeezing is continued to threshold.
          sq = ratio < 1.0 ? below_threshold_squeezing(p)
                           : below_threshold_squeezing(at_ratio(1.0 - 1e-12));
          n_fl = std::numeric_limits<double>::infinity();
          a2_fl = std::numeric_limits<double>::infinity();
        }
      }
      rows[i].push_back({ratios[i], p.E0, std::string(to_string(b.branch)),
                         b.alpha0.real(), b.beta0.real(), ev[3].real(),
                         static_cast<long long>(is_stable(ev)), n_fl, a2_fl, sq});
    }
  });
  ScenarioResult r;
  r.command = s;
  r.modules = {"oscillator"};
  Table t("sweep", {{"threshold_ratio", "1"},
                    {"E0", "rad/s"},
                    {"branch", "label"},
                    {"alpha0", "sqrt(photons)"},
                    {"beta0", "sqrt(photons)"},
                    {"max_re_eigenvalue", "rad/s"},
                    {"stable", "flag"},
                    {"n_fluct", "photons"},
                    {"a2_fluct", "photons"},
                    {"squeezing_var_x2", "1"}});
  for (auto& group : rows)
    for (auto& row : group) t.add_row(std::move(row));
  r.tables.push_back(std::move(t));
  r.summary["squeezing_limit_at_threshold"] = below_threshold_squeezing(at_ratio(1.0 - 1e-12));

  if (!lindblad.empty()) {
    r.modules.push_back("models");
    r.modules.push_back("evolve");
    Table l("lindblad", {{"threshold_ratio", "1"},
                         {"n_fluct_lindblad", "photons"},
                         {"n_fluct_linearized", "photons"},
                         {"var_x2_lindblad", "1"},
                         {"var_x2_linearized", "1"},
                         {"signal_edge_population", "1"},
                         {"pump_edge_population", "1"},
                         {"residual", "rad/s"},
                         {"method", "label"}});
    std::vector<Row> lrows(lindblad.size());
    parallel_for(lindblad.size(), ctx.threads, common.seed, [&](std::size_t i) {
      const DpoParams p = at_ratio(lindblad[i]);
      const DpoLindbladMoments m = dpo_lindblad_moments(p, signal_dim, pump_dim);
      const BelowThresholdMoments lin = below_threshold_moments(p);
      lrows[i] = {lindblad[i], m.n_fluct, lin.n_fluct, m.var_x2,
                  below_threshold_squeezing(p), m.signal_edge_population,
                  m.pump_edge_population, m.info.residual, m.info.method};
    });
    for (auto& row : lrows) l.add_row(std::move(row));
    r.tables.push_back(std::move(l));
  }
  return r;
}

// ---------------------------------------------------------------- nphoton

ScenarioResult cmd_nphoton(const Config& c, const RunContext&) {
  const std::string s = "nphoton";
  const int n = c.get_int(s, "n", 3);
  const double omega = c.get_double(s, "omega", 1.0);
  const double kappa = c.get_double(s, "kappa", 0.1);
  const double pump_alpha = c.get_double(s, "pump_alpha", 1.5);
  const int signal_dim = c.get_int(s, "signal_dim", 36);
  const int pump_dim = c.get_int(s, "pump_dim", 18);
  const double t_max = c.get_double(s, "t_max", 5.0);
  const int samples = c.get_int(s, "samples", 51);
  const double radius = c.get_double(s, "husimi_radius", 4.0);
  const int husimi_points = c.get_int(s, "husimi_points", 81);
  read_common(c);
  finish_reading(c, s);
  require(samples >= 1 && t_max >= 0.0, "nphoton needs samples >= 1 and t_max >= 0");
  require(radius > 0.0 && husimi_points >= 2, "nphoton needs husimi_radius > 0, husimi_points >= 2");

  const Space space = make_space({signal_dim, pump_dim});
  const ModelSpec model = h_nphoton(space, omega, kappa, n);
  const State psi0 = coherent_state(space, {0.0, pump_alpha});

  ScenarioResult r;
  r.command = s;
  r.modules = {"models", "evolve", "diagnostics"};
  const std::vector<double> times = linspace(0.0, t_max, samples);
  EvolutionResult ev = evolve_pure(model, psi0, times);
  ev.record("n_signal", number_operator(space, 0));
  ev.record("n_pump", number_operator(space, 1));
  const std::string charge = model.charges.front().name;

  // Rotation of the signal by 2 pi / n leaves the reduced state unchanged.
  const Space sig = make_space({signal_dim});
  const Operator rot = phase_rotation(sig, 0, 2.0 * kPi / n);
  Table t("series", {{"t", "s"},
                     {"n_signal", "photons"},
                     {"n_pump", "photons"},
                     {"charge", "photons"},
                     {"rotation_deviation", "1"},
                     {"signal_edge_population", "1"}});
  double worst_rot = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const State red = partial_trace(ev.states[i], {0});
    const CMat rho = red.matrix();
    const CMat u = rot.dense();
    const double dev = (rho - u * rho * u.adjoint()).cwiseAbs().maxCoeff();
    worst_rot = std::max(worst_rot, dev);
    t.add_row({times[i], ev.observables.at("n_signal")[i].real(),
               ev.observables.at("n_pump")[i].real(), ev.observables.at(charge)[i].real(),
               dev, rho(signal_dim - 1, signal_dim - 1).real()});
  }
  r.tables.push_back(std::move(t));

  HusimiGrid g;
  g.re_min = g.im_min = -radius;
  g.re_max = g.im_max = radius;
  g.n_re = g.n_im = husimi_points;
  const HusimiField q = husimi_q(ev.states.back(), 0, g);
  Table h("husimi", {{"re_alpha", "sqrt(photons)"}, {"im_alpha", "sqrt(photons)"}, {"q", "1"}});
  for (int i = 0; i < g.n_re; ++i)
    for (int j = 0; j < g.n_im; ++j) h.add_row({q.re[i], q.im[j], q.q(i, j)});
  r.tables.push_back(std::move(h));
  r.summary["max_rotation_deviation"] = worst_rot;
  return r;
}

// ----------------------------------------------------------------- medium

ScenarioResult cmd_medium(const Config& c, const RunContext&) {
  const std::string s = "medium";
  TwoLevelParams p;
  p.delta = c.get_double(s, "delta", 1e9);
  p.g = c.get_double(s, "g", 1e4);
  p.n_density = c.get_double(s, "n_density", 1e22);
  const double e_min = c.get_double(s, "E0_min", 1e2);
  const double e_max = c.get_double(s, "E0_max", 1e4);
  const int e_points = c.get_int(s, "E0_points", 21);
  const bool log_spacing = c.get_bool(s, "log_spacing", true);
  const double chi2 = c.get_double(s, "chi2", 0.0);
  const std::vector<double> freqs = c.get_list(s, "tone_frequencies", {});
  const std::vector<double> amps = c.get_list(s, "tone_amplitudes", {});
  read_common(c);
  finish_reading(c, s);
  require(p.delta != 0.0, "medium.delta must be nonzero (susceptibilities are singular)");
  require(e_min > 0.0 && e_max >= e_min && e_points >= 1,
          "medium needs 0 < E0_min <= E0_max and E0_points >= 1");
  require(freqs.size() == amps.size(), "medium tone lists must have equal length");

  ScenarioResult r;
  r.command = s;
  r.modules = {"classical_media"};
  Table t("response", {{"E0", "V/m"},
                       {"polarization_exact", "C/m^2"},
                       {"polarization_series", "C/m^2"},
                       {"difference", "C/m^2"},
                       {"chi1", "m^3"},
                       {"chi3", "m^5/V^2"},
                       {"chi_eff", "m^3"}});
  std::vector<double> es = log_spacing ? linspace(std::log(e_min), std::log(e_max), e_points)
                                       : linspace(e_min, e_max, e_points);
  if (log_spacing)
    for (double& e : es) e = std::exp(e);
  const double chi1 = chi1_two_level(p), chi3 = chi3_two_level(p);
  for (double e : es) {
    TwoLevelParams q = p;
    q.E0 = e;
    const double exact = e * two_level_polarization(q);
    const double series = e * two_level_polarization_series(q);
    t.add_row({e, exact, series, exact - series, chi1, chi3, effective_chi_kerr(chi1, chi3, e)});
  }
  r.tables.push_back(std::move(t));

  if (!freqs.empty()) {
    std::vector<Tone> in;
    for (std::size_t i = 0; i < freqs.size(); ++i) in.push_back({freqs[i], amps[i], ""});
    Table m("mixing", {{"label", "label"}, {"frequency", "rad/s"}, {"amplitude", "C/m^2"}});
    for (const Tone& tone : chi2_mixing_spectrum(in, chi2))
      m.add_row({tone.label, tone.frequency, tone.amplitude});
    r.tables.push_back(std::move(m));
  }
  r.summary["chi1"] = chi1;
  r.summary["chi3"] = chi3;
  return r;
}

// ------------------------------------------------------------- dispersion

ScenarioResult cmd_dispersion(const Config& c, const RunContext& ctx) {
  const std::string s = "dispersion";
  DispersionCoeffs d;
  d.beta_nu = c.get_double(s, "beta_nu", d.beta_nu);
  d.beta_nu_prime = c.get_double(s, "beta_nu_prime", d.beta_nu_prime);
  d.beta_nu_dblprime = c.get_double(s, "beta_nu_dblprime", d.beta_nu_dblprime);
  d.mu0 = c.get_double(s, "mu0", d.mu0);
  const double k_min = c.get_double(s, "k_min", 1e6);
  const double k_max = c.get_double(s, "k_max", 1e7);
  const int k_points = c.get_int(s, "k_points", 100);
  const Common common = read_common(c);
  finish_reading(c, s);
  require(k_min > 0.0 && k_max >= k_min && k_points >= 1,
          "dispersion needs 0 < k_min <= k_max and k_points >= 1");
  require(d.beta_nu > 0.0 && d.mu0 > 0.0, "dispersion needs beta_nu > 0 and mu0 > 0");

  const std::vector<double> ks = linspace(k_min, k_max, k_points);
  for (double k : ks) dispersion_omega(k, d);  // domain check up front
  std::vector<Row> rows(ks.size());
  parallel_for(ks.size(), ctx.threads, common.seed, [&](std::size_t i) {
    const double k = ks[i];
    const DispersionRoots w = dispersion_omega(k, d);
    const auto [rp, rm] = dispersion_residuals(k, d);
    const ModeNorm m = mode_norm_Ak(k, d);
    rows[i] = {k, w.omega_plus, w.omega_minus, m.A_k, group_velocity(k, d),
               group_velocity_fd(k, d), rp, rm, m.relative_mismatch};
  });
  ScenarioResult r;
  r.command = s;
  r.modules = {"classical_media"};
  Table t("sweep", {{"k", "1/m"},
                    {"omega_plus", "rad/s"},
                    {"omega_minus", "rad/s"},
                    {"A_k", "(ohm/m)^(1/2)"},
                    {"v_k", "m/s"},
                    {"v_k_fd", "m/s"},
                    {"residual_plus", "1"},
                    {"residual_minus", "1"},
                    {"A_k_mismatch", "1"}});
  for (auto& row : rows) t.add_row(std::move(row));
  r.tables.push_back(std::move(t));
  return r;
}

// --------------------------------------------------------------- downconv

ScenarioResult cmd_downconv(const Config& c, const RunContext& ctx) {
  const std::string s = "downconv";
  const double k0 = c.get_double(s, "k0", 1.0);
  const double dz_min = c.get_double(s, "dz_min", -20.0);
  const double dz_max = c.get_double(s, "dz_max", 20.0);
  const int points = c.get_int(s, "points", 201);
  const double fit_min = c.get_double(s, "fit_z_min", 50.0);
  const double fit_max = c.get_double(s, "fit_z_max", 2000.0);
  const bool numeric = c.get_bool(s, "numeric", false);
  const int numeric_points = c.get_int(s, "numeric_points", 21);
  KernelOracleOptions oracle;
  oracle.n_kz = c.get_int(s, "n_kz", oracle.n_kz);
  oracle.n_rho = c.get_int(s, "n_rho", oracle.n_rho);
  oracle.sigma_rel = c.get_double(s, "sigma_rel", oracle.sigma_rel);
  const Common common = read_common(c);
  finish_reading(c, s);
  require(k0 > 0.0, "downconv.k0 must be positive");
  require(dz_max >= dz_min && points >= 1, "downconv needs dz_min <= dz_max and points >= 1");
  require(fit_min > 0.0 && fit_max > fit_min, "downconv needs 0 < fit_z_min < fit_z_max");
  require(numeric_points >= 1 && oracle.n_kz >= 2 && oracle.n_rho >= 2 && oracle.sigma_rel > 0.0,
          "downconv numeric grid is invalid");

  ScenarioResult r;
  r.command = s;
  r.modules = {"closed_form"};
  Table t("kernel", {{"delta_z", "m"},
                     {"re", "1/m^3"},
                     {"im", "1/m^3"},
                     {"abs", "1/m^3"},
                     {"direct_re", "1/m^3"},
                     {"direct_im", "1/m^3"},
                     {"exchanged_re", "1/m^3"},
                     {"exchanged_im", "1/m^3"},
                     {"total_abs", "1/m^3"}});
  for (double dz : linspace(dz_min, dz_max, points)) {
    const cplx k = downconv_kernel(dz, k0).value;
    const KernelBranches b = downconv_kernel_symmetrized(0.0, 0.0, dz, 0.0, k0);
    t.add_row({dz, k.real(), k.imag(), std::abs(k), b.direct.real(), b.direct.imag(),
               b.exchanged.real(), b.exchanged.imag(), std::abs(b.total)});
  }
  r.tables.push_back(std::move(t));

  const DecayFit fit = fit_kernel_decay(k0, fit_min, fit_max);
  Table f("fit", {{"k0", "1/m"},
                  {"z_min", "m"},
                  {"z_max", "m"},
                  {"decay_exponent", "1"},
                  {"maxima_used", "count"}});
  f.add_row({k0, fit_min, fit_max, fit.exponent, static_cast<long long>(fit.maxima_used)});
  r.tables.push_back(std::move(f));
  r.summary["decay_exponent"] = fit.exponent;

  if (numeric) {
    const std::vector<double> dzs = linspace(dz_min, dz_max, numeric_points);
    std::vector<Row> rows(dzs.size());
    parallel_for(dzs.size(), ctx.threads, common.seed, [&](std::size_t i) {
      const cplx num = downconv_kernel_numeric(dzs[i], k0, oracle);
      const double closed =
          std::abs(downconv_kernel_symmetrized(0.0, 0.0, dzs[i], 0.0, k0).total);
      rows[i] = {dzs[i], std::abs(num), closed, std::abs(num) / closed};
    });
    Table n("numeric", {{"delta_z", "m"},
                        {"abs_numeric", "1/m^3"},
                        {"abs_closed", "1/m^3"},
                        {"ratio", "1"}});
    for (auto& row : rows) n.add_row(std::move(row));
    r.tables.push_back(std::move(n));
  }
  return r;
}

// ---------------------------------------------------------------- soliton

ScenarioResult cmd_soliton(const Config& c, const RunContext&) {
  const std::string s = "soliton";
  const bool has_n0 = c.has(s, "n0"), has_alpha = c.has(s, "alpha");
  const int n0 = c.get_int(s, "n0", 2);
  const double alpha_mag = c.get_double(s, "alpha", 0.0);
  const double alpha_phase = c.get_double(s, "alpha_phase", 0.0);
  FiberParams p;
  p.omega1_dblprime = c.get_double(s, "omega1_dblprime", p.omega1_dblprime);
  p.g3 = c.get_double(s, "g3", p.g3);
  p.v1 = c.get_double(s, "v1", p.v1);
  p.omega1 = c.get_double(s, "omega1", p.omega1);
  const double length = c.get_double(s, "grid_length", 0.0);
  p.grid.points = c.get_int(s, "grid_points", p.grid.points);
  const double xi = c.get_double(s, "xi", 0.0);
  double t_final = c.get_double(s, "t_final", 0.0);
  int steps = c.get_int(s, "steps", 0);
  const int samples = c.get_int(s, "samples", 11);
  read_common(c);
  finish_reading(c, s);
  require(!(has_n0 && has_alpha), "soliton takes n0 or alpha, not both");
  require(samples >= 2, "soliton.samples must be >= 2");
  require(steps >= 0 && t_final >= 0.0, "soliton needs steps >= 0 and t_final >= 0");
  const bool mean = has_alpha;
  if (mean) require(alpha_mag * alpha_mag >= 4.0, "soliton.alpha needs |alpha|^2 >= 4");
  else require(n0 >= 2, "soliton.n0 must be >= 2");

  // Default extent: 24 widths of the soliton at the central photon number.
  const int n_ref = mean ? std::max(2, static_cast<int>(std::lround(alpha_mag * alpha_mag))) : n0;
  p.grid.length = 1.0;
  p.validate();
  const double kappa = soliton_kappa(n_ref, p);
  p.grid.length = length > 0.0 ? length : 24.0 / kappa;
  p.validate();

  ScenarioResult r;
  r.command = s;
  r.modules = {"soliton"};
  Table snaps("snapshots", {{"t", "s"}, {"x", "m"}, {"abs_psi", "1/m^(1/2)"}});
  Table peak("peak", {{"t", "s"}, {"peak_abs", "1/m^(1/2)"}, {"norm", "photons"}});
  auto record = [&](double t, const FieldProfile& f) {
    double pk = 0.0;
    for (int j = 0; j < p.grid.points; ++j) {
      snaps.add_row({t, p.grid.x(j), std::abs(f.values[j])});
      pk = std::max(pk, std::abs(f.values[j]));
    }
    peak.add_row({t, pk, f.norm()});
  };

  if (!mean) {
    if (t_final == 0.0) t_final = soliton_period(n0, p);
    const double dt_max = p.grid.dx() * p.grid.dx() / (kPi * p.omega1_dblprime);
    if (steps == 0) steps = static_cast<int>(std::ceil(t_final / dt_max));
    FieldProfile psi = hartree_profile(n0, xi, 0.0, p, 0.0);
    for (auto& v : psi.values) v *= std::sqrt(n0 - 1.0);
    const double e0 = nlse_energy(psi, p);
    const FieldProfile psi0 = psi;
    record(0.0, psi);
    const int segments = samples - 1;
    int done = 0;
    for (int k = 1; k <= segments; ++k) {
      const int target = static_cast<int>(std::lround(static_cast<double>(steps) * k / segments));
      const double dt = t_final / steps;
      if (target > done) psi = split_step_nlse(psi, p, dt * (target - done), target - done);
      done = target;
      record(t_final * k / segments, psi);
    }
    r.summary["mode"] = "nlse";
    r.summary["steps"] = steps;
    r.summary["energy_relative_drift"] = std::abs(nlse_energy(psi, p) - e0) / std::abs(e0);
    r.summary["shape_deviation"] = aligned_modulus_deviation(psi0, psi);
    r.summary["norm_drift"] = std::abs(psi.norm() - psi0.norm());
  } else {
    const cplx alpha = std::polar(alpha_mag, alpha_phase);
    const double nbar = alpha_mag * alpha_mag;
    const double t_diff = 1.0 / (p.g3 * p.g3 * nbar * std::sqrt(nbar));
    if (t_final == 0.0) t_final = 3.0 * t_diff;
    MeanFieldResult last;
    for (double t : linspace(0.0, t_final, samples)) {
      last = mean_field(alpha, p, t);
      record(t, last.field);
    }
    r.summary["mode"] = "mean_field";
    r.summary["tail_bound"] = last.tail_bound;
    r.summary["n_min"] = last.n_min;
    r.summary["n_max"] = last.n_max;
    r.summary["diffusion_parameter_at_t_final"] = last.diffusion_parameter;
    r.summary["short_time_at_t_final"] = last.short_time;
  }
  r.summary["grid_length"] = p.grid.length;
  r.summary["t_final"] = t_final;
  r.tables.push_back(std::move(snaps));
  r.tables.push_back(std::move(peak));
  return r;
}

// --------------------------------------------------------------- validate

// Config hash without the replay key itself, so a report can name its own file.
std::string replay_key(const Config& c) {
  std::string canon;
  for (const auto& [k, v] : c.entries())
    if (!(k.first == "validate" && k.second == "replay"))
      canon += (k.first.empty() ? k.second : k.first + "." + k.second) + "=" + v + "\n";
  return sha256_hex("command=validate\n" + canon);
}

ScenarioResult cmd_validate(const Config& c, const RunContext& ctx) {
  const std::string s = "validate";
  const bool fast = c.get_bool(s, "fast", false) || ctx.fast;
  const std::vector<double> ids = c.get_list(s, "checks", {});
  const std::string replay = c.get_string(s, "replay", "");
  read_common(c);
  finish_reading(c, s);
  for (double id : ids)
    require(id == std::floor(id) && id >= 1 && id <= validation_check_count(),
            "validate.checks entries must be check ids 1.." +
                std::to_string(validation_check_count()));

  if (!replay.empty()) {
    std::ifstream f(replay);
    require(static_cast<bool>(f), "cannot open replay report '" + replay + "'");
    nlohmann::json old;
    try {
      f >> old;
    } catch (const std::exception& e) {
      throw ConfigError("replay report '" + replay + "' is not valid JSON: " + e.what());
    }
    std::string recorded;
    if (old.is_object() && old.contains("summary") && old["summary"].is_object())
      recorded = old["summary"].value("replay_key", std::string());
    require(old.value("command", std::string()) == s && recorded == replay_key(c),
            "replay report '" + replay + "' was produced from a different config");
  }

  ValidationOptions opts;
  opts.fast = fast;
  opts.threads = ctx.threads;
  std::vector<CheckResult> results;
  if (ids.empty()) {
    results = run_validation(opts);
  } else {
    for (double id : ids) {
      const int i = static_cast<int>(id);
      if (fast && validation_check_heavy(i)) {
        CheckResult skipped;
        skipped.id = i;
        skipped.skipped = true;
        skipped.detail = "skipped in fast mode";
        results.push_back(skipped);
      } else {
        results.push_back(run_check(i));
      }
    }
  }

  ScenarioResult r;
  r.command = s;
  r.modules = {"fock", "models", "evolve", "diagnostics", "closed_form",
               "oscillator", "classical_media", "soliton"};
  Table m("matrix", {{"id", "index"}, {"name", "label"}, {"status", "label"}, {"detail", "label"}});
  Table d("measures", {{"id", "index"},
                       {"label", "label"},
                       {"value", "1"},
                       {"reference", "1"},
                       {"error", "1"},
                       {"tolerance", "1"},
                       {"status", "label"}});
  nlohmann::json timing = nlohmann::json::array();
  for (const CheckResult& cr : results) {
    const std::string status = cr.skipped ? "SKIP" : (cr.passed ? "PASS" : "FAIL");
    m.add_row({static_cast<long long>(cr.id), cr.name, status, cr.detail});
    for (const Measure& me : cr.measures)
      d.add_row({static_cast<long long>(cr.id), me.label, me.value, me.reference, me.error,
                 me.tolerance, std::string(me.passed ? "PASS" : "FAIL")});
    timing.push_back({{"id", cr.id}, {"seconds", cr.seconds}, {"budget_s", cr.time_budget}});
    if (!cr.skipped && !cr.passed) r.passed = false;
  }
  r.tables.push_back(std::move(m));
  r.tables.push_back(std::move(d));
  r.summary["timing"] = timing;
  r.summary["fast"] = fast;
  r.summary["replay_key"] = replay_key(c);
  return r;
}

using Handler = ScenarioResult (*)(const Config&, const RunContext&);

const std::vector<std::pair<std::string, Handler>>& handlers() {
  static const std::vector<std::pair<std::string, Handler>> h = {
      {"squeeze", cmd_squeeze},       {"entangle", cmd_entangle},
      {"kerr", cmd_kerr},             {"oscillator", cmd_oscillator},
      {"nphoton", cmd_nphoton},       {"medium", cmd_medium},
      {"dispersion", cmd_dispersion}, {"downconv", cmd_downconv},
      {"soliton", cmd_soliton},       {"validate", cmd_validate},
  };
  return h;
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& [name, fn] : handlers()) n.push_back(name);
    return n;
  }();
  return names;
}

bool is_command(const std::string& name) {
  const auto& n = command_names();
  return std::find(n.begin(), n.end(), name) != n.end();
}

ScenarioResult run_command(const std::string& command, const Config& config,
                           const RunContext& ctx) {
  for (const auto& [name, fn] : handlers())
    if (name == command) return fn(config, ctx);
  throw UsageError("unknown command '" + command + "'");
}

int resolve_threads(int flag_value) {
  if (flag_value > 0) return flag_value;
  if (const char* env = std::getenv("NLO_QUANTA_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 1 || v > 4096)
      throw UsageError(std::string("NLO_QUANTA_THREADS must be a positive integer, got '") +
                       env + "'");
    return static_cast<int>(v);
  }
  return 1;
}

}  // namespace nloq::tools
