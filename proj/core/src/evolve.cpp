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

#include "nloq/evolve.hpp"

#include "lindblad.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/numeric/odeint.hpp>
#include <unsupported/Eigen/KroneckerProduct>

namespace nloq {

namespace odeint = boost::numeric::odeint;

namespace {

using StateVec = std::vector<cplx>;

void check_times(const std::vector<double>& times) {
  double prev = 0.0;
  for (double t : times) {
    if (!std::isfinite(t) || t < prev)
      throw Error(Errc::contract,
                  "sample times must be finite, non-negative and sorted");
    prev = t;
  }
}

double column_norm1(const Operator& op) {
  if (auto* d = op.dense_ptr()) return d->cwiseAbs().colwise().sum().maxCoeff();
  const SpMat& s = *op.sparse_ptr();
  double worst = 0.0;
  for (int k = 0; k < s.outerSize(); ++k) {
    double col = 0.0;
    for (SpMat::InnerIterator it(s, k); it; ++it) col += std::abs(it.value());
    worst = std::max(worst, col);
  }
  return worst;
}

// Adds every charge expectation to the result.
void record_charges(EvolutionResult& r) {
  for (const auto& c : r.charges) r.record(c.name, c.op);
}

void check_norm(const CVec& psi, double t, double tol) {
  const double n = psi.norm();
  if (!(std::abs(n - 1.0) < tol)) {
    std::ostringstream os;
    os << "state norm drifted to " << n << " at t = " << t;
    throw Error(Errc::numeric, os.str());
  }
}

template <class System>
void integrate(System sys, StateVec& x, double t0, double t1,
               const EvolutionOptions& opts) {
  if (t1 <= t0) return;
  auto stepper = odeint::make_controlled(
      opts.abs_tol, opts.rel_tol, odeint::runge_kutta_fehlberg78<StateVec>());
  try {
    odeint::integrate_adaptive(stepper, sys, x, t0, t1,
                               std::min(1e-3, 0.1 * (t1 - t0)));
  } catch (const std::exception& e) {
    std::ostringstream os;
    os << "adaptive integration failed on [" << t0 << ", " << t1
       << "]: " << e.what();
    throw Error(Errc::numeric, os.str());
  }
  for (const auto& v : x)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      std::ostringstream os;
      os << "non-finite state after integrating to t = " << t1;
      throw Error(Errc::numeric, os.str());
    }
}

}  // namespace

namespace detail {

LindbladParts lindblad_parts(const ModelSpec& model) {
  Operator a = cplx(0.0, -1.0) * model.hamiltonian;
  std::vector<std::pair<Operator, double>> jumps;
  for (const auto& d : model.dissipators) {
    if (d.rate == 0.0) continue;
    a = a - d.rate * (d.op.adjoint() * d.op);
    jumps.emplace_back(d.op, d.rate);
  }
  std::vector<Operator> adj;
  for (const auto& term : model.rotating) adj.push_back(term.op.adjoint());
  return {a, model.rotating, adj, jumps};
}

void lindblad_rhs(const LindbladParts& p, const CMat& rho, CMat& out,
                  double t) {
  CMat x = p.a_static.apply(rho);
  for (std::size_t k = 0; k < p.rotating.size(); ++k) {
    const cplx ph = std::polar(1.0, -p.rotating[k].frequency * t);
    x += cplx(0.0, -1.0) * ph * p.rotating[k].op.apply(rho);
    x += cplx(0.0, -1.0) * std::conj(ph) * p.rotating_adjoint[k].apply(rho);
  }
  out = x + x.adjoint();
  for (const auto& [c, gamma] : p.jumps) {
    const CMat y = c.apply(rho);
    const CMat w = c.apply(CMat(y.adjoint()));  // c rho^dag c^dag = (c rho c^dag)^dag
    out += gamma * (w + w.adjoint());
  }
}

}  // namespace detail

using detail::LindbladParts;
using detail::lindblad_parts;
using detail::lindblad_rhs;

void EvolutionResult::record(const std::string& name, const Operator& op) {
  std::vector<cplx> series;
  series.reserve(states.size());
  for (const auto& s : states) series.push_back(expectation(s, op));
  observables[name] = std::move(series);
}

CVec propagate_static(const Operator& h, const CVec& psi, double t,
                      const EvolutionOptions& opts) {
  (void)opts;
  if (t == 0.0) return psi;
  const double norm1 = column_norm1(h);
  const int nsub = std::max(1, static_cast<int>(std::ceil(norm1 * std::abs(t))));
  const double dt = t / nsub;
  CVec v = psi;
  for (int s = 0; s < nsub; ++s) {
    CVec term = v;
    CVec acc = v;
    for (int k = 1; k <= 60; ++k) {
      term = (cplx(0.0, -dt) / static_cast<double>(k)) * h.apply(term);
      acc += term;
      if (term.norm() <= 1e-17 * acc.norm()) break;
    }
    v = std::move(acc);
  }
  return v;
}

EvolutionResult evolve_pure(const ModelSpec& model, const State& psi0,
                            const std::vector<double>& times,
                            const EvolutionOptions& opts) {
  if (!model.dissipators.empty())
    throw Error(Errc::contract, "evolve_pure requires a model without dissipators");
  if (!psi0.is_pure()) throw Error(Errc::contract, "evolve_pure needs a pure state");
  if (psi0.space() != model.space)
    throw Error(Errc::contract, "state and model spaces differ");
  check_times(times);

  EvolutionResult r;
  r.times = times;
  r.charges = model.charges;
  const Space& space = model.space;
  const double tail = psi0.tail_mass();

  if (!model.time_dependent() && space.total() < opts.eigen_limit) {
    Eigen::SelfAdjointEigenSolver<CMat> es(model.hamiltonian.dense());
    if (es.info() != Eigen::Success)
      throw Error(Errc::numeric, "Hamiltonian eigendecomposition failed");
    const CVec c0 = es.eigenvectors().adjoint() * psi0.vector();
    for (double t : times) {
      CVec c = c0;
      for (Eigen::Index k = 0; k < c.size(); ++k)
        c(k) *= std::polar(1.0, -es.eigenvalues()(k) * t);
      CVec psi = es.eigenvectors() * c;
      check_norm(psi, t, opts.norm_tol);
      r.states.push_back(State::normalized(space, std::move(psi), tail));
    }
  } else if (!model.time_dependent()) {
    CVec psi = psi0.vector();
    double now = 0.0;
    for (double t : times) {
      psi = propagate_static(model.hamiltonian, psi, t - now, opts);
      now = t;
      check_norm(psi, t, opts.norm_tol);
      r.states.push_back(State::normalized(space, psi, tail));
    }
  } else {
    std::vector<Operator> ops, adj;
    for (const auto& term : model.rotating) {
      ops.push_back(term.op);
      adj.push_back(term.op.adjoint());
    }
    auto rhs = [&](const StateVec& x, StateVec& dx, double t) {
      Eigen::Map<const CVec> v(x.data(), static_cast<Eigen::Index>(x.size()));
      Eigen::Map<CVec> out(dx.data(), static_cast<Eigen::Index>(dx.size()));
      CVec hv = model.hamiltonian.apply(CVec(v));
      for (std::size_t k = 0; k < ops.size(); ++k) {
        const cplx ph = std::polar(1.0, -model.rotating[k].frequency * t);
        hv += ph * ops[k].apply(CVec(v)) + std::conj(ph) * adj[k].apply(CVec(v));
      }
      out = cplx(0.0, -1.0) * hv;
    };
    StateVec x(psi0.vector().data(), psi0.vector().data() + psi0.vector().size());
    double now = 0.0;
    for (double t : times) {
      integrate(rhs, x, now, t, opts);
      now = t;
      CVec psi = Eigen::Map<const CVec>(x.data(), static_cast<Eigen::Index>(x.size()));
      check_norm(psi, t, opts.norm_tol);
      r.states.push_back(State::normalized(space, std::move(psi), tail));
    }
  }
  record_charges(r);
  return r;
}

CMat apply_liouvillian(const ModelSpec& model, const CMat& rho, double t) {
  const LindbladParts p = lindblad_parts(model);
  CMat out;
  // Split rho into Hermitian and anti-Hermitian parts; L is linear and maps
  // Hermitian matrices to Hermitian matrices.
  const CMat h = 0.5 * (rho + rho.adjoint());
  const CMat k = cplx(0.0, -0.5) * (rho - rho.adjoint());  // rho = h + i k
  CMat lh, lk;
  lindblad_rhs(p, h, lh, t);
  lindblad_rhs(p, k, lk, t);
  out = lh + cplx(0.0, 1.0) * lk;
  return out;
}

CMat liouvillian_matrix(const ModelSpec& model) {
  if (model.time_dependent())
    throw Error(Errc::contract, "Liouvillian matrix needs a static model");
  const LindbladParts p = lindblad_parts(model);
  const auto d = static_cast<Eigen::Index>(model.space.total());
  const CMat a = p.a_static.dense();
  const CMat id = CMat::Identity(d, d);
  CMat l = Eigen::kroneckerProduct(a, id);
  l += Eigen::kroneckerProduct(id, CMat(a.conjugate()));
  for (const auto& [c, gamma] : p.jumps) {
    const CMat cd = c.dense();
    l += (2.0 * gamma) * CMat(Eigen::kroneckerProduct(cd, CMat(cd.conjugate())));
  }
  return l;
}

EvolutionResult evolve_lindblad(const ModelSpec& model, const State& rho0,
                                const std::vector<double>& times,
                                const EvolutionOptions& opts) {
  if (rho0.space() != model.space)
    throw Error(Errc::contract, "state and model spaces differ");
  check_times(times);
  const State start = rho0.to_density();
  const LindbladParts p = lindblad_parts(model);
  const auto d = static_cast<Eigen::Index>(model.space.total());

  auto rhs = [&](const StateVec& x, StateVec& dx, double t) {
    Eigen::Map<const CMat> rho(x.data(), d, d);
    Eigen::Map<CMat> out(dx.data(), d, d);
    CMat res;
    lindblad_rhs(p, CMat(rho), res, t);
    out = res;
  };

  EvolutionResult r;
  r.times = times;
  r.charges = model.charges;
  CMat rho = 0.5 * (start.matrix() + start.matrix().adjoint());
  StateVec x(rho.data(), rho.data() + rho.size());
  DensityTolerances tol;
  tol.trace = opts.trace_tol;
  double now = 0.0;
  for (double t : times) {
    integrate(rhs, x, now, t, opts);
    now = t;
    CMat m = Eigen::Map<const CMat>(x.data(), d, d);
    const cplx tr = m.trace();
    if (!(std::abs(tr - 1.0) < opts.trace_tol)) {
      std::ostringstream os;
      os << "trace drifted to " << tr.real() << " at t = " << t
         << " (tolerance " << opts.trace_tol << ")";
      throw Error(Errc::numeric, os.str());
    }
    r.states.push_back(State::density(model.space, std::move(m),
                                      start.tail_mass(), tol));
  }
  record_charges(r);
  return r;
}

}  // namespace nloq
