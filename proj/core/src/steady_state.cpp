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

// Liouvillian steady states.
//
// Small spaces: SVD of the dense superoperator, which also yields the exact
// null-space dimension.
//
// Large spaces: solve L(rho) + tr(rho) Z = Z with right-preconditioned GMRES.
// For a unique steady state this operator is invertible and its solution is
// the trace-one null vector. The preconditioner inverts
// S(X) = A_s X + X A_s^dag, A_s = -iH - sum gamma c^dag c - (sigma/2) I,
// through one complex Schur factorization of A_s and a triangular Sylvester
// solve per application.

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "lindblad.hpp"
#include "nloq/evolve.hpp"

namespace nloq {

namespace {

using detail::LindbladParts;

double max_abs(const CMat& m) { return m.cwiseAbs().maxCoeff(); }

cplx frob_dot(const CMat& a, const CMat& b) {
  return Eigen::Map<const CVec>(a.data(), a.size())
      .dot(Eigen::Map<const CVec>(b.data(), b.size()));
}

// L applied to an arbitrary (not necessarily Hermitian) matrix.
CMat liouvillian(const LindbladParts& p, const CMat& x) {
  CMat out = p.a_static.apply(x);
  out += p.a_static.apply(CMat(x.adjoint())).adjoint();
  for (const auto& [c, gamma] : p.jumps) {
    const CMat y = c.apply(x);
    out += (2.0 * gamma) * c.apply(CMat(y.adjoint())).adjoint();
  }
  return out;
}

class SylvesterPreconditioner {
 public:
  SylvesterPreconditioner(const LindbladParts& p, double sigma)
      : parts_(p), sigma_(sigma) {
    CMat a = p.a_static.dense();
    a.diagonal().array() -= 0.5 * sigma;
    Eigen::ComplexSchur<CMat> schur(a);
    if (schur.info() != Eigen::Success)
      throw Error(Errc::numeric, "Schur factorization of the preconditioner failed");
    q_ = schur.matrixU();
    t_ = schur.matrixT();
  }

  // X with A_s X + X A_s^dag = C.
  CMat solve(const CMat& c) const {
    CMat y = q_.adjoint() * c * q_;
    const Eigen::Index n = t_.rows();
    for (Eigen::Index j = n - 1; j >= 0; --j) {
      const Eigen::Index m = n - 1 - j;
      if (m > 0)
        y.col(j).noalias() -= y.rightCols(m) * t_.row(j).tail(m).adjoint();
      const cplx shift = std::conj(t_(j, j));
      auto col = y.col(j);
      for (Eigen::Index i = n - 1; i >= 0; --i) {
        col(i) /= t_(i, i) + shift;
        if (i > 0) col.head(i) -= t_.col(i).head(i) * col(i);
      }
    }
    return q_ * y * q_.adjoint();
  }

  // A_s X + X A_s^dag.
  CMat forward(const CMat& x) const {
    CMat out = parts_.a_static.apply(x);
    out += parts_.a_static.apply(CMat(x.adjoint())).adjoint();
    return out - sigma_ * x;
  }

  // The remainder J(X) = L(X) - S(X) = sigma X + sum 2 gamma c X c^dag.
  CMat remainder(const CMat& x) const {
    CMat out = sigma_ * x;
    for (const auto& [c, gamma] : parts_.jumps) {
      const CMat y = c.apply(x);
      out += (2.0 * gamma) * c.apply(CMat(y.adjoint())).adjoint();
    }
    return out;
  }

 private:
  const LindbladParts& parts_;
  double sigma_;
  CMat q_;
  CMat t_;
};

struct GmresOutcome {
  CMat x;
  int iterations = 0;
  double residual = 0.0;
  bool converged = false;
};

// Restarted GMRES on matrices with the Frobenius inner product.
template <class Apply>
GmresOutcome gmres(const Apply& apply, const CMat& b, CMat x, double tol,
                   int restart, int max_iterations) {
  GmresOutcome out;
  CMat r = b - apply(x);
  double beta = r.norm();
  const double tiny = 1e-300;
  while (beta > tol && out.iterations < max_iterations) {
    const int m = restart;
    std::vector<CMat> v;
    v.reserve(m + 1);
    v.push_back(r / beta);
    CMat h = CMat::Zero(m + 1, m);
    std::vector<double> cs(m, 0.0);
    std::vector<cplx> sn(m, 0.0);
    CVec g = CVec::Zero(m + 1);
    g(0) = beta;
    int used = 0;
    for (int j = 0; j < m && out.iterations < max_iterations; ++j) {
      CMat w = apply(v[j]);
      ++out.iterations;
      for (int i = 0; i <= j; ++i) {
        h(i, j) = frob_dot(v[i], w);
        w -= h(i, j) * v[i];
      }
      const double hn = w.norm();
      h(j + 1, j) = hn;
      for (int i = 0; i < j; ++i) {
        const cplx t = cs[i] * h(i, j) + sn[i] * h(i + 1, j);
        h(i + 1, j) = -std::conj(sn[i]) * h(i, j) + cs[i] * h(i + 1, j);
        h(i, j) = t;
      }
      const cplx a = h(j, j);
      const double rr = std::hypot(std::abs(a), hn);
      if (std::abs(a) < tiny) {
        cs[j] = 0.0;
        sn[j] = 1.0;
      } else {
        cs[j] = std::abs(a) / rr;
        sn[j] = (a / std::abs(a)) * hn / rr;
      }
      h(j, j) = cs[j] * a + sn[j] * hn;
      h(j + 1, j) = 0.0;
      g(j + 1) = -std::conj(sn[j]) * g(j);
      g(j) = cs[j] * g(j);
      used = j + 1;
      if (std::abs(g(j + 1)) <= tol || hn < tiny) break;
      v.push_back(w / hn);
    }
    const CVec y = h.topLeftCorner(used, used)
                       .triangularView<Eigen::Upper>()
                       .solve(g.head(used));
    for (int i = 0; i < used; ++i) x += y(i) * v[i];
    r = b - apply(x);
    beta = r.norm();
  }
  out.x = std::move(x);
  out.residual = beta;
  out.converged = beta <= tol;
  return out;
}

CMat normalize_density(CMat rho) {
  rho = 0.5 * (rho + rho.adjoint());
  const cplx tr = rho.trace();
  if (!(std::abs(tr) > 0.0))
    throw Error(Errc::numeric, "steady-state candidate has zero trace");
  return rho / tr.real();
}

struct IterativeSolution {
  CMat rho;
  int iterations;
};

IterativeSolution solve_iterative(const SylvesterPreconditioner& pre,
                                  const LindbladParts& parts, const CMat& z,
                                  CMat x0, const SteadyStateOptions& opts,
                                  double tol, double residual_tol) {
  auto apply = [&](const CMat& v) {
    const CMat y = pre.solve(v);
    CMat out = v + pre.remainder(y);
    out += y.trace() * z;
    return out;
  };
  int iterations = 0;
  CMat x = std::move(x0);
  for (int round = 0; round < 4; ++round) {
    GmresOutcome g = gmres(apply, z, x, tol, opts.gmres_restart,
                           opts.max_iterations - iterations);
    iterations += g.iterations;
    x = std::move(g.x);
    CMat rho = normalize_density(pre.solve(x));
    if (max_abs(liouvillian(parts, rho)) < residual_tol)
      return {std::move(rho), iterations};
    if (iterations >= opts.max_iterations) break;
    tol *= 0.1;
  }
  std::ostringstream os;
  os << "GMRES steady-state solve did not reach residual " << residual_tol
     << " within " << iterations << " iterations";
  throw Error(Errc::numeric, os.str());
}

}  // namespace

State steady_state(const ModelSpec& model, const SteadyStateOptions& opts,
                   SteadyStateInfo* info) {
  if (model.time_dependent())
    throw Error(Errc::contract, "steady state needs a static generator");
  double min_rate = 0.0;
  for (const auto& d : model.dissipators)
    if (d.rate > 0.0) min_rate = min_rate == 0.0 ? d.rate : std::min(min_rate, d.rate);
  if (min_rate == 0.0)
    throw Error(Errc::contract, "steady state needs a dissipator with positive rate");

  const LindbladParts parts = detail::lindblad_parts(model);
  const auto d = static_cast<Eigen::Index>(model.space.total());
  SteadyStateInfo local;
  CMat rho;

  if (static_cast<std::size_t>(d * d) <= opts.dense_limit) {
    const CMat l = liouvillian_matrix(model);
    Eigen::BDCSVD<CMat> svd(l, Eigen::ComputeFullV);
    const Eigen::VectorXd& sv = svd.singularValues();
    const double smax = sv(0);
    int null_dim = 0;
    for (Eigen::Index k = 0; k < sv.size(); ++k)
      if (sv(k) <= opts.null_tol * std::max(1.0, smax)) ++null_dim;
    if (null_dim > 1) {
      std::ostringstream os;
      os << "Liouvillian null space has dimension " << null_dim;
      throw Error(Errc::ambiguity, os.str());
    }
    const CVec v = svd.matrixV().col(sv.size() - 1);
    rho.resize(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
      for (Eigen::Index j = 0; j < d; ++j) rho(i, j) = v(i * d + j);
    rho = normalize_density(std::move(rho));
    local.method = "dense-svd";
    local.null_dimension = std::max(null_dim, 1);
  } else {
    const SylvesterPreconditioner pre(parts, min_rate);
    const CMat z = CMat::Identity(d, d);
    IterativeSolution first =
        solve_iterative(pre, parts, z, CMat::Zero(d, d), opts,
                        0.5 * opts.residual_tol, opts.residual_tol);
    local.iterations = first.iterations;
    if (opts.check_degeneracy) {
      // Different normalization functional and start; a unique steady state
      // gives the same answer.
      CMat z2 = CMat::Zero(d, d);
      CMat start = CMat::Zero(d, d);
      for (Eigen::Index i = 0; i < d; ++i) {
        z2(i, i) = 1.0 + static_cast<double>(i) / static_cast<double>(d);
        for (Eigen::Index j = 0; j < d; ++j)
          start(i, j) = std::sin(1.0 + i + 3.0 * j) / static_cast<double>(d);
      }
      start = 0.5 * (start + start.adjoint());
      // Only needs to resolve differences at the comparison threshold.
      IterativeSolution second =
          solve_iterative(pre, parts, z2, pre.forward(start), opts,
                          1e-9 * z2.norm(), 1e-8);
      local.iterations += second.iterations;
      const double diff = max_abs(first.rho - second.rho);
      if (diff > 1e-6) {
        std::ostringstream os;
        os << "Liouvillian null space has dimension at least 2 (independent "
              "solves differ by "
           << diff << ")";
        throw Error(Errc::ambiguity, os.str());
      }
    }
    rho = std::move(first.rho);
    local.method = "gmres-sylvester";
  }

  local.residual = max_abs(liouvillian(parts, rho));
  if (!(local.residual < opts.residual_tol)) {
    std::ostringstream os;
    os << "steady-state residual " << local.residual << " exceeds "
       << opts.residual_tol;
    throw Error(Errc::numeric, os.str());
  }
  if (info) *info = local;
  return State::density(model.space, std::move(rho));
}

}  // namespace nloq
