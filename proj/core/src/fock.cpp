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

#include "nloq/fock.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <utility>

#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

namespace nloq {

const char* to_string(Errc code) noexcept {
  switch (code) {
    case Errc::invalid_space: return "invalid-space";
    case Errc::index: return "index";
    case Errc::truncation: return "truncation";
    case Errc::out_of_range: return "out-of-range";
    case Errc::contract: return "contract";
    case Errc::parameter: return "parameter";
    case Errc::numeric: return "numeric";
    case Errc::ambiguity: return "ambiguity";
    case Errc::domain: return "domain";
    case Errc::singularity: return "singularity";
  }
  return "unknown";
}

// ---------------------------------------------------------------- Space

Space::Space(std::vector<int> dims) : dims_(std::move(dims)) {
  if (dims_.empty()) throw Error(Errc::invalid_space, "no modes given");
  for (std::size_t m = 0; m < dims_.size(); ++m) {
    if (dims_[m] < 2) {
      std::ostringstream os;
      os << "mode " << m << " has dimension " << dims_[m] << " (< 2)";
      throw Error(Errc::invalid_space, os.str());
    }
  }
  strides_.assign(dims_.size(), 1);
  total_ = 1;
  for (int m = modes() - 1; m >= 0; --m) {
    strides_[m] = total_;
    total_ *= static_cast<std::size_t>(dims_[m]);
  }
}

Space make_space(std::vector<int> dims) { return Space(std::move(dims)); }

void Space::check_mode(int mode) const {
  if (mode < 0 || mode >= modes()) {
    std::ostringstream os;
    os << "mode " << mode << " outside [0, " << modes() << ")";
    throw Error(Errc::index, os.str());
  }
}

int Space::dim(int mode) const {
  check_mode(mode);
  return dims_[mode];
}

std::size_t Space::stride(int mode) const {
  check_mode(mode);
  return strides_[mode];
}

std::size_t Space::flat_index(const std::vector<int>& occupation) const {
  if (occupation.size() != dims_.size())
    throw Error(Errc::contract, "occupation length does not match mode count");
  std::size_t flat = 0;
  for (std::size_t m = 0; m < dims_.size(); ++m) {
    if (occupation[m] < 0 || occupation[m] >= dims_[m]) {
      std::ostringstream os;
      os << "occupation " << occupation[m] << " of mode " << m
         << " outside [0, " << dims_[m] << ")";
      throw Error(Errc::out_of_range, os.str());
    }
    flat += strides_[m] * static_cast<std::size_t>(occupation[m]);
  }
  return flat;
}

std::vector<int> Space::occupation(std::size_t flat) const {
  if (flat >= total_) throw Error(Errc::index, "flat index outside space");
  std::vector<int> occ(dims_.size());
  for (int m = 0; m < modes(); ++m) occ[m] = digit(flat, m);
  return occ;
}

// ---------------------------------------------------------------- Operator

namespace {

void check_shape(const Space& s, Eigen::Index rows, Eigen::Index cols) {
  const auto n = static_cast<Eigen::Index>(s.total());
  if (rows != n || cols != n) {
    std::ostringstream os;
    os << "matrix is " << rows << "x" << cols << ", space dimension is " << n;
    throw Error(Errc::contract, os.str());
  }
}

bool use_sparse(const Space& s, const StorageOptions& opts) {
  return s.total() > opts.sparse_threshold;
}

void check_same_space(const Space& a, const Space& b) {
  if (a != b) throw Error(Errc::contract, "operators act on different spaces");
}

}  // namespace

Operator::Operator(Space space, CMat matrix, bool hermitian)
    : space_(std::move(space)), m_(std::move(matrix)), hermitian_(false) {
  const auto& m = std::get<CMat>(m_);
  check_shape(space_, m.rows(), m.cols());
  if (hermitian) *this = as_hermitian();
}

Operator::Operator(Space space, SpMat matrix, bool hermitian)
    : space_(std::move(space)), m_(std::move(matrix)), hermitian_(false) {
  auto& m = std::get<SpMat>(m_);
  check_shape(space_, m.rows(), m.cols());
  m.makeCompressed();
  if (hermitian) *this = as_hermitian();
}

CMat Operator::dense() const {
  if (auto* d = dense_ptr()) return *d;
  return CMat(*sparse_ptr());
}

SpMat Operator::sparse() const {
  if (auto* s = sparse_ptr()) return *s;
  return dense_ptr()->sparseView();
}

Operator Operator::adjoint() const {
  Operator out = is_sparse() ? Operator(space_, SpMat(sparse_ptr()->adjoint()))
                             : Operator(space_, CMat(dense_ptr()->adjoint()));
  out.hermitian_ = hermitian_;
  return out;
}

double Operator::hermiticity_defect() const {
  if (auto* d = dense_ptr()) {
    if (d->size() == 0) return 0.0;
    return (*d - d->adjoint()).cwiseAbs().maxCoeff();
  }
  const SpMat& s = *sparse_ptr();
  SpMat diff = s - SpMat(s.adjoint());
  double worst = 0.0;
  for (int k = 0; k < diff.outerSize(); ++k)
    for (SpMat::InnerIterator it(diff, k); it; ++it)
      worst = std::max(worst, std::abs(it.value()));
  return worst;
}

double Operator::max_abs() const {
  if (auto* d = dense_ptr()) return d->cwiseAbs().maxCoeff();
  double worst = 0.0;
  const SpMat& s = *sparse_ptr();
  for (int k = 0; k < s.outerSize(); ++k)
    for (SpMat::InnerIterator it(s, k); it; ++it)
      worst = std::max(worst, std::abs(it.value()));
  return worst;
}

cplx Operator::element(std::size_t row, std::size_t col) const {
  const auto r = static_cast<Eigen::Index>(row);
  const auto c = static_cast<Eigen::Index>(col);
  if (row >= space_.total() || col >= space_.total())
    throw Error(Errc::index, "matrix element outside operator");
  if (auto* d = dense_ptr()) return (*d)(r, c);
  return sparse_ptr()->coeff(r, c);
}

CVec Operator::apply(const CVec& v) const {
  if (static_cast<std::size_t>(v.size()) != space_.total())
    throw Error(Errc::contract, "vector length does not match operator");
  if (auto* d = dense_ptr()) return (*d) * v;
  return (*sparse_ptr()) * v;
}

CMat Operator::apply(const CMat& x) const {
  if (static_cast<std::size_t>(x.rows()) != space_.total())
    throw Error(Errc::contract, "matrix rows do not match operator");
  if (auto* d = dense_ptr()) return (*d) * x;
  return (*sparse_ptr()) * x;
}

CMat Operator::apply_right(const CMat& x) const {
  if (static_cast<std::size_t>(x.cols()) != space_.total())
    throw Error(Errc::contract, "matrix columns do not match operator");
  if (auto* d = dense_ptr()) return x * (*d);
  return x * (*sparse_ptr());
}

Operator Operator::as_hermitian() const {
  const double defect = hermiticity_defect();
  if (!(defect < 1e-12)) {
    std::ostringstream os;
    os << "operator tagged hermitian has defect " << defect;
    throw Error(Errc::contract, os.str());
  }
  Operator out = *this;
  out.hermitian_ = true;
  return out;
}

Operator operator+(const Operator& a, const Operator& b) {
  check_same_space(a.space_, b.space_);
  Operator out = (!a.is_sparse() && !b.is_sparse())
                     ? Operator(a.space_, CMat(*a.dense_ptr() + *b.dense_ptr()))
                     : Operator(a.space_, SpMat(a.sparse() + b.sparse()));
  out.hermitian_ = a.hermitian_ && b.hermitian_;
  return out;
}

Operator operator-(const Operator& a, const Operator& b) {
  check_same_space(a.space_, b.space_);
  Operator out = (!a.is_sparse() && !b.is_sparse())
                     ? Operator(a.space_, CMat(*a.dense_ptr() - *b.dense_ptr()))
                     : Operator(a.space_, SpMat(a.sparse() - b.sparse()));
  out.hermitian_ = a.hermitian_ && b.hermitian_;
  return out;
}

Operator operator*(const Operator& a, const Operator& b) {
  check_same_space(a.space_, b.space_);
  if (!a.is_sparse() && !b.is_sparse())
    return Operator(a.space_, CMat(*a.dense_ptr() * *b.dense_ptr()));
  return Operator(a.space_, SpMat(a.sparse() * b.sparse()));
}

Operator operator*(cplx s, const Operator& a) {
  Operator out = a.is_sparse() ? Operator(a.space_, SpMat(s * *a.sparse_ptr()))
                               : Operator(a.space_, CMat(s * *a.dense_ptr()));
  out.hermitian_ = a.hermitian_ && s.imag() == 0.0;
  return out;
}

Operator operator*(double s, const Operator& a) { return cplx(s, 0.0) * a; }

Operator commutator(const Operator& a, const Operator& b) {
  return a * b - b * a;
}

Operator embed(const Space& space, int mode, const CMat& local,
               StorageOptions opts) {
  const int d = space.dim(mode);
  if (local.rows() != d || local.cols() != d)
    throw Error(Errc::contract, "local operator does not match mode dimension");
  const std::size_t stride = space.stride(mode);
  std::vector<Eigen::Triplet<cplx>> trips;
  for (std::size_t j = 0; j < space.total(); ++j) {
    const int col = space.digit(j, mode);
    for (int row = 0; row < d; ++row) {
      const cplx v = local(row, col);
      if (v == cplx(0.0, 0.0)) continue;
      const std::size_t i = j + static_cast<std::size_t>(row) * stride -
                            static_cast<std::size_t>(col) * stride;
      trips.emplace_back(static_cast<int>(i), static_cast<int>(j), v);
    }
  }
  const auto n = static_cast<Eigen::Index>(space.total());
  SpMat m(n, n);
  m.setFromTriplets(trips.begin(), trips.end());
  if (use_sparse(space, opts)) return Operator(space, std::move(m));
  return Operator(space, CMat(m));
}

namespace {

CMat local_lowering(int d) {
  CMat a = CMat::Zero(d, d);
  for (int n = 1; n < d; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

}  // namespace

Operator identity(const Space& space, StorageOptions opts) {
  const auto n = static_cast<Eigen::Index>(space.total());
  if (use_sparse(space, opts)) {
    SpMat m(n, n);
    m.setIdentity();
    return Operator(space, std::move(m), true);
  }
  return Operator(space, CMat(CMat::Identity(n, n)), true);
}

Operator annihilation(const Space& space, int mode, StorageOptions opts) {
  return embed(space, mode, local_lowering(space.dim(mode)), opts);
}

Operator creation(const Space& space, int mode, StorageOptions opts) {
  return embed(space, mode, CMat(local_lowering(space.dim(mode)).adjoint()),
               opts);
}

Operator number_operator(const Space& space, int mode, StorageOptions opts) {
  const int d = space.dim(mode);
  CMat n = CMat::Zero(d, d);
  for (int k = 0; k < d; ++k) n(k, k) = static_cast<double>(k);
  return embed(space, mode, n, opts).as_hermitian();
}

Operator quadrature(const Space& space, int mode, double phi,
                    StorageOptions opts) {
  const CMat a = local_lowering(space.dim(mode));
  const cplx e = std::polar(1.0, phi);
  const CMat x = 0.5 * (e * a.adjoint() + std::conj(e) * a);
  return embed(space, mode, x, opts).as_hermitian();
}

Operator phase_rotation(const Space& space, int mode, double angle,
                        StorageOptions opts) {
  const int d = space.dim(mode);
  CMat u = CMat::Zero(d, d);
  for (int k = 0; k < d; ++k) u(k, k) = std::polar(1.0, angle * k);
  return embed(space, mode, u, opts);
}

// ---------------------------------------------------------------- State

State State::pure(Space space, CVec psi, double tail_mass) {
  if (static_cast<std::size_t>(psi.size()) != space.total())
    throw Error(Errc::contract, "state vector length does not match space");
  const double norm = psi.norm();
  if (!(std::abs(norm - 1.0) < 1e-10)) {
    std::ostringstream os;
    os << "pure state norm " << norm << " differs from 1 by more than 1e-10";
    throw Error(Errc::contract, os.str());
  }
  State s(std::move(space), StateKind::pure, tail_mass);
  s.psi_ = std::move(psi);
  return s;
}

State State::normalized(Space space, CVec psi, double tail_mass) {
  const double norm = psi.norm();
  if (!(norm > 0.0) || !std::isfinite(norm))
    throw Error(Errc::numeric, "cannot normalize a zero or non-finite vector");
  psi /= norm;
  return pure(std::move(space), std::move(psi), tail_mass);
}

State State::density(Space space, CMat rho, double tail_mass,
                     const DensityTolerances& tol) {
  check_shape(space, rho.rows(), rho.cols());
  const cplx tr = rho.trace();
  if (!(std::abs(tr - 1.0) < tol.trace)) {
    std::ostringstream os;
    os << "density trace " << tr.real() << (tr.imag() >= 0 ? "+" : "")
       << tr.imag() << "i differs from 1 by more than " << tol.trace;
    throw Error(Errc::contract, os.str());
  }
  const double herm = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
  if (!(herm < tol.hermitian)) {
    std::ostringstream os;
    os << "density hermiticity defect " << herm;
    throw Error(Errc::contract, os.str());
  }
  if (space.total() <= tol.eigen_check_limit) {
    const CMat h = 0.5 * (rho + rho.adjoint());
    Eigen::SelfAdjointEigenSolver<CMat> es(h, Eigen::EigenvaluesOnly);
    const double lo = es.eigenvalues().minCoeff();
    if (!(lo > -tol.min_eigenvalue)) {
      std::ostringstream os;
      os << "density has eigenvalue " << lo;
      throw Error(Errc::contract, os.str());
    }
  }
  State s(std::move(space), StateKind::density, tail_mass);
  s.rho_ = std::move(rho);
  return s;
}

const CVec& State::vector() const {
  if (!is_pure()) throw Error(Errc::contract, "state is not pure");
  return psi_;
}

const CMat& State::matrix() const {
  if (is_pure()) throw Error(Errc::contract, "state is not a density matrix");
  return rho_;
}

CMat State::density_matrix() const {
  if (is_pure()) return psi_ * psi_.adjoint();
  return rho_;
}

State State::to_density() const {
  if (!is_pure()) return *this;
  State s(space_, StateKind::density, tail_mass_);
  s.rho_ = psi_ * psi_.adjoint();
  return s;
}

CVec coherent_coefficients(int dim, cplx alpha, double* tail) {
  if (dim < 1) throw Error(Errc::invalid_space, "dimension must be positive");
  CVec c = CVec::Zero(dim);
  const double mag = std::abs(alpha);
  if (mag == 0.0) {
    c(0) = 1.0;
    if (tail) *tail = 0.0;
    return c;
  }
  const double arg = std::arg(alpha);
  const double lmag = std::log(mag);
  double kept = 0.0;
  for (int n = 0; n < dim; ++n) {
    const double logw =
        -0.5 * mag * mag + n * lmag - 0.5 * std::lgamma(n + 1.0);
    c(n) = std::polar(std::exp(logw), n * arg);
    kept += std::norm(c(n));
  }
  if (tail) *tail = std::max(0.0, 1.0 - kept);
  c /= std::sqrt(kept);
  return c;
}

State coherent_state(const Space& space, const std::vector<cplx>& amplitudes,
                     double tail_tolerance) {
  if (static_cast<int>(amplitudes.size()) != space.modes())
    throw Error(Errc::contract, "one amplitude per mode is required");
  CVec psi = CVec::Ones(1);
  double kept = 1.0;
  for (int m = 0; m < space.modes(); ++m) {
    double tail = 0.0;
    const CVec c = coherent_coefficients(space.dim(m), amplitudes[m], &tail);
    if (tail > tail_tolerance) {
      std::ostringstream os;
      os << "mode " << m << ": coherent amplitude " << std::abs(amplitudes[m])
         << " leaves tail mass " << tail << " beyond dimension "
         << space.dim(m) << " (tolerance " << tail_tolerance << ")";
      throw Error(Errc::truncation, os.str());
    }
    kept *= 1.0 - tail;
    psi = CVec(Eigen::kroneckerProduct(psi, c));
  }
  return State::normalized(space, std::move(psi), 1.0 - kept);
}

State fock_state(const Space& space, const std::vector<int>& occupation) {
  CVec psi = CVec::Zero(static_cast<Eigen::Index>(space.total()));
  psi(static_cast<Eigen::Index>(space.flat_index(occupation))) = 1.0;
  return State::pure(space, std::move(psi));
}

State tensor_product(const State& a, const State& b) {
  std::vector<int> dims = a.space().dims();
  dims.insert(dims.end(), b.space().dims().begin(), b.space().dims().end());
  Space space(std::move(dims));
  const double tail = 1.0 - (1.0 - a.tail_mass()) * (1.0 - b.tail_mass());
  if (a.is_pure() && b.is_pure())
    return State::pure(space,
                       CVec(Eigen::kroneckerProduct(a.vector(), b.vector())),
                       tail);
  return State::density(
      space,
      CMat(Eigen::kroneckerProduct(a.density_matrix(), b.density_matrix())),
      tail);
}

State transform(const Operator& u, const State& s) {
  if (u.space() != s.space())
    throw Error(Errc::contract, "operator and state spaces differ");
  if (s.is_pure()) return State::pure(s.space(), u.apply(s.vector()),
                                      s.tail_mass());
  const CMat y = u.apply(s.matrix());
  CMat rho = u.apply(CMat(y.adjoint())).adjoint();
  rho = 0.5 * (rho + rho.adjoint());
  return State::density(s.space(), std::move(rho), s.tail_mass());
}

namespace {

// Tr(O X) for an operator and a dense matrix on the same space.
cplx trace_product(const Operator& op, const CMat& x) {
  if (auto* d = op.dense_ptr()) return d->cwiseProduct(x.transpose()).sum();
  const SpMat& s = *op.sparse_ptr();
  cplx acc = 0.0;
  for (int k = 0; k < s.outerSize(); ++k)
    for (SpMat::InnerIterator it(s, k); it; ++it)
      acc += it.value() * x(it.col(), it.row());
  return acc;
}

}  // namespace

cplx expectation(const State& s, const Operator& op) {
  if (op.space() != s.space())
    throw Error(Errc::contract, "operator and state spaces differ");
  if (s.is_pure()) return s.vector().dot(op.apply(s.vector()));
  return trace_product(op, s.matrix());
}

double variance(const State& s, const Operator& op) {
  if (op.space() != s.space())
    throw Error(Errc::contract, "operator and state spaces differ");
  if (!op.hermitian() && !(op.hermiticity_defect() < 1e-12))
    throw Error(Errc::contract, "variance requires a hermitian operator");
  if (s.is_pure()) {
    const CVec w = op.apply(s.vector());
    const double mean = s.vector().dot(w).real();
    return w.squaredNorm() - mean * mean;
  }
  const double mean = trace_product(op, s.matrix()).real();
  const CMat x = op.apply(s.matrix());
  return trace_product(op, x).real() - mean * mean;
}

State partial_trace(const State& s, std::vector<int> keep_modes) {
  if (keep_modes.empty())
    throw Error(Errc::contract, "partial trace needs at least one kept mode");
  const Space& sp = s.space();
  for (int m : keep_modes) sp.check_mode(m);
  std::sort(keep_modes.begin(), keep_modes.end());
  keep_modes.erase(std::unique(keep_modes.begin(), keep_modes.end()),
                   keep_modes.end());

  std::vector<int> kept_dims;
  std::vector<int> traced;
  for (int m = 0; m < sp.modes(); ++m) {
    if (std::binary_search(keep_modes.begin(), keep_modes.end(), m))
      kept_dims.push_back(sp.dims()[m]);
    else
      traced.push_back(m);
  }
  Space kept(kept_dims);
  if (traced.empty()) return State::density(kept, s.density_matrix(),
                                            s.tail_mass());

  std::size_t nt = 1;
  for (int m : traced) nt *= static_cast<std::size_t>(sp.dims()[m]);
  const std::size_t nk = kept.total();

  // flat index of (kept k, traced t), both row-major in their own mode order.
  std::vector<std::size_t> flat(nk * nt);
  for (std::size_t f = 0; f < sp.total(); ++f) {
    std::size_t k = 0, t = 0;
    for (int m = 0; m < sp.modes(); ++m) {
      const auto digit = static_cast<std::size_t>(sp.digit(f, m));
      const auto d = static_cast<std::size_t>(sp.dims()[m]);
      if (std::binary_search(keep_modes.begin(), keep_modes.end(), m))
        k = k * d + digit;
      else
        t = t * d + digit;
    }
    flat[k * nt + t] = f;
  }

  const auto NK = static_cast<Eigen::Index>(nk);
  const auto NT = static_cast<Eigen::Index>(nt);
  CMat red = CMat::Zero(NK, NK);
  if (s.is_pure()) {
    CMat m(NK, NT);
    for (std::size_t k = 0; k < nk; ++k)
      for (std::size_t t = 0; t < nt; ++t)
        m(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(t)) =
            s.vector()(static_cast<Eigen::Index>(flat[k * nt + t]));
    red.noalias() = m * m.adjoint();
  } else {
    const CMat& rho = s.matrix();
    for (std::size_t t = 0; t < nt; ++t)
      for (std::size_t k = 0; k < nk; ++k)
        for (std::size_t k2 = 0; k2 < nk; ++k2)
          red(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k2)) +=
              rho(static_cast<Eigen::Index>(flat[k * nt + t]),
                  static_cast<Eigen::Index>(flat[k2 * nt + t]));
  }
  red = 0.5 * (red + red.adjoint());
  return State::density(kept, std::move(red), s.tail_mass());
}

Operator beam_splitter(const Space& space, double transmissivity, int mode_a,
                       int mode_b, StorageOptions opts) {
  space.check_mode(mode_a);
  space.check_mode(mode_b);
  if (mode_a == mode_b)
    throw Error(Errc::contract, "beam splitter needs two distinct modes");
  if (!(transmissivity >= 0.0 && transmissivity <= 1.0)) {
    std::ostringstream os;
    os << "transmissivity " << transmissivity << " outside [0, 1]";
    throw Error(Errc::parameter, os.str());
  }
  const double theta = std::acos(std::sqrt(transmissivity));
  const std::size_t sa = space.stride(mode_a);
  const std::size_t sb = space.stride(mode_b);

  // The generator conserves n_a + n_b, so exponentiate each block separately.
  std::map<std::pair<std::size_t, int>, std::vector<std::size_t>> blocks;
  for (std::size_t f = 0; f < space.total(); ++f) {
    const int na = space.digit(f, mode_a);
    const int nb = space.digit(f, mode_b);
    const std::size_t base = f - na * sa - nb * sb;
    blocks[{base, na + nb}].push_back(f);
  }

  std::vector<Eigen::Triplet<cplx>> trips;
  for (const auto& [key, members] : blocks) {
    const auto m = static_cast<Eigen::Index>(members.size());
    // members are ordered by increasing flat index; index them by n_a.
    std::map<int, Eigen::Index> pos;
    for (Eigen::Index i = 0; i < m; ++i)
      pos[space.digit(members[i], mode_a)] = i;
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
      const int na = space.digit(members[i], mode_a);
      const int nb = space.digit(members[i], mode_b);
      // a^dag b |na, nb> = sqrt((na+1) nb) |na+1, nb-1>
      if (auto it = pos.find(na + 1); it != pos.end() && nb > 0)
        g(it->second, i) += theta * std::sqrt((na + 1.0) * nb);
      // -a b^dag |na, nb> = -sqrt(na (nb+1)) |na-1, nb+1>
      if (auto it = pos.find(na - 1); it != pos.end() && na > 0)
        g(it->second, i) -= theta * std::sqrt(na * (nb + 1.0));
    }
    const Eigen::MatrixXd u = g.exp();
    for (Eigen::Index r = 0; r < m; ++r)
      for (Eigen::Index c = 0; c < m; ++c)
        if (u(r, c) != 0.0)
          trips.emplace_back(static_cast<int>(members[r]),
                             static_cast<int>(members[c]), u(r, c));
  }
  const auto n = static_cast<Eigen::Index>(space.total());
  SpMat u(n, n);
  u.setFromTriplets(trips.begin(), trips.end());
  if (use_sparse(space, opts)) return Operator(space, std::move(u));
  return Operator(space, CMat(u));
}

}  // namespace nloq
