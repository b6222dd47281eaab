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

#include <complex>
#include <cstddef>
#include <variant>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "nloq/error.hpp"

namespace nloq {

using cplx = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using SpMat = Eigen::SparseMatrix<cplx>;

inline constexpr double kDefaultTailTolerance = 1e-10;
inline constexpr std::size_t kDefaultSparseThreshold = 256;

// Truncated tensor-product Fock space. Flat indices are row-major with mode 0
// varying slowest, so for dims {d0, d1} the state |n0, n1> sits at n0*d1 + n1.
class Space {
 public:
  explicit Space(std::vector<int> dims);

  int modes() const noexcept { return static_cast<int>(dims_.size()); }
  int dim(int mode) const;
  const std::vector<int>& dims() const noexcept { return dims_; }
  std::size_t total() const noexcept { return total_; }
  std::size_t stride(int mode) const;

  std::size_t flat_index(const std::vector<int>& occupation) const;
  std::vector<int> occupation(std::size_t flat) const;
  int digit(std::size_t flat, int mode) const {
    return static_cast<int>((flat / strides_[mode]) % dims_[mode]);
  }

  void check_mode(int mode) const;

  bool operator==(const Space& other) const { return dims_ == other.dims_; }
  bool operator!=(const Space& other) const { return !(*this == other); }

 private:
  std::vector<int> dims_;
  std::vector<std::size_t> strides_;
  std::size_t total_ = 0;
};

Space make_space(std::vector<int> dims);

struct StorageOptions {
  // Operators on spaces larger than this are built sparse.
  std::size_t sparse_threshold = kDefaultSparseThreshold;
};

// Complex matrix acting on the full space of a Space, stored dense or sparse.
class Operator {
 public:
  Operator(Space space, CMat matrix, bool hermitian = false);
  Operator(Space space, SpMat matrix, bool hermitian = false);

  const Space& space() const noexcept { return space_; }
  bool is_sparse() const noexcept { return std::holds_alternative<SpMat>(m_); }
  bool hermitian() const noexcept { return hermitian_; }

  CMat dense() const;
  SpMat sparse() const;
  const CMat* dense_ptr() const { return std::get_if<CMat>(&m_); }
  const SpMat* sparse_ptr() const { return std::get_if<SpMat>(&m_); }

  Operator adjoint() const;
  double hermiticity_defect() const;
  double max_abs() const;
  cplx element(std::size_t row, std::size_t col) const;

  CVec apply(const CVec& v) const;
  CMat apply(const CMat& x) const;        // O * X
  CMat apply_right(const CMat& x) const;  // X * O

  // Verifies the hermiticity defect is below 1e-12 and tags the result.
  Operator as_hermitian() const;

  friend Operator operator+(const Operator& a, const Operator& b);
  friend Operator operator-(const Operator& a, const Operator& b);
  friend Operator operator*(const Operator& a, const Operator& b);
  friend Operator operator*(cplx s, const Operator& a);
  friend Operator operator*(double s, const Operator& a);

 private:
  Space space_;
  std::variant<CMat, SpMat> m_;
  bool hermitian_ = false;
};

Operator commutator(const Operator& a, const Operator& b);

Operator identity(const Space& space, StorageOptions opts = {});
Operator annihilation(const Space& space, int mode, StorageOptions opts = {});
Operator creation(const Space& space, int mode, StorageOptions opts = {});
Operator number_operator(const Space& space, int mode,
                         StorageOptions opts = {});
// X(phi) = (e^{i phi} a^dag + e^{-i phi} a) / 2.
Operator quadrature(const Space& space, int mode, double phi,
                    StorageOptions opts = {});
// exp(i angle n) on one mode.
Operator phase_rotation(const Space& space, int mode, double angle,
                        StorageOptions opts = {});
// Lifts a single-mode matrix (dim x dim of that mode) to the full space.
Operator embed(const Space& space, int mode, const CMat& local,
               StorageOptions opts = {});

enum class StateKind { pure, density };

struct DensityTolerances {
  double trace = 1e-10;
  double hermitian = 1e-12;
  double min_eigenvalue = 1e-10;
  // The eigenvalue check is skipped above this total dimension.
  std::size_t eigen_check_limit = 1024;
};

class State {
 public:
  // Requires | |psi| - 1 | < 1e-10.
  static State pure(Space space, CVec psi, double tail_mass = 0.0);
  // Rescales psi to unit norm; zero vectors are rejected.
  static State normalized(Space space, CVec psi, double tail_mass = 0.0);
  static State density(Space space, CMat rho, double tail_mass = 0.0,
                       const DensityTolerances& tol = {});

  const Space& space() const noexcept { return space_; }
  StateKind kind() const noexcept { return kind_; }
  bool is_pure() const noexcept { return kind_ == StateKind::pure; }
  double tail_mass() const noexcept { return tail_mass_; }

  const CVec& vector() const;
  const CMat& matrix() const;
  CMat density_matrix() const;
  State to_density() const;

 private:
  State(Space space, StateKind kind, double tail)
      : space_(std::move(space)), kind_(kind), tail_mass_(tail) {}

  Space space_;
  StateKind kind_;
  CVec psi_;
  CMat rho_;
  double tail_mass_ = 0.0;
};

// Normalized truncated Fock coefficients of a single-mode coherent state.
// tail receives the Poisson mass beyond the truncation.
CVec coherent_coefficients(int dim, cplx alpha, double* tail = nullptr);

State coherent_state(const Space& space, const std::vector<cplx>& amplitudes,
                     double tail_tolerance = kDefaultTailTolerance);
State fock_state(const Space& space, const std::vector<int>& occupation);
State tensor_product(const State& a, const State& b);

// U psi for pure states, U rho U^dag for densities.
State transform(const Operator& u, const State& s);

cplx expectation(const State& s, const Operator& op);
double variance(const State& s, const Operator& op);

// Reduced density matrix on keep_modes; the result keeps ascending mode order.
State partial_trace(const State& s, std::vector<int> keep_modes);

// exp[theta (a^dag b - a b^dag)] with theta = arccos(sqrt(T)), so that
// U^dag a U = sqrt(T) a + sqrt(R) b and U^dag b U = -sqrt(R) a + sqrt(T) b.
Operator beam_splitter(const Space& space, double transmissivity,
                       int mode_a = 0, int mode_b = 1,
                       StorageOptions opts = {});

}  // namespace nloq
