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

#include "nloq/models.hpp"

#include <cmath>
#include <sstream>

namespace nloq {

namespace {

void require_modes(const Space& space, int n, const char* who) {
  if (space.modes() != n) {
    std::ostringstream os;
    os << who << " needs " << n << " modes, space has " << space.modes();
    throw Error(Errc::contract, os.str());
  }
}

void require_rate(double rate, const char* what) {
  if (!(rate >= 0.0) || !std::isfinite(rate)) {
    std::ostringstream os;
    os << what << " = " << rate << " must be a finite non-negative rate";
    throw Error(Errc::parameter, os.str());
  }
}

Operator power(const Operator& op, int n) {
  Operator out = op;
  for (int k = 1; k < n; ++k) out = out * op;
  return out;
}

ModelSpec finish(ModelSpec m) {
  m.validate();
  return m;
}

}  // namespace

Operator ModelSpec::hamiltonian_at(double t) const {
  Operator h = hamiltonian;
  for (const auto& term : rotating) {
    const Operator x = std::polar(1.0, -term.frequency * t) * term.op;
    h = h + x + x.adjoint();
  }
  return h;
}

const Operator& ModelSpec::charge(const std::string& charge_name) const {
  for (const auto& c : charges)
    if (c.name == charge_name) return c.op;
  throw Error(Errc::contract, "model has no charge named '" + charge_name + "'");
}

void ModelSpec::validate() const {
  if (hamiltonian.space() != space)
    throw Error(Errc::contract, "Hamiltonian space differs from model space");
  const double defect = hamiltonian.hermiticity_defect();
  if (!(defect < 1e-12)) {
    std::ostringstream os;
    os << name << ": Hamiltonian hermiticity defect " << defect;
    throw Error(Errc::contract, os.str());
  }
  for (const auto& d : dissipators) {
    require_rate(d.rate, "dissipator rate");
    if (d.op.space() != space)
      throw Error(Errc::contract, "dissipator acts on a different space");
  }
  for (const auto& c : charges) {
    if (!(c.op.hermiticity_defect() < 1e-12))
      throw Error(Errc::contract, "charge " + c.name + " is not hermitian");
    double worst = commutator(hamiltonian, c.op).max_abs();
    for (const auto& term : rotating)
      worst = std::max(worst, commutator(term.op, c.op).max_abs());
    if (!(worst < 1e-10)) {
      std::ostringstream os;
      os << name << ": charge " << c.name << " has |[H, M]| = " << worst;
      throw Error(Errc::contract, os.str());
    }
  }
}

ModelSpec h_two_mode_chi2(const Space& space, double omega, double kappa,
                          StorageOptions opts) {
  require_modes(space, 2, "h_two_mode_chi2");
  const Operator a = annihilation(space, 0, opts);
  const Operator b = annihilation(space, 1, opts);
  const Operator na = number_operator(space, 0, opts);
  const Operator nb = number_operator(space, 1, opts);
  const Operator ad2b = a.adjoint() * a.adjoint() * b;
  const Operator h =
      (omega * na + (2.0 * omega) * nb + kappa * (ad2b + ad2b.adjoint()))
          .as_hermitian();
  return finish({"two_mode_chi2", space, h, {}, {},
                 {{"M", (na + 2.0 * nb).as_hermitian()}}, Frame::lab});
}

ModelSpec h_three_mode_chi2(const Space& space, double omega1, double omega2,
                            double kappa, StorageOptions opts) {
  require_modes(space, 3, "h_three_mode_chi2");
  const Operator c = annihilation(space, 0, opts);
  const Operator a = annihilation(space, 1, opts);
  const Operator b = annihilation(space, 2, opts);
  const Operator nc = number_operator(space, 0, opts);
  const Operator na = number_operator(space, 1, opts);
  const Operator nb = number_operator(space, 2, opts);
  const Operator split = c * a.adjoint() * b.adjoint();
  const Operator h = ((omega1 + omega2) * nc + omega1 * na + omega2 * nb +
                      kappa * (split + split.adjoint()))
                         .as_hermitian();
  return finish({"three_mode_chi2", space, h, {}, {},
                 {{"M1", (na - nb).as_hermitian()},
                  {"M2", (2.0 * nc + na + nb).as_hermitian()}},
                 Frame::lab});
}

ModelSpec h_kerr_single(const Space& space, double omega, double kappa,
                        StorageOptions opts) {
  require_modes(space, 1, "h_kerr_single");
  const Operator a = annihilation(space, 0, opts);
  const Operator n = number_operator(space, 0, opts);
  const Operator h =
      (omega * n + (0.5 * kappa) * (a.adjoint() * a.adjoint() * a * a))
          .as_hermitian();
  return finish({"kerr_single", space, h, {}, {}, {{"n", n}}, Frame::lab});
}

ModelSpec h_kerr_cross(const Space& space, double omega1, double omega2,
                       double kappa, StorageOptions opts) {
  require_modes(space, 2, "h_kerr_cross");
  const Operator a = annihilation(space, 0, opts);
  const Operator b = annihilation(space, 1, opts);
  const Operator na = number_operator(space, 0, opts);
  const Operator nb = number_operator(space, 1, opts);
  const Operator h = (omega1 * na + omega2 * nb +
                      (0.5 * kappa) * (a.adjoint() * b.adjoint() * a * b))
                         .as_hermitian();
  return finish({"kerr_cross", space, h, {}, {},
                 {{"n_a", na}, {"n_b", nb}}, Frame::lab});
}

ModelSpec h_nphoton(const Space& space, double omega, double kappa_n, int n,
                    StorageOptions opts) {
  require_modes(space, 2, "h_nphoton");
  if (n < 2) throw Error(Errc::parameter, "photon order n must be >= 2");
  if (space.dim(0) <= n) {
    std::ostringstream os;
    os << "signal dimension " << space.dim(0) << " cannot hold " << n
       << " photons";
    throw Error(Errc::truncation, os.str());
  }
  const Operator a = annihilation(space, 0, opts);
  const Operator b = annihilation(space, 1, opts);
  const Operator na = number_operator(space, 0, opts);
  const Operator nb = number_operator(space, 1, opts);
  const Operator adnb = power(a.adjoint(), n) * b;
  const Operator h = (omega * na + (n * omega) * nb +
                      kappa_n * (adnb + adnb.adjoint()))
                         .as_hermitian();
  return finish({"nphoton", space, h, {}, {},
                 {{"M", (na + static_cast<double>(n) * nb).as_hermitian()}},
                 Frame::lab});
}

ModelSpec h_parametric_classical_pump(const Space& space, double kappa,
                                      cplx beta, double phi_p,
                                      StorageOptions opts) {
  require_modes(space, 1, "h_parametric_classical_pump");
  if (!(std::abs(beta) > 0.0))
    throw Error(Errc::parameter, "pump amplitude must be nonzero");
  const Operator a = annihilation(space, 0, opts);
  const Operator ad2 = a.adjoint() * a.adjoint();
  const cplx g = cplx(0.0, 0.5 * kappa * std::abs(beta)) *
                 std::polar(1.0, phi_p);
  const Operator x = g * ad2;
  const Operator h = (x + x.adjoint()).as_hermitian();
  return finish({"parametric_classical_pump", space, h, {}, {}, {},
                 Frame::interaction});
}

ModelSpec h_parametric_lab(const Space& space, double omega, double kappa,
                           cplx beta, StorageOptions opts) {
  require_modes(space, 1, "h_parametric_lab");
  const Operator a = annihilation(space, 0, opts);
  const Operator n = number_operator(space, 0, opts);
  ModelSpec m{"parametric_lab", space, omega * n, {}, {}, {}, Frame::lab};
  m.rotating.push_back({(kappa * beta) * (a.adjoint() * a.adjoint()),
                        2.0 * omega});
  return finish(std::move(m));
}

ModelSpec h_degenerate_amplifier(const Space& space, double kappa,
                                 cplx pump_offset, StorageOptions opts) {
  require_modes(space, 2, "h_degenerate_amplifier");
  const Operator a = annihilation(space, 0, opts);
  const Operator b = annihilation(space, 1, opts);
  const Operator pump = b + pump_offset * identity(space, opts);
  const Operator x = cplx(0.0, 0.5 * kappa) * (pump * a.adjoint() * a.adjoint());
  const Operator h = (x + x.adjoint()).as_hermitian();
  ModelSpec m{"degenerate_amplifier", space, h, {}, {}, {},
              Frame::interaction};
  if (pump_offset == cplx(0.0, 0.0))
    m.charges.push_back({"M", (number_operator(space, 0, opts) +
                               2.0 * number_operator(space, 1, opts))
                                  .as_hermitian()});
  return finish(std::move(m));
}

ModelSpec dpo_model(const Space& space, double kappa, double E0,
                    double gamma_a, double gamma_b, StorageOptions opts) {
  require_modes(space, 2, "dpo_model");
  require_rate(gamma_a, "gamma_a");
  require_rate(gamma_b, "gamma_b");
  if (!std::isfinite(kappa) || !std::isfinite(E0))
    throw Error(Errc::parameter, "kappa and E0 must be finite");
  const Operator a = annihilation(space, 0, opts);
  const Operator b = annihilation(space, 1, opts);
  const Operator x = cplx(0.0, 0.5 * kappa) * (b * a.adjoint() * a.adjoint()) +
                     cplx(0.0, E0) * b.adjoint();
  const Operator h = (x + x.adjoint()).as_hermitian();
  ModelSpec m{"dpo", space, h, {}, {}, {}, Frame::interaction};
  m.dissipators.push_back({a, gamma_a});
  m.dissipators.push_back({b, gamma_b});
  return finish(std::move(m));
}

}  // namespace nloq
