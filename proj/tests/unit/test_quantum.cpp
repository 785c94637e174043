// Copyright 2026 The tpulse Authors
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

#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>
#include <cmath>

#include "tpulse/errors.hpp"
#include "tpulse/quantum.hpp"

using namespace tpulse;

namespace {

SystemModel two_qubits(double j_mhz) {
  return SystemModel({TransmonParams::from_mhz(7500, -380, 260, 170),
                      TransmonParams::from_mhz(8500, -420, 260, 170)},
                     mhz_to_rad_per_ns(j_mhz));
}

double max_abs(const Operator& a) { return a.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("annihilation operator") {
  const Operator a2 = annihilation(2);
  CHECK(a2(0, 1).real() == 1.0);
  CHECK(max_abs(a2 - Operator{{0, 1}, {0, 0}}) == 0.0);
  const Operator a3 = annihilation(3);
  CHECK(a3(0, 1).real() == doctest::Approx(1.0));
  CHECK(a3(1, 2).real() == doctest::Approx(std::sqrt(2.0)));
  CHECK(std::abs(a3(0, 2)) == 0.0);
  const Operator n = a3.adjoint() * a3;
  CHECK(n(2, 2).real() == doctest::Approx(2.0));
  CHECK_THROWS_AS(annihilation(1), Error);
}

TEST_CASE("single transmon level energies") {
  const SystemModel m({TransmonParams::from_mhz(7500, -380, 260, 170)});
  const Operator h = static_hamiltonian(m);
  CHECK(rad_per_ns_to_mhz(h(1, 1).real() - h(0, 0).real()) == doctest::Approx(7500.0).epsilon(1e-12));
  CHECK(rad_per_ns_to_mhz(h(2, 2).real() - h(0, 0).real()) == doctest::Approx(14620.0).epsilon(1e-12));
  CHECK(max_abs(h - h.adjoint()) < 1e-12);
}

TEST_CASE("uncoupled Hamiltonian is a Kronecker sum") {
  const SystemModel m = two_qubits(0.0);
  const Operator h = static_hamiltonian(m);
  const Operator h0 = static_hamiltonian(m.single_qubit(0));
  const Operator h1 = static_hamiltonian(m.single_qubit(1));
  const Operator id = Operator::Identity(3, 3);
  Operator sum = Eigen::kroneckerProduct(h0, id).eval();
  sum += Eigen::kroneckerProduct(id, h1).eval();
  CHECK(max_abs(h - sum) < 1e-12);
}

TEST_CASE("dressed frequencies follow second-order perturbation theory") {
  const SystemModel m = two_qubits(5.0);
  const auto f = dressed_qubit_frequencies(m);
  const double j = 5.0, delta = 7500.0 - 8500.0;
  // qubit-qubit exchange shifts each 0->1 line by J^2/Delta (sign per qubit)
  CHECK(std::abs(rad_per_ns_to_mhz(f[0]) - (7500.0 + j * j / delta)) < 1e-5);
  CHECK(std::abs(rad_per_ns_to_mhz(f[1]) - (8500.0 - j * j / delta)) < 1e-5);
  const Eigen::SelfAdjointEigenSolver<Operator> es(static_hamiltonian(m));
  const Eigen::SelfAdjointEigenSolver<Operator> es0(static_hamiltonian(two_qubits(0.0)));
  // closest two-excitation detuning: |11> vs |02> at 1000 - 420 MHz
  const double bound = 1.5 * mhz_to_rad_per_ns(2.0 * j * j / 580.0);
  CHECK((es.eigenvalues() - es0.eigenvalues()).cwiseAbs().maxCoeff() < bound);
}

TEST_CASE("drive operator") {
  const SystemModel one({TransmonParams::from_mhz(7500, -380, 260, 170)});
  const Operator d = drive_operator(one, 0);
  CHECK(d(0, 1).real() == 1.0);
  CHECK(d(1, 2).real() == doctest::Approx(std::sqrt(2.0)));
  CHECK(max_abs(d - d.adjoint()) == 0.0);
  const SystemModel m = two_qubits(5.0);
  const Operator d0 = drive_operator(m, 0);
  CHECK(max_abs(d0 - Eigen::kroneckerProduct(d, Operator::Identity(3, 3)).eval()) < 1e-15);
  CHECK_THROWS_AS(drive_operator(m, 2), Error);
}

TEST_CASE("collapse operator rates") {
  const auto p = TransmonParams::from_mhz(7500, -380, 260, 170);
  CHECK(p.pure_dephasing_rate() * 1e3 == doctest::Approx(1.0 / 170 - 1.0 / 520).epsilon(1e-12));
  CHECK(p.pure_dephasing_rate() * 1e3 == doctest::Approx(3.960e-3).epsilon(1e-3));
  const SystemModel m({p});
  CHECK(collapse_operators(m).size() == 2);
  const SystemModel only_t1({TransmonParams::from_mhz(7500, -380, 100, 200)});
  const auto ops = collapse_operators(only_t1);
  REQUIRE(ops.size() == 1);
  CHECK(max_abs(ops[0] - std::sqrt(1.0 / 100e3) * annihilation(3)) < 1e-15);
  CHECK_THROWS_AS(TransmonParams::from_mhz(7500, -380, 100, 201).validate(), Error);
  CHECK(collapse_operators(m.without_decoherence()).empty());
}

TEST_CASE("parameter invariants") {
  CHECK_THROWS_AS(TransmonParams::from_mhz(7500, 380, 260, 170).validate(), Error);
  CHECK_NOTHROW(TransmonParams::from_mhz(7500, -380, 260, 170, 4).validate());
  const SystemModel m = two_qubits(5.0);
  CHECK(m.dim() == 9);
  CHECK(m.single_qubit(1).coupling() == 0.0);
  CHECK(m.basis_index({1, 2}) == 5);
}

TEST_CASE("density matrix invariants") {
  const SystemModel m = two_qubits(5.0);
  const auto rho = DensityMatrix::basis(m, {0, 1});
  CHECK(rho.trace() == doctest::Approx(1.0));
  CHECK(rho.population(1) == 1.0);
  Operator bad = Operator::Zero(9, 9);
  bad(0, 0) = 2.0;
  CHECK_THROWS_AS(DensityMatrix{bad}, Error);
  Operator neg = Operator::Zero(9, 9);
  neg(0, 0) = 1.5;
  neg(1, 1) = -0.5;
  CHECK_THROWS_AS(DensityMatrix{neg}, Error);
}

TEST_CASE("z operator and projectors") {
  const SystemModel m = two_qubits(5.0);
  const Operator z = z_operator(m, 0);
  CHECK(z(m.basis_index({0, 0}), m.basis_index({0, 0})).real() == 1.0);
  CHECK(z(m.basis_index({1, 0}), m.basis_index({1, 0})).real() == -1.0);
  CHECK(z(m.basis_index({2, 0}), m.basis_index({2, 0})).real() == 0.0);
  const Operator p2 = level_projector(m, 1, 2);
  CHECK(p2.trace().real() == doctest::Approx(3.0));
}
