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
#include <cmath>

#include "tpulse/dynamics.hpp"
#include "tpulse/errors.hpp"

using namespace tpulse;

namespace {

SystemModel qubit(int levels, double t1 = kInfiniteTime, double t2 = kInfiniteTime) {
  return SystemModel({TransmonParams::from_mhz(7500, -380, t1, t2, levels)});
}

SystemModel pair() {
  return SystemModel({TransmonParams::from_mhz(7500, -380, 260, 170),
                      TransmonParams::from_mhz(8500, -420, 260, 170)},
                     mhz_to_rad_per_ns(5.0));
}

DrivePulse drag_pulse(double freq) {
  DrivePulse p;
  p.i_envelope = EnvelopeSpec::ideal_drag_i(25.0, 20.0);
  p.q_envelope = EnvelopeSpec::ideal_drag_q(3.0, 20.0);
  p.carrier = {freq, 0.0};
  return p;
}

double overlap(const DensityMatrix& a, const DensityMatrix& b) {
  return (a.matrix() * b.matrix()).trace().real();
}

}  // namespace

TEST_CASE("undriven ground state is stationary") {
  const SystemModel m = pair();
  const auto rho = DensityMatrix::basis(m, {0, 0});
  EvolutionConfig c;
  c.end_time = 50.0;
  const auto r = evolve(m, PulseProgram{}, rho, c);
  CHECK((r.final_state.matrix() - rho.matrix()).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("resonant square drive transfers |0> to |1> on two levels") {
  const SystemModel m = qubit(2);
  const double amp = 5.0;
  DrivePulse p;
  p.i_envelope = EnvelopeSpec::square(amp, 1e3 / amp);  // full transfer time
  p.carrier = {7500.0, 0.0};
  EvolutionConfig c;
  c.mode = EvolutionMode::unitary;
  const auto r = evolve(m, PulseProgram{{p}}, DensityMatrix::basis(m, {0}), c);
  CHECK(r.final_state.population(1) > 1.0 - 1e-4);
}

TEST_CASE("T1 decay of |1>") {
  const SystemModel m = qubit(3, 260.0, 520.0);
  EvolutionConfig c;
  for (double t : {100e3, 260e3, 780e3}) c.sample_times.push_back(t);
  c.observables = {{"p1", level_projector(m, 0, 1)}};
  c.end_time = 780e3;
  const auto r = evolve(m, PulseProgram{}, DensityMatrix::basis(m, {1}), c);
  const auto& p1 = r.samples->values[0];
  CHECK(p1[0] == doctest::Approx(std::exp(-100.0 / 260.0)).epsilon(1e-4 / 0.68));
  CHECK(p1[1] == doctest::Approx(std::exp(-1.0)).epsilon(1e-6));
  // time constant from the 3 T1 point
  CHECK(-780.0 / std::log(p1[2]) == doctest::Approx(260.0).epsilon(1e-3));
}

TEST_CASE("Ramsey coherence decays with T2") {
  const SystemModel m = qubit(3, 260.0, 170.0);
  StateVector psi = StateVector::Zero(3);
  psi(0) = psi(1) = 1.0 / std::sqrt(2.0);
  EvolutionConfig c;
  c.end_time = 170e3;
  const auto r = evolve(m, PulseProgram{}, DensityMatrix::pure(psi), c);
  const double coh = std::abs(r.final_state.matrix()(0, 1));
  CHECK(coh == doctest::Approx(0.5 * std::exp(-1.0)).epsilon(5e-3));
}

TEST_CASE("Lindblad evolution preserves trace, hermiticity and positivity") {
  const SystemModel m = pair();
  const auto dressed = dressed_qubit_frequencies(m);
  DrivePulse p = drag_pulse(rad_per_ns_to_mhz(dressed[0]));
  EvolutionConfig c;
  for (double t = 0.0; t <= 20.0; t += 0.1) c.sample_times.push_back(t);
  c.observables = {{"trace", Operator::Identity(9, 9)}};
  const auto r = evolve(m, PulseProgram{{p}}, DensityMatrix::basis(m, {0, 0}), c);
  for (double tr : r.samples->values[0]) CHECK(std::abs(tr - 1.0) < 1e-8);
  const Operator& rho = r.final_state.matrix();
  CHECK((rho - rho.adjoint()).cwiseAbs().maxCoeff() < 1e-9);
  const Eigen::SelfAdjointEigenSolver<Operator> es(0.5 * (rho + rho.adjoint()));
  CHECK(es.eigenvalues().minCoeff() > -1e-8);
}

TEST_CASE("unitary mode preserves the norm and matches zero-rate Lindblad") {
  const SystemModel m = pair().without_decoherence();
  const auto dressed = dressed_qubit_frequencies(m);
  const PulseProgram prog{{drag_pulse(rad_per_ns_to_mhz(dressed[0]))}};
  const auto rho0 = DensityMatrix::basis(m, {0, 0});
  EvolutionConfig u;
  u.mode = EvolutionMode::unitary;
  EvolutionConfig l;
  l.mode = EvolutionMode::lindblad;
  const auto ru = evolve(m, prog, rho0, u);
  const auto rl = evolve(m, prog, rho0, l);
  CHECK(std::abs(ru.final_state.trace() - 1.0) < 1e-9);
  CHECK(overlap(ru.final_state, rl.final_state) > 1.0 - 1e-9);
}

TEST_CASE("step halving converges") {
  const SystemModel m = pair();
  const auto dressed = dressed_qubit_frequencies(m);
  const PulseProgram prog{{drag_pulse(rad_per_ns_to_mhz(dressed[0]))}};
  const auto rho0 = DensityMatrix::basis(m, {0, 0});
  EvolutionConfig a;
  a.mode = EvolutionMode::unitary;
  a.max_step = EvolutionConfig::step_limit(prog.max_carrier_mhz());
  EvolutionConfig b = a;
  b.max_step = 0.5 * a.max_step;
  const auto ra = evolve(m, prog, rho0, a);
  const auto rb = evolve(m, prog, rho0, b);
  CHECK(std::abs(overlap(ra.final_state, rb.final_state) - 1.0) < 1e-8);
}

TEST_CASE("step limit is enforced") {
  const SystemModel m = qubit(3);
  const PulseProgram prog{{drag_pulse(7500.0)}};
  EvolutionConfig c;
  c.max_step = 1.0;
  CHECK_THROWS_AS(evolve(m, prog, DensityMatrix::basis(m, {0}), c), Error);
  CHECK(EvolutionConfig::step_limit(8500.0) == doctest::Approx(1.0 / (20 * 8.5)));
}

TEST_CASE("expectation values") {
  const SystemModel m = qubit(3);
  const Operator z = z_operator(m, 0);
  CHECK(expectation(DensityMatrix::basis(m, {0}), z) == doctest::Approx(1.0));
  CHECK(expectation(DensityMatrix::basis(m, {1}), z) == doctest::Approx(-1.0));
  StateVector psi = StateVector::Zero(3);
  psi(0) = psi(1) = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(expectation(DensityMatrix::pure(psi), z)) < 1e-15);
  CHECK(expectation(DensityMatrix::basis(m, {2}), number_operator(m, 0)) == doctest::Approx(2.0));
  Operator bad = Operator::Zero(3, 3);
  bad(0, 1) = 1.0;
  CHECK_THROWS_AS(expectation(DensityMatrix::basis(m, {0}), bad), Error);
}

TEST_CASE("drive scale calibration") {
  const SystemModel m = qubit(3);
  const double s = calibrate_drive_scale(m, 0);
  CHECK(s == doctest::Approx(0.5).epsilon(1e-3));
  const double f5 = measure_rabi(m, 0, 5.0, s).frequency;
  const double f10 = measure_rabi(m, 0, 10.0, s).frequency;
  CHECK(f10 / f5 == doctest::Approx(2.0).epsilon(1e-3));
  // linear within 1 % up to the X90 amplitude
  const double f25 = measure_rabi(m, 0, 25.0, s).frequency;
  CHECK(f25 / f5 == doctest::Approx(5.0).epsilon(1e-2));
}

TEST_CASE("trajectory CSV") {
  ExpectationSeries s;
  s.times = {0.0, 0.5};
  s.names = {"z"};
  s.values = {{1.0, 0.5}};
  const std::string csv = trajectory_csv(s);
  CHECK(csv.find("time_ns,z") != std::string::npos);
  CHECK(csv.find("0.5,0.5") != std::string::npos);
}
