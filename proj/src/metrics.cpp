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

#include "tpulse/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "tpulse/errors.hpp"

namespace tpulse {

namespace {

int driven_line(const PulseProgram& program) {
  if (program.pulses.empty()) return 0;
  const int line = program.pulses.front().target_line;
  for (const auto& p : program.pulses) {
    if (p.target_line != line) {
      fail(ErrorCode::invalid_argument, "program drives several lines; name the qubit");
    }
  }
  return line;
}

void require_two_qubits(const SystemModel& model) {
  if (model.num_qubits() != 2) fail(ErrorCode::invalid_argument, "a two-qubit model is required");
}

// Lab-frame columns for |c, 0> (c = 0, 1) or the full computational basis.
Operator basis_columns(const SystemModel& model, const std::vector<std::vector<int>>& states) {
  Operator cols = Operator::Zero(model.dim(), static_cast<int>(states.size()));
  for (std::size_t i = 0; i < states.size(); ++i) {
    cols(model.basis_index(states[i]), static_cast<int>(i)) = 1.0;
  }
  return cols;
}

}  // namespace

double leakage_expectation(const SystemModel& model, const PulseProgram& program,
                           const DensityMatrix& initial, const EvolutionConfig& config,
                           int qubit) {
  const int q = qubit >= 0 ? qubit : driven_line(program);
  if (model.levels(q) < 3) fail(ErrorCode::invalid_dimension, "leakage needs at least 3 levels");
  const auto res = evolve(model, program, initial, config);
  return expectation(res.final_state, level_projector(model, q, 2));
}

namespace {
bool is_zero(const EnvelopeSpec& e) {
  if (e.kind == EnvelopeKind::staircase) {
    return std::all_of(e.steps.begin(), e.steps.end(), [](double a) { return a == 0.0; });
  }
  return e.amplitude == 0.0;
}
}  // namespace

ZErrorResult z_error(const SystemModel& model, const DrivePulse& cr_pulse,
                     const EvolutionConfig& config) {
  require_two_qubits(model);
  const int control = cr_pulse.target_line;
  const int target = 1 - control;
  const Operator z = z_operator(model, control);
  const PulseProgram program{{cr_pulse}};
  ZErrorResult out;
  // a pulse that is zero everywhere is no operation
  if (is_zero(cr_pulse.i_envelope) && (!cr_pulse.q_envelope || is_zero(*cr_pulse.q_envelope))) {
    return out;
  }
  for (int c = 0; c < 2; ++c) {
    std::vector<int> levels(2);
    levels[control] = c;
    levels[target] = 0;
    const double before = c == 0 ? 1.0 : -1.0;
    double after = 0.0;
    if (config.mode == EvolutionMode::unitary) {
      const Operator psi = propagate_columns(model, program, basis_columns(model, {levels}), config);
      after = (psi.adjoint() * z * psi)(0, 0).real();
    } else {
      after = expectation(
          evolve(model, program, DensityMatrix::basis(model, levels), config).final_state, z);
    }
    out.per_control[c] = std::abs(after - before);
  }
  out.value = std::max(out.per_control[0], out.per_control[1]);
  return out;
}

AxisAngle axis_angle(const Eigen::Matrix2cd& u) {
  const cplx det = u.determinant();
  if (std::abs(det) < 1e-12) fail(ErrorCode::calibration_failed, "matrix is singular");
  const Eigen::Matrix2cd w = u / std::sqrt(det);
  // w = cos(a/2) I - i sin(a/2) n.sigma, defined up to sign.
  double c = 0.5 * w.trace().real();
  const double sign = c < 0.0 ? -1.0 : 1.0;
  c = std::min(1.0, std::abs(c));
  AxisAngle out;
  out.angle = 2.0 * std::acos(c);
  const double nx = -sign * 0.5 * (w(0, 1) + w(1, 0)).imag();
  const double ny = sign * 0.5 * (w(1, 0) - w(0, 1)).real();
  const double nz = -sign * 0.5 * (w(0, 0) - w(1, 1)).imag();
  const double norm = std::sqrt(nx * nx + ny * ny + nz * nz);
  if (norm > 0.0) out.axis = {nx / norm, ny / norm, nz / norm};
  return out;
}

ConditionalRotation conditional_rotation(const SystemModel& model, const DrivePulse& cr_pulse,
                                         const EvolutionConfig& config) {
  require_two_qubits(model);
  const int control = cr_pulse.target_line;
  const int target = 1 - control;
  std::vector<std::vector<int>> states;
  for (int c = 0; c < 2; ++c) {
    for (int t = 0; t < 2; ++t) {
      std::vector<int> levels(2);
      levels[control] = c;
      levels[target] = t;
      states.push_back(levels);
    }
  }
  const Operator cols = basis_columns(model, states);
  const Operator u = propagate_columns(model, PulseProgram{{cr_pulse}}, cols, config);

  ConditionalRotation r;
  r.propagator.resize(4, 4);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) r.propagator(i, j) = u(model.basis_index(states[i]), j);
  }
  // Order is (control, target), so blocks are rows/cols {0,1} and {2,3}.
  const Eigen::Matrix2cd u0 = r.propagator.block<2, 2>(0, 0);
  const Eigen::Matrix2cd u1 = r.propagator.block<2, 2>(2, 2);
  const AxisAngle aa = axis_angle(u1.adjoint() * u0);
  r.relative_angle = aa.angle;
  r.conditional_angle = 0.5 * aa.angle;
  r.axis = aa.axis;
  return r;
}

double conditional_phase_error(const ConditionalRotation& r) {
  return std::abs(r.conditional_angle - std::numbers::pi / 2);
}

}  // namespace tpulse
