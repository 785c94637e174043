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

#pragma once

// Pulse-quality metrics: |2> leakage, control-qubit Z-error and the
// conditional rotation produced by a cross-resonance pulse.

#include <array>
#include <optional>

#include "tpulse/dynamics.hpp"

namespace tpulse {

/// Population of level |2> of `qubit` at the end of the program. When
/// `qubit` is negative the driven line of the program's pulses is used.
double leakage_expectation(const SystemModel& model, const PulseProgram& program,
                           const DensityMatrix& initial, const EvolutionConfig& config,
                           int qubit = -1);

struct ZErrorResult {
  std::array<double, 2> per_control{};  // control prepared in |0>, |1>
  double value = 0.0;                   // max of the two
};

/// |<Z_c>(after) - <Z_c>(before)| with the target in |0>, maximised over
/// control in {|0>, |1>}. The control is the qubit whose line the pulse
/// drives. Z is measured on the bare transmon levels.
ZErrorResult z_error(const SystemModel& model, const DrivePulse& cr_pulse,
                     const EvolutionConfig& config);

/// Target-qubit action of a pulse conditioned on the control state. U0 and
/// U1 are the target blocks of the computational-subspace propagator for
/// control |0> and |1>; W = U1^dagger U0 (normalised to SU(2)) is a rotation by
/// `relative_angle` in [0, pi] about `axis`. A ZX(theta) gate gives a relative
/// angle of 2 theta, so `conditional_angle` = relative_angle / 2.
struct ConditionalRotation {
  double relative_angle = 0.0;
  double conditional_angle = 0.0;
  std::array<double, 3> axis{};
  Operator propagator;  // 4x4 computational block, lab frame
};

/// Angle in [0, pi] and unit axis of a 2x2 unitary read as a rotation
/// (global phase and the SU(2) sign are ignored). The axis is zero for the
/// identity.
struct AxisAngle {
  double angle = 0.0;
  std::array<double, 3> axis{};
};
AxisAngle axis_angle(const Eigen::Matrix2cd& u);

ConditionalRotation conditional_rotation(const SystemModel& model, const DrivePulse& cr_pulse,
                                         const EvolutionConfig& config);

/// Error of a conditional rotation against ZX(pi/2): |conditional_angle - pi/2|.
double conditional_phase_error(const ConditionalRotation& r);

}  // namespace tpulse
