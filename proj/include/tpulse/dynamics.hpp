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

// Time evolution of a transmon register under its static Hamiltonian plus
// modulated drives, with an optional Lindblad dissipator.
//
// The integrator works in the interaction picture of the bare (diagonal)
// part of H0, which is an exact change of variables: the exchange term,
// counter-rotating drive terms and carrier aliasing are all kept. States are
// converted back to the lab frame whenever they are reported.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tpulse/pulse.hpp"
#include "tpulse/quantum.hpp"

namespace tpulse {

enum class EvolutionMode { lindblad, unitary };

const char* to_string(EvolutionMode mode);
EvolutionMode evolution_mode_from_string(const std::string& name);

struct EvolutionConfig {
  EvolutionMode mode = EvolutionMode::lindblad;
  double max_step = 0.0;  // ns; 0 selects 1/(20 f_max)
  double relative_tolerance = 1e-8;
  double absolute_tolerance = 1e-10;
  double drive_scale = 0.5;
  // Evolution stops at max(end_time, program end) when set.
  std::optional<double> end_time;
  // Observables recorded (lab frame) at each sample time.
  std::vector<double> sample_times;
  std::vector<std::pair<std::string, Operator>> observables;

  /// Largest admissible step for a program whose top carrier is f_max MHz.
  static double step_limit(double f_max_mhz);
  /// Throws step_size_violation if max_step does not resolve the carrier.
  void validate(const PulseProgram& program) const;
};

/// Hamiltonian coefficient (rad/ns per MHz of envelope) for a drive scale.
double drive_coefficient(double drive_scale);

struct ExpectationSeries {
  std::vector<double> times;
  std::vector<std::string> names;
  std::vector<std::vector<double>> values;  // values[k][i]: observable k at times[i]
};

struct EvolutionResult {
  DensityMatrix final_state = DensityMatrix::unchecked(Operator());
  std::optional<ExpectationSeries> samples;
  double final_time = 0.0;   // ns
  double wall_time = 0.0;    // s
  long accepted_steps = 0;
  long rejected_steps = 0;
};

EvolutionResult evolve(const SystemModel& model, const PulseProgram& program,
                       const DensityMatrix& initial, const EvolutionConfig& config);

/// Propagates state vectors (the columns of `columns`, lab frame at t = 0)
/// under the closed-system dynamics; returns the lab-frame columns at the end
/// of the evolution. Decay is ignored whatever config.mode says.
Operator propagate_columns(const SystemModel& model, const PulseProgram& program,
                           const Operator& columns, const EvolutionConfig& config);

/// tr(rho O); throws non_hermitian for a non-Hermitian observable.
double expectation(const DensityMatrix& state, const Operator& observable);

/// Trajectory dump with a time_ns column followed by one column per observable.
std::string trajectory_csv(const ExpectationSeries& series);

struct RabiFit {
  double frequency = 0.0;  // MHz, population oscillation
  double rms_residual = 0.0;
};

/// Drives `qubit_index` resonantly with an unfiltered square envelope of
/// amplitude `amplitude` MHz and fits the |1> population over at least
/// `cycles` oscillations.
RabiFit measure_rabi(const SystemModel& model, int qubit_index, double amplitude,
                     double drive_scale, double cycles = 3.0);

/// Drive scale for which an envelope of amplitude A MHz moves |0> to |1> in
/// 1/A microseconds, measured at a weak test amplitude.
double calibrate_drive_scale(const SystemModel& model, int qubit_index,
                             double test_amplitude = 5.0);

}  // namespace tpulse
