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

// Calibration searches (DRAG amplitudes, CR lengths) and parameter sweeps.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tpulse/gates.hpp"
#include "tpulse/metrics.hpp"

namespace tpulse {

struct DragCalibrationOptions {
  WaveformMode mode = WaveformMode::ideal;
  double pulse_length = 20.0;
  double sample_time = 1.0;
  std::optional<FilterSpec> filter;
  double drive_freq = 0.0;  // MHz; 0 uses the dressed frequency in `model`
  EvolutionConfig solver;   // mode is forced to unitary
  int grid_points = 81;
  int iterations = 2;
};

struct DragCalibration {
  DragTemplate pulse;
  double drive_freq = 0.0;
  double rotation_error = 0.0;  // rad
  double leakage = 0.0;
  int evaluations = 0;
};

/// Polar angle of the Bloch vector reached from |0>, and |2> population, for
/// one X90 template on a single transmon.
struct DragResponse {
  double angle = 0.0;
  double leakage = 0.0;
};
DragResponse drag_response(const SystemModel& model, int qubit, const DragTemplate& pulse,
                           double drive_freq, const EvolutionConfig& solver);

/// A from a grid plus root search on the rotation angle, B from a grid plus
/// Brent search on leakage, alternated `iterations` times. Square mode has
/// no quadrature term. A two-qubit model is reduced to the driven transmon.
DragCalibration calibrate_drag(const SystemModel& model, int qubit,
                               const DragCalibrationOptions& options);

struct CrCalibrationOptions {
  EvolutionConfig solver;       // mode is forced to unitary
  double max_length = 4000.0;   // ns
  double tolerance = 1e-3;      // rad on the conditional angle
  double drive_freq = 0.0;      // MHz; 0 uses the dressed target frequency
};

struct CrCalibration {
  CrTemplate pulse;
  double length = 0.0;  // flat time (flattop) or pulse length (square)
  double error = 0.0;   // |conditional angle - pi/2|
  ConditionalRotation rotation;
  int evaluations = 0;
};

/// Finds the length (flat_time, or pulse_length for square) at which the
/// conditional angle of `base` reaches pi/2: marches out from the shortest
/// pulse using the measured rate, then solves on the bracket with the angle
/// unfolded through pi.
CrCalibration calibrate_cr_length(const SystemModel& model, const CrTemplate& base,
                                  const CrCalibrationOptions& options);

CrCalibration calibrate_cr_flattop(const SystemModel& model, double rise_time, double amplitude,
                                   const CrCalibrationOptions& options,
                                   std::optional<FilterSpec> filter = std::nullopt);

CrCalibration calibrate_square_cr_length(const SystemModel& model, double amplitude,
                                         std::optional<FilterSpec> filter,
                                         const CrCalibrationOptions& options);

struct SweepPoint {
  double parameter = 0.0;
  double objective = 0.0;
  std::vector<double> extra;
  bool ok = true;
  std::string note;
};

struct SweepResult {
  std::string parameter;
  std::string objective;
  std::vector<std::string> extra_names;
  std::vector<SweepPoint> points;  // ordered by parameter
  std::map<std::string, std::string> metadata;

  /// Parameter of the smallest objective among points that succeeded.
  double argmin() const;
  std::string csv() const;
};

/// Z-error of the staircase version of `source` (an ideal flattop CR) for
/// each sample time, optionally low-pass filtered. Evaluated on the closed
/// system, so relaxation of the control does not mask the drive error.
SweepResult sweep_sampling_time(const SystemModel& model, const CrTemplate& source,
                                const std::vector<double>& sample_times,
                                std::optional<FilterSpec> filter, const EvolutionConfig& solver,
                                int threads = 1);

/// Optimal CR length versus amplitude. `base` fixes the shape (ideal flattop
/// with its rise time, or square) and filter; the objective column is the
/// total pulse length T_p. Failed points are flagged and the sweep goes on.
SweepResult sweep_amplitude_length_frontier(const SystemModel& model, const CrTemplate& base,
                                            const std::vector<double>& amplitudes,
                                            const CrCalibrationOptions& options,
                                            int threads = 1);

struct GateSetOptions {
  WaveformMode drag_mode = WaveformMode::ideal;
  double drag_length = 20.0;
  double drag_sample_time = 1.0;
  std::optional<FilterSpec> drag_filter;
  WaveformMode cr_mode = WaveformMode::ideal;
  double cr_amplitude = 300.0;
  double cr_rise_time = 50.0;
  double cr_sample_time = 1.0;
  std::optional<FilterSpec> cr_filter;
  double cr_length = 0.0;  // total CR length; 0 calibrates it
  EvolutionConfig solver;
  CrCalibrationOptions cr;
};

/// X90 per qubit, and for two qubits the CR pulse and its CNOT corrections.
GateSet calibrate_gate_set(const SystemModel& model, const GateSetOptions& options);

/// Model metadata shared by every artifact.
std::map<std::string, std::string> model_metadata(const SystemModel& model,
                                                  const EvolutionConfig& solver);

}  // namespace tpulse
