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

// One-parameter sweeps of a pulse template against a scalar objective.

#include <string>
#include <vector>

#include "tpulse/calibration.hpp"
#include "tpulse/clifford.hpp"
#include "tpulse/rb.hpp"

namespace tpulse {

/// Parameters: drag_amplitude, drag_coefficient, drag_length (X90 on
/// `qubit`) and sample_time, cr_amplitude, cr_flat_time, cr_length (CR).
/// Objectives: rotation_angle_error, leakage and rb_infidelity for the X90
/// parameters; z_error and conditional_phase_error for the CR ones.
struct SweepSpec {
  std::string parameter;
  double start = 0.0;
  double stop = 1.0;
  double step = 0.1;
  std::string objective;

  /// Throws Error(config_error) for unknown names, unsupported pairs or a bad range.
  void validate() const;
  /// start, start + step, ... up to stop (inclusive within 1e-9 step).
  std::vector<double> grid() const;
};

struct SweepContext {
  int qubit = 0;
  DragTemplate drag;
  double drag_freq = 0.0;  // MHz; 0 uses the dressed frequency
  CrTemplate cr;
  EvolutionConfig solver;
  RbConfig rb;  // rb_infidelity only
  RbOptions rb_options;
  int threads = 1;
};

SweepResult run_sweep(const SystemModel& model, const SweepSpec& spec, const SweepContext& context);

}  // namespace tpulse
