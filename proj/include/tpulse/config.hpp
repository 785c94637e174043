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

// Experiment configuration: INI-style sections of `key = value` lines.
//
//   # comment
//   [system]
//   q0_freq_mhz = 7500
//
// Lists are comma separated. Unknown sections or keys are errors, reported
// with their line number. serialize() writes every key, and parsing its
// output gives back an identical configuration.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tpulse/calibration.hpp"
#include "tpulse/clifford.hpp"
#include "tpulse/cost.hpp"
#include "tpulse/dynamics.hpp"
#include "tpulse/gates.hpp"
#include "tpulse/quantum.hpp"

namespace tpulse {

struct QubitConfig {
  double freq_mhz = 0.0;
  double anharmonicity_mhz = 0.0;
  double t1_us = 260.0;
  double t2_us = 170.0;
  bool operator==(const QubitConfig&) const = default;
};

struct ExperimentConfig {
  // [system]
  int num_qubits = 2;
  std::array<QubitConfig, 2> qubits{{{7500.0, -380.0, 260.0, 170.0}, {8500.0, -420.0, 260.0, 170.0}}};
  double coupling_mhz = 5.0;
  int levels = 3;
  bool decoherence = true;

  // [pulse]
  WaveformMode mode = WaveformMode::ideal;
  bool filter = true;        // LPF on staircase and square CR pulses
  bool drag_filter = false;  // LPF on X90 pulses as well
  double cutoff_mhz = 100.0;
  double drag_length_ns = 20.0;
  double sample_time_ns = 1.0;
  double cr_amplitude_mhz = 300.0;
  double cr_rise_ns = 50.0;
  double cr_length_ns = 0.0;  // total length; 0 calibrates

  // [experiment]
  std::string study = "custom";
  std::string sweep_parameter = "sample_time";
  std::string sweep_objective = "z_error";
  double sweep_start = 0.1;
  double sweep_stop = 30.0;
  double sweep_step = 0.02;
  std::vector<double> amplitudes_mhz{300.0, 725.0, 1150.0, 1575.0, 2000.0};
  double frontier_rise_ns = 10.0;
  std::vector<double> frontier_amplitudes_mhz;  // empty: 300..2000 step 10
  std::string program = "x90";  // simulate: x90 | cr
  double sample_dt_ns = 0.5;
  std::vector<std::string> cost_pulses{"CR:70:1", "DRAG:20:2"};  // name:length_ns:quadratures

  // [solver]
  EvolutionMode solver_mode = EvolutionMode::lindblad;
  double relative_tolerance = 1e-8;
  double absolute_tolerance = 1e-10;
  double max_step_ns = 0.0;
  double drive_scale = 0.0;  // 0 calibrates from a Rabi measurement
  std::string frame = "lab";

  // [rb]
  std::vector<int> lengths_1q{1, 2, 4, 8, 16, 32, 64, 128};
  std::vector<int> lengths_2q{1, 2, 4, 8, 16, 32};
  int sequences = 20;
  std::uint64_t seed = 1;
  int bootstrap = 200;

  // [output]
  std::string output_dir = "results";
  std::string registry = "calibration_registry.txt";
  int threads = 1;

  bool operator==(const ExperimentConfig&) const = default;

  /// Throws Error(config_error) on inconsistent values.
  void validate() const;

  SystemModel model() const;
  EvolutionConfig solver() const;
  std::optional<FilterSpec> filter_spec() const;
  RbConfig rb_config(int qubits) const;
  std::vector<PulseCost> cost_workload() const;
};

/// Throws Error(config_error) with a "line N:" prefix on the first problem.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);
std::string serialize_config(const ExperimentConfig& config);

/// Shortest decimal form that parses back to the same double.
std::string exact_number(double x);

}  // namespace tpulse
