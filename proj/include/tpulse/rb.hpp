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

// Randomized benchmarking: sequence execution, decay fit and bootstrap.

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "tpulse/calibration.hpp"
#include "tpulse/clifford.hpp"
#include "tpulse/gates.hpp"

namespace tpulse {

enum class RbBackend {
  pulse,         // full pulse program through the dynamics
  symbolic,      // ideal native gates, exact matrices
  depolarizing,  // ideal Cliffords followed by a depolarizing channel
};

const char* to_string(RbBackend backend);

struct RbOptions {
  RbBackend backend = RbBackend::pulse;
  double depolarizing_p = 1.0;  // survival parameter per Clifford
  EvolutionConfig solver;
  int threads = 1;
  int bootstrap = 200;
};

struct DecayFit {
  double amplitude = 0.0;
  double baseline = 0.0;
  double decay = 0.0;
  double decay_stderr = 0.0;
  double rms = 0.0;
  bool baseline_fixed = false;
  bool ok = false;
  std::string message;
};

/// Least-squares fit of A p^m + B, started at (0.5, 0.5, 0.99). B is held
/// at `fallback_baseline` (1/d) when the survival never drops halfway from 1
/// to it, or when the free fit lands on A or B outside [0, 1] or leaves B
/// with a standard error above 0.05: shallow decays do not pin the baseline.
/// Flat data gives p = 1 exactly. ok is false when p leaves [0, 1] or the RMS
/// residual exceeds 0.05. `force_fixed` skips the free fit.
DecayFit fit_decay(const std::vector<double>& lengths, const std::vector<double>& survival,
                   double fallback_baseline = 0.5, bool force_fixed = false);

/// Average error per Clifford (d-1)(1-p)/d for d = 2^qubits.
double rb_infidelity(double decay, int qubits);

struct RbSample {
  int length = 0;
  int sequence = 0;
  double survival = 0.0;
};

struct RbResult {
  int qubits = 1;
  std::vector<int> lengths;
  std::vector<double> mean_survival;
  DecayFit fit;
  double infidelity = 0.0;      // percent
  double infidelity_std = 0.0;  // percent, bootstrap over sequences
  int bootstrap_used = 0;
  std::vector<RbSample> samples;
  std::map<std::string, std::string> metadata;

  std::string raw_csv() const;
  std::string summary_json() const;
};

/// Survival probability of the all-zero register after one sequence.
double run_sequence(const SystemModel& model, const GateSet& gates, const CliffordSequence& seq,
                    const RbOptions& options);

RbResult run_rb(const SystemModel& model, const GateSet& gates, const RbConfig& config,
                const RbOptions& options);

/// Two-qubit RB for each (amplitude, total CR length) pair; the CR length is
/// fixed, everything else is calibrated by `base`.
struct LengthFidelityPoint {
  double amplitude = 0.0;
  double pulse_length = 0.0;
  RbResult rb;
  double cnot_fidelity = 0.0;
};
std::vector<LengthFidelityPoint> sweep_length_fidelity(
    const SystemModel& model, const std::vector<std::pair<double, double>>& pairs,
    const GateSetOptions& base, const RbConfig& config, const RbOptions& options);

}  // namespace tpulse
