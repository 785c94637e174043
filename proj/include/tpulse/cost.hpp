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

// Waveform-memory cost of AWG, staircase and square pulse generation.

#include <optional>
#include <string>
#include <vector>

namespace tpulse {

enum class GeneratorMode { awg, staircase, square };

const char* to_string(GeneratorMode mode);
GeneratorMode generator_mode_from_string(const std::string& name);

struct GeneratorProfile {
  std::string name;
  GeneratorMode mode = GeneratorMode::awg;
  std::optional<double> sampling_rate;  // GS/s

  void validate() const;
};

struct PulseCost {
  std::string name;
  double pulse_length = 0.0;  // ns
  int quadratures = 1;
};

struct CostReport {
  std::string profile;
  GeneratorMode mode = GeneratorMode::awg;
  std::optional<double> sampling_rate;
  std::vector<long> per_pulse;
  long total = 0;
};

/// Sampled modes store ceil(T_p f_s) points per quadrature; square mode
/// stores one amplitude per quadrature.
CostReport waveform_points(const GeneratorProfile& profile, const std::vector<PulseCost>& pulses);

/// Room-temperature AWG (2.4 GS/s), cryogenic AWG (1 GS/s), slow staircase
/// (0.5 GS/s) and square generation.
std::vector<GeneratorProfile> reference_profiles();

/// One 70 ns CR pulse (single quadrature) and one 20 ns DRAG pulse (I and Q).
std::vector<PulseCost> reference_workload();

std::string cost_csv(const std::vector<CostReport>& reports, const std::vector<PulseCost>& pulses);

/// Aligned text table, one column per profile. Extra rows (label, one cell
/// per profile) are appended as given.
std::string cost_table(const std::vector<CostReport>& reports,
                       const std::vector<std::pair<std::string, std::vector<std::string>>>& extra = {});

}  // namespace tpulse
