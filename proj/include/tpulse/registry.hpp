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

// Calibration registry: a text file of sections keyed by (model hash, gate,
// mode), each holding `key = value` parameters.
//
//   [model=9f2c41d07b3e8a15 gate=x90.q0 mode=drag:ideal]
//   amplitude = 25.0179
//
// The model hash covers frequencies, anharmonicities, levels, coupling and
// the drive scale. Decay times are left out: they do not move the optimum
// of any calibration objective.

#include <map>
#include <optional>
#include <string>

#include "tpulse/gates.hpp"
#include "tpulse/quantum.hpp"

namespace tpulse {

std::string model_hash(const SystemModel& model, double drive_scale);

class CalibrationRegistry {
 public:
  using Entry = std::map<std::string, std::string>;

  void put(const std::string& model, const std::string& gate, const std::string& mode, Entry entry);
  const Entry* find(const std::string& model, const std::string& gate,
                    const std::string& mode) const;
  std::size_t size() const { return entries_.size(); }

  std::string str() const;
  /// Throws Error(config_error) with a line number on malformed input.
  static CalibrationRegistry parse(const std::string& text);
  /// A missing file yields an empty registry.
  static CalibrationRegistry load(const std::string& path);
  void save(const std::string& path) const;

 private:
  struct Key {
    std::string model, gate, mode;
    auto operator<=>(const Key&) const = default;
  };
  std::map<Key, Entry> entries_;
};

/// Stores every template of `gates` under `mode`; load_gate_set returns
/// nothing unless all of them are present.
void store_gate_set(CalibrationRegistry& registry, const std::string& model,
                    const std::string& mode, const GateSet& gates);
std::optional<GateSet> load_gate_set(const CalibrationRegistry& registry, const std::string& model,
                                     const std::string& mode, int qubits);

}  // namespace tpulse
