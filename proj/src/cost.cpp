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

#include "tpulse/cost.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "tpulse/csv.hpp"
#include "tpulse/errors.hpp"

namespace tpulse {

const char* to_string(GeneratorMode mode) {
  switch (mode) {
    case GeneratorMode::awg: return "awg";
    case GeneratorMode::staircase: return "staircase";
    case GeneratorMode::square: return "square";
  }
  return "?";
}

GeneratorMode generator_mode_from_string(const std::string& name) {
  if (name == "awg") return GeneratorMode::awg;
  if (name == "staircase") return GeneratorMode::staircase;
  if (name == "square") return GeneratorMode::square;
  fail(ErrorCode::config_error, "unknown generator mode '" + name + "'");
}

void GeneratorProfile::validate() const {
  if (mode != GeneratorMode::square && !sampling_rate) {
    fail(ErrorCode::invalid_argument, "profile '" + name + "' needs a sampling rate");
  }
  if (sampling_rate && !(*sampling_rate > 0.0)) {
    fail(ErrorCode::invalid_argument, "sampling rate must be > 0");
  }
}

CostReport waveform_points(const GeneratorProfile& profile, const std::vector<PulseCost>& pulses) {
  profile.validate();
  CostReport r;
  r.profile = profile.name;
  r.mode = profile.mode;
  r.sampling_rate = profile.sampling_rate;
  for (const auto& p : pulses) {
    if (!(p.pulse_length > 0.0)) fail(ErrorCode::invalid_argument, "pulse lengths must be > 0");
    if (p.quadratures < 1) fail(ErrorCode::invalid_argument, "a pulse has at least one quadrature");
    long per_quad = 1;
    if (profile.mode != GeneratorMode::square) {
      const double x = p.pulse_length * *profile.sampling_rate;
      // guard against products like 2.4 * 70 = 168.00000000000003
      per_quad = static_cast<long>(std::ceil(x - 1e-9 * std::max(1.0, x)));
    }
    r.per_pulse.push_back(per_quad * p.quadratures);
    r.total += r.per_pulse.back();
  }
  return r;
}

std::vector<GeneratorProfile> reference_profiles() {
  return {{"RT", GeneratorMode::awg, 2.4},
          {"Cryo", GeneratorMode::awg, 1.0},
          {"Stair", GeneratorMode::staircase, 0.5},
          {"Square", GeneratorMode::square, std::nullopt}};
}

std::vector<PulseCost> reference_workload() { return {{"CR", 70.0, 1}, {"DRAG", 20.0, 2}}; }

std::string cost_csv(const std::vector<CostReport>& reports, const std::vector<PulseCost>& pulses) {
  std::vector<std::string> header{"profile", "mode", "sampling_rate_gsps"};
  for (const auto& p : pulses) header.push_back(p.name + "_points");
  header.push_back("total_points");
  CsvWriter w(header);
  w.add_metadata("version", TPULSE_VERSION);
  for (const auto& p : pulses) {
    w.add_metadata("pulse_" + p.name, format_number(p.pulse_length) + " ns x " +
                                          std::to_string(p.quadratures) + " quadrature(s)");
  }
  for (const auto& r : reports) {
    std::vector<std::string> row{r.profile, to_string(r.mode),
                                 r.sampling_rate ? format_number(*r.sampling_rate) : "NA"};
    for (long n : r.per_pulse) row.push_back(std::to_string(n));
    row.push_back(std::to_string(r.total));
    w.add_row(row);
  }
  return w.str();
}

std::string cost_table(const std::vector<CostReport>& reports,
                       const std::vector<std::pair<std::string, std::vector<std::string>>>& extra) {
  std::vector<std::pair<std::string, std::vector<std::string>>> rows;
  std::vector<std::string> names, rates, totals;
  for (const auto& r : reports) {
    names.push_back(r.profile);
    rates.push_back(r.sampling_rate ? format_number(*r.sampling_rate) : "N/A");
    totals.push_back(std::to_string(r.total));
  }
  rows.push_back({"", names});
  rows.push_back({"Sampling rate [GS/s]", rates});
  rows.push_back({"#(Waveform points)", totals});
  rows.insert(rows.end(), extra.begin(), extra.end());
  std::size_t label_w = 0, cell_w = 0;
  for (const auto& [label, cells] : rows) {
    label_w = std::max(label_w, label.size());
    for (const auto& c : cells) cell_w = std::max(cell_w, c.size());
  }
  std::ostringstream os;
  for (const auto& [label, cells] : rows) {
    os << label << std::string(label_w - label.size(), ' ');
    for (const auto& c : cells) os << " | " << std::string(cell_w - c.size(), ' ') << c;
    os << "\n";
  }
  return os.str();
}

}  // namespace tpulse
