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

#include "tpulse/sweep.hpp"

#include <cmath>
#include <numbers>
#include <set>

#include "tpulse/csv.hpp"
#include "tpulse/errors.hpp"
#include "tpulse/parallel.hpp"

namespace tpulse {

namespace {

const std::set<std::string> kDragParams{"drag_amplitude", "drag_coefficient", "drag_length"};
const std::set<std::string> kCrParams{"sample_time", "cr_amplitude", "cr_flat_time", "cr_length"};
const std::set<std::string> kDragObjectives{"rotation_angle_error", "leakage", "rb_infidelity"};
const std::set<std::string> kCrObjectives{"z_error", "conditional_phase_error"};

EvolutionConfig unitary(EvolutionConfig c) {
  c.mode = EvolutionMode::unitary;
  return c;
}

}  // namespace

void SweepSpec::validate() const {
  const bool drag = kDragParams.count(parameter) > 0;
  const bool cr = kCrParams.count(parameter) > 0;
  if (!drag && !cr) fail(ErrorCode::config_error, "unknown sweep parameter '" + parameter + "'");
  if (!kDragObjectives.count(objective) && !kCrObjectives.count(objective)) {
    fail(ErrorCode::config_error, "unknown sweep objective '" + objective + "'");
  }
  if ((drag && !kDragObjectives.count(objective)) || (cr && !kCrObjectives.count(objective))) {
    fail(ErrorCode::config_error, "objective '" + objective + "' does not apply to '" + parameter + "'");
  }
  if (!(step > 0.0)) fail(ErrorCode::config_error, "sweep step must be > 0");
  if (!(start < stop)) fail(ErrorCode::config_error, "sweep start must be below stop");
}

std::vector<double> SweepSpec::grid() const {
  validate();
  std::vector<double> g;
  const long n = static_cast<long>(std::floor((stop - start) / step + 1e-9));
  for (long i = 0; i <= n; ++i) g.push_back(start + static_cast<double>(i) * step);
  return g;
}

SweepResult run_sweep(const SystemModel& model, const SweepSpec& spec, const SweepContext& context) {
  const auto grid = spec.grid();
  const bool drag = kDragParams.count(spec.parameter) > 0;
  if (!drag && model.num_qubits() != 2) {
    fail(ErrorCode::config_error, "CR sweeps need a two-qubit model");
  }

  SweepResult r;
  r.parameter = spec.parameter;
  r.objective = spec.objective;
  r.metadata = model_metadata(model, context.solver);
  r.metadata["sweep"] = spec.parameter + " -> " + spec.objective;
  r.points.resize(grid.size());

  const auto dressed = dressed_qubit_frequencies(model);
  const SystemModel single = model.num_qubits() == 1 ? model : model.single_qubit(context.qubit);

  parallel_for(static_cast<int>(grid.size()), context.threads, [&](int i) {
    const double x = grid[i];
    SweepPoint& p = r.points[i];
    p.parameter = x;
    try {
      if (drag) {
        DragTemplate t = context.drag;
        if (spec.parameter == "drag_amplitude") t.amplitude = x;
        if (spec.parameter == "drag_coefficient") t.drag = x;
        if (spec.parameter == "drag_length") t.pulse_length = x;
        t.validate();
        const double f = context.drag_freq > 0.0 ? context.drag_freq
                                                 : rad_per_ns_to_mhz(dressed[context.qubit]);
        if (spec.objective == "rb_infidelity") {
          GateSet g;
          g.qubits = 1;
          g.x90 = {t};
          g.drive_freq = {f};
          RbConfig c = context.rb;
          c.qubits = 1;
          RbOptions o = context.rb_options;
          o.threads = 1;
          p.objective = run_rb(single, g, c, o).infidelity;
        } else {
          const auto d = drag_response(single, 0, t, f, unitary(context.solver));
          p.objective = spec.objective == "leakage" ? d.leakage
                                                    : std::abs(d.angle - std::numbers::pi / 2.0);
        }
      } else {
        CrTemplate t = context.cr;
        if (spec.parameter == "sample_time") {
          t.mode = WaveformMode::staircase;
          t.sample_time = x;
        }
        if (spec.parameter == "cr_amplitude") t.amplitude = x;
        if (spec.parameter == "cr_flat_time") t.flat_time = x;
        if (spec.parameter == "cr_length") {
          if (t.mode == WaveformMode::square) {
            t.pulse_length = x;
          } else {
            t.flat_time = x - 2.0 * t.rise_time;
          }
        }
        t.validate();
        const DrivePulse pulse = t.pulse(0, rad_per_ns_to_mhz(dressed[1]), 0.0, 0.0);
        if (spec.objective == "z_error") {
          p.objective = z_error(model, pulse, unitary(context.solver)).value;
        } else {
          p.objective = conditional_phase_error(conditional_rotation(model, pulse, unitary(context.solver)));
        }
      }
    } catch (const Error& e) {
      p.ok = false;
      p.objective = std::nan("");
      p.note = e.what();
    }
  });
  return r;
}

}  // namespace tpulse
