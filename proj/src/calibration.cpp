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

#include "tpulse/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

#include "tpulse/csv.hpp"
#include "tpulse/errors.hpp"
#include "tpulse/parallel.hpp"

namespace tpulse {

namespace {

constexpr double kPi = std::numbers::pi;

EvolutionConfig closed(const EvolutionConfig& solver) {
  EvolutionConfig cfg = solver;
  cfg.mode = EvolutionMode::unitary;
  cfg.sample_times.clear();
  cfg.observables.clear();
  cfg.end_time.reset();
  return cfg;
}

template <class F>
double solve_bracket(F f, double lo, double hi, double x_tol) {
  boost::uintmax_t iters = 60;
  const auto r = boost::math::tools::toms748_solve(
      f, lo, hi, [x_tol](double a, double b) { return std::abs(b - a) < x_tol; }, iters);
  return 0.5 * (r.first + r.second);
}

}  // namespace

// --- DRAG -----------------------------------------------------------------------

DragResponse drag_response(const SystemModel& model, int qubit, const DragTemplate& pulse,
                           double drive_freq, const EvolutionConfig& solver) {
  std::vector<int> levels(model.num_qubits(), 0);
  Operator col = Operator::Zero(model.dim(), 1);
  col(model.basis_index(levels), 0) = 1.0;
  const PulseProgram program{{pulse.pulse(qubit, drive_freq, 0.0, 0.0)}};
  const Operator psi = propagate_columns(model, program, col, closed(solver));
  levels[qubit] = 1;
  const cplx a1 = psi(model.basis_index(levels), 0);
  levels[qubit] = 0;
  const cplx a0 = psi(model.basis_index(levels), 0);
  DragResponse r;
  r.angle = std::atan2(2.0 * std::abs(a0 * std::conj(a1)), std::norm(a0) - std::norm(a1));
  for (int i = 0; i < model.dim(); ++i) {
    if (model.basis_levels(i)[qubit] == 2) r.leakage += std::norm(psi(i, 0));
  }
  return r;
}

DragCalibration calibrate_drag(const SystemModel& model, int qubit,
                               const DragCalibrationOptions& options) {
  if (!(options.pulse_length > 0.0)) fail(ErrorCode::invalid_argument, "T_p must be > 0");
  if (options.grid_points < 3) fail(ErrorCode::invalid_argument, "need at least 3 grid points");
  DragCalibration out;
  out.drive_freq = options.drive_freq > 0.0
                       ? options.drive_freq
                       : rad_per_ns_to_mhz(dressed_qubit_frequencies(model)[qubit]);
  const SystemModel sub = model.num_qubits() > 1 ? model.single_qubit(qubit) : model;

  DragTemplate t;
  t.mode = options.mode;
  t.pulse_length = options.pulse_length;
  t.sample_time = options.sample_time;
  t.filter = options.filter;
  auto respond = [&](double a, double b) {
    DragTemplate x = t;
    x.amplitude = a;
    x.drag = b;
    ++out.evaluations;
    return drag_response(sub, 0, x, out.drive_freq, options.solver);
  };

  const double a_est =
      (kPi / 2) / (drive_coefficient(options.solver.drive_scale) * options.pulse_length);
  const int n = options.grid_points;
  // without a |2> level there is nothing for the quadrature term to cancel
  const bool quadrature = options.mode != WaveformMode::square && sub.levels(0) >= 3;
  double b = 0.0;
  double a = a_est;
  for (int iter = 0; iter < std::max(1, options.iterations); ++iter) {
    // amplitude: grid, then the bracketing sign change
    std::vector<double> grid(n), err(n);
    for (int i = 0; i < n; ++i) {
      grid[i] = a_est * (0.6 + 0.8 * i / (n - 1));
      err[i] = respond(grid[i], b).angle - kPi / 2;
    }
    int best = 0;
    for (int i = 1; i < n; ++i) {
      if (std::abs(err[i]) < std::abs(err[best])) best = i;
    }
    if (std::abs(err[best]) >= 1e-2) {
      fail(ErrorCode::calibration_failed, "no amplitude on the grid reaches pi/2 within 1e-2 rad");
    }
    int lo = -1;
    for (int i = std::max(0, best - 1); i < std::min(n - 1, best + 1); ++i) {
      if (err[i] * err[i + 1] <= 0.0) lo = i;
    }
    a = grid[best];
    if (lo >= 0) {
      a = solve_bracket([&](double x) { return respond(x, b).angle - kPi / 2; }, grid[lo],
                        grid[lo + 1], 1e-10 * a_est);
    }
    if (!quadrature) break;
    // quadrature: grid, then Brent on the neighbouring cells
    std::vector<double> bgrid(n), leak(n);
    for (int i = 0; i < n; ++i) {
      bgrid[i] = a * (-0.4 + 0.8 * i / (n - 1));
      leak[i] = respond(a, bgrid[i]).leakage;
    }
    const int k = static_cast<int>(std::min_element(leak.begin(), leak.end()) - leak.begin());
    const auto r = boost::math::tools::brent_find_minima(
        [&](double x) { return respond(a, x).leakage; }, bgrid[std::max(0, k - 1)],
        bgrid[std::min(n - 1, k + 1)], 40);
    b = r.second <= leak[k] ? r.first : bgrid[k];
  }
  t.amplitude = a;
  t.drag = quadrature ? b : 0.0;
  const auto final = respond(t.amplitude, t.drag);
  out.pulse = t;
  out.rotation_error = std::abs(final.angle - kPi / 2);
  out.leakage = final.leakage;
  if (out.rotation_error >= 1e-4) {
    fail(ErrorCode::calibration_failed,
         "DRAG rotation error " + format_number(out.rotation_error) + " rad after refinement");
  }
  return out;
}

// --- CR -------------------------------------------------------------------------

CrCalibration calibrate_cr_length(const SystemModel& model, const CrTemplate& base,
                                  const CrCalibrationOptions& options) {
  if (model.num_qubits() != 2) fail(ErrorCode::invalid_argument, "CR needs a two-qubit model");
  const double carrier = options.drive_freq > 0.0
                             ? options.drive_freq
                             : rad_per_ns_to_mhz(dressed_qubit_frequencies(model)[1]);
  const EvolutionConfig cfg = closed(options.solver);
  const bool square = base.mode == WaveformMode::square;
  CrCalibration out;

  struct Point {
    double length = 0.0;
    double angle = 0.0;  // relative angle, unfolded through pi
    std::array<double, 3> axis{};
    ConditionalRotation rot;
  };
  auto make = [&](double length) {
    CrTemplate t = base;
    (square ? t.pulse_length : t.flat_time) = length;
    return t;
  };
  auto measure = [&](double length, const Point* ref) {
    ++out.evaluations;
    Point p;
    p.length = length;
    p.rot = conditional_rotation(model, make(length).pulse(0, carrier, 0.0, 0.0), cfg);
    p.angle = p.rot.relative_angle;
    p.axis = p.rot.axis;
    if (ref != nullptr && ref->angle > 1e-6) {
      const double dot =
          p.axis[0] * ref->axis[0] + p.axis[1] * ref->axis[1] + p.axis[2] * ref->axis[2];
      if (dot < 0.0) {
        p.angle = 2 * kPi - p.angle;
        for (auto& c : p.axis) c = -c;
      }
    }
    if (p.angle > 0.1 && std::abs(p.axis[2]) > 0.5) {
      fail(ErrorCode::calibration_failed, "conditional rotation axis is mostly Z");
    }
    return p;
  };

  const double start = square ? 1.0 : 0.0;
  Point prev = measure(start, nullptr);
  double step = 20.0;
  Point cur = measure(start + step, &prev);
  while (cur.angle < kPi) {
    const double slope = (cur.angle - prev.angle) / (cur.length - prev.length);
    double next = 2.0 * step;
    if (slope > 0.0) next = std::clamp(1.05 * (kPi - cur.angle) / slope + 0.5, 0.5, 4.0 * step);
    if (cur.length >= options.max_length) {
      fail(ErrorCode::calibration_failed,
           "conditional angle stays below pi/2 up to " + format_number(options.max_length) + " ns");
    }
    step = next;
    prev = cur;
    cur = measure(std::min(options.max_length, cur.length + step), &prev);
  }
  const Point left = prev;
  const double length = solve_bracket(
      [&](double x) { return measure(x, &left).angle - kPi; }, left.length, cur.length, 1e-3);
  const Point best = measure(length, &left);
  out.pulse = make(length);
  out.length = length;
  out.rotation = best.rot;
  out.error = conditional_phase_error(best.rot);
  if (out.error >= options.tolerance) {
    fail(ErrorCode::calibration_failed,
         "conditional phase error " + format_number(out.error) + " rad at the best length");
  }
  return out;
}

CrCalibration calibrate_cr_flattop(const SystemModel& model, double rise_time, double amplitude,
                                   const CrCalibrationOptions& options,
                                   std::optional<FilterSpec> filter) {
  CrTemplate t;
  t.mode = WaveformMode::ideal;
  t.amplitude = amplitude;
  t.rise_time = rise_time;
  t.filter = filter;
  if (!(amplitude > 0.0)) fail(ErrorCode::calibration_failed, "CR amplitude must be > 0");
  return calibrate_cr_length(model, t, options);
}

CrCalibration calibrate_square_cr_length(const SystemModel& model, double amplitude,
                                         std::optional<FilterSpec> filter,
                                         const CrCalibrationOptions& options) {
  CrTemplate t;
  t.mode = WaveformMode::square;
  t.amplitude = amplitude;
  t.filter = filter;
  if (!(amplitude > 0.0)) fail(ErrorCode::calibration_failed, "CR amplitude must be > 0");
  return calibrate_cr_length(model, t, options);
}

GateSet calibrate_gate_set(const SystemModel& model, const GateSetOptions& options) {
  GateSet g;
  g.qubits = model.num_qubits();
  const auto dressed = dressed_qubit_frequencies(model);
  for (int q = 0; q < g.qubits; ++q) {
    DragCalibrationOptions o;
    o.mode = options.drag_mode;
    o.pulse_length = options.drag_length;
    o.sample_time = options.drag_sample_time;
    o.filter = options.drag_filter;
    o.drive_freq = rad_per_ns_to_mhz(dressed[q]);
    o.solver = options.solver;
    g.x90.push_back(calibrate_drag(model, q, o).pulse);
    g.drive_freq.push_back(o.drive_freq);
  }
  if (g.qubits == 2) {
    CrTemplate t;
    t.mode = options.cr_mode;
    t.amplitude = options.cr_amplitude;
    t.rise_time = options.cr_rise_time;
    t.sample_time = options.cr_sample_time;
    t.filter = options.cr_filter;
    if (options.cr_length > 0.0) {
      if (t.mode == WaveformMode::square) {
        t.pulse_length = options.cr_length;
      } else {
        t.flat_time = options.cr_length - 2.0 * t.rise_time;
        if (t.flat_time < 0.0) fail(ErrorCode::invalid_argument, "CR length shorter than its ramps");
      }
    } else {
      CrCalibrationOptions co = options.cr;
      co.solver = options.solver;
      co.drive_freq = g.drive_freq[1];
      t = calibrate_cr_length(model, t, co).pulse;
    }
    g.cr = t;
    g.cnot = fit_cnot_correction(cr_block(model, g, options.solver));
  }
  g.validate();
  return g;
}

// --- sweeps ---------------------------------------------------------------------

double SweepResult::argmin() const {
  double best = std::numeric_limits<double>::infinity();
  double arg = std::numeric_limits<double>::quiet_NaN();
  for (const auto& p : points) {
    if (p.ok && p.objective < best) {
      best = p.objective;
      arg = p.parameter;
    }
  }
  return arg;
}

std::string SweepResult::csv() const {
  std::vector<std::string> header{parameter, objective};
  header.insert(header.end(), extra_names.begin(), extra_names.end());
  header.push_back("ok");
  CsvWriter w(header);
  for (const auto& [k, v] : metadata) w.add_metadata(k, v);
  for (const auto& p : points) {
    std::vector<std::string> row{format_number(p.parameter), format_number(p.objective)};
    for (double e : p.extra) row.push_back(format_number(e));
    row.push_back(p.ok ? "1" : "0");
    w.add_row(row);
  }
  return w.str();
}

std::map<std::string, std::string> model_metadata(const SystemModel& model,
                                                  const EvolutionConfig& solver) {
  std::map<std::string, std::string> m;
  m["version"] = TPULSE_VERSION;
  m["coupling_mhz"] = format_number(rad_per_ns_to_mhz(model.coupling()));
  for (int q = 0; q < model.num_qubits(); ++q) {
    const auto& p = model.qubit(q);
    const std::string k = "q" + std::to_string(q) + "_";
    m[k + "freq_mhz"] = format_number(rad_per_ns_to_mhz(p.qubit_freq));
    m[k + "anharmonicity_mhz"] = format_number(rad_per_ns_to_mhz(p.anharmonicity));
    m[k + "t1_us"] = format_number(p.t1);
    m[k + "t2_us"] = format_number(p.t2);
    m[k + "levels"] = std::to_string(p.levels);
  }
  m["solver_mode"] = to_string(solver.mode);
  m["relative_tolerance"] = format_number(solver.relative_tolerance);
  m["absolute_tolerance"] = format_number(solver.absolute_tolerance);
  m["drive_scale"] = format_number(solver.drive_scale);
  m["frame"] = "lab (interaction picture of bare H0 internally, no RWA)";
  // DRAG quadrature rides the sin carrier, not a second cos factor
  m["drag_quadrature_carrier"] = "sin";
  return m;
}

SweepResult sweep_sampling_time(const SystemModel& model, const CrTemplate& source,
                                const std::vector<double>& sample_times,
                                std::optional<FilterSpec> filter, const EvolutionConfig& solver,
                                int threads) {
  const double carrier = rad_per_ns_to_mhz(dressed_qubit_frequencies(model)[1]);
  SweepResult res;
  res.parameter = "sample_time_ns";
  res.objective = "z_error";
  res.extra_names = {"z_error_control0", "z_error_control1"};
  res.points.resize(sample_times.size());
  res.metadata = model_metadata(model, closed(solver));
  res.metadata["filter_mhz"] = filter ? format_number(filter->cutoff_freq) : "none";
  res.metadata["cr_amplitude_mhz"] = format_number(source.amplitude);
  res.metadata["cr_rise_ns"] = format_number(source.rise_time);
  res.metadata["cr_flat_ns"] = format_number(source.flat_time);
  parallel_for(sample_times.size(), threads, [&](std::size_t i) {
    CrTemplate t = source;
    t.mode = WaveformMode::staircase;
    t.sample_time = sample_times[i];
    t.filter = filter;
    const auto z = z_error(model, t.pulse(0, carrier, 0.0, 0.0), closed(solver));
    res.points[i] = {sample_times[i], z.value, {z.per_control[0], z.per_control[1]}, true, ""};
  });
  return res;
}

SweepResult sweep_amplitude_length_frontier(const SystemModel& model, const CrTemplate& base,
                                            const std::vector<double>& amplitudes,
                                            const CrCalibrationOptions& options, int threads) {
  SweepResult res;
  res.parameter = "amplitude_mhz";
  res.objective = "pulse_length_ns";
  res.extra_names = {"calibrated_length_ns", "conditional_phase_error"};
  res.points.resize(amplitudes.size());
  res.metadata = model_metadata(model, options.solver);
  res.metadata["mode"] = to_string(base.mode);
  res.metadata["rise_time_ns"] = format_number(base.rise_time);
  res.metadata["filter_mhz"] = base.filter ? format_number(base.filter->cutoff_freq) : "none";
  parallel_for(amplitudes.size(), threads, [&](std::size_t i) {
    SweepPoint p;
    p.parameter = amplitudes[i];
    try {
      if (!(amplitudes[i] > 0.0)) fail(ErrorCode::invalid_argument, "amplitude must be > 0");
      CrTemplate t = base;
      t.amplitude = amplitudes[i];
      const auto cal = calibrate_cr_length(model, t, options);
      p.objective = cal.pulse.duration();
      p.extra = {cal.length, cal.error};
    } catch (const Error& e) {
      if (e.code() != ErrorCode::calibration_failed) throw;
      p.ok = false;
      p.note = e.what();
      p.objective = std::numeric_limits<double>::quiet_NaN();
      p.extra = {std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN()};
    }
    res.points[i] = p;
  });
  return res;
}

}  // namespace tpulse
