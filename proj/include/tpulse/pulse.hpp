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

// Baseband envelopes, the first-order low-pass filter, quadrature modulation
// and pulse programs.
//
// Envelope amplitudes are in MHz (Rabi-frequency units), times in ns and
// carrier frequencies in MHz.

#include <optional>
#include <string>
#include <vector>

namespace tpulse {

enum class EnvelopeKind { ideal_drag_i, ideal_drag_q, raised_cosine_flattop, staircase, square };

const char* to_string(EnvelopeKind kind);
EnvelopeKind envelope_kind_from_string(const std::string& name);

struct EnvelopeSpec {
  EnvelopeKind kind = EnvelopeKind::square;
  double amplitude = 0.0;     // A, or B for ideal_drag_q
  double pulse_length = 0.0;  // T_p
  double rise_time = 0.0;     // T_r, flattop only
  double flat_time = 0.0;     // T_f, flattop only
  double sample_time = 0.0;   // t_s, staircase only
  std::vector<double> steps;  // staircase amplitudes a_0, a_1, ...

  static EnvelopeSpec ideal_drag_i(double a, double pulse_length);
  static EnvelopeSpec ideal_drag_q(double b, double pulse_length);
  static EnvelopeSpec raised_cosine_flattop(double a, double rise_time, double flat_time);
  static EnvelopeSpec square(double a, double pulse_length);
  static EnvelopeSpec staircase(std::vector<double> steps, double sample_time);

  /// Support of the envelope, [0, duration()).
  double duration() const;
  bool piecewise_constant() const {
    return kind == EnvelopeKind::square || kind == EnvelopeKind::staircase;
  }
  void validate() const;
};

/// Envelope value at t; zero outside the support.
double eval_envelope(const EnvelopeSpec& spec, double t);

/// Piecewise-defined helpers used by eval_envelope; callers may use them
/// directly when the kind is known.
double eval_ideal_drag(const EnvelopeSpec& spec, double t);
double eval_raised_cosine_flattop(const EnvelopeSpec& spec, double t);

/// Exact integral of the envelope over [t0, t1].
double envelope_integral(const EnvelopeSpec& spec, double t0, double t1);
double envelope_area(const EnvelopeSpec& spec);

/// Times inside the support where the envelope is discontinuous.
std::vector<double> envelope_breakpoints(const EnvelopeSpec& spec);

/// Zero-order-hold staircase whose i-th step carries the source area over
/// [i t_s, (i+1) t_s].
EnvelopeSpec discretize_staircase(const EnvelopeSpec& source, double sample_time);

/// Square envelope of length `pulse_length` with the same area as `source`.
EnvelopeSpec square_from_area(const EnvelopeSpec& source, double pulse_length);

struct FilterSpec {
  double cutoff_freq = 100.0;  // MHz
  int order = 1;

  /// RC time constant 1/(2 pi f_c) in ns.
  double tau() const;
  void validate() const;
};

/// Envelope seen after an optional first-order RC filter with zero initial
/// state. Piecewise-constant inputs are filtered exactly segment by segment;
/// smooth inputs are filtered exactly on a fine piecewise-linear
/// interpolation. The support is extended until the tail falls below
/// kTailThreshold times the input peak.
class FilteredEnvelope {
 public:
  static constexpr double kTailThreshold = 1e-6;
  static constexpr double kSmoothGrid = 0.01;  // ns

  FilteredEnvelope() = default;
  FilteredEnvelope(EnvelopeSpec spec, std::optional<FilterSpec> filter);

  double operator()(double t) const;
  double duration() const { return duration_; }
  const EnvelopeSpec& source() const { return spec_; }
  const std::optional<FilterSpec>& filter() const { return filter_; }
  std::vector<double> breakpoints() const;

 private:
  double eval_filtered(double t) const;

  EnvelopeSpec spec_;
  std::optional<FilterSpec> filter_;
  double tau_ = 0.0;
  double duration_ = 0.0;
  // Knots of the piecewise input: start time, value at start, slope, and the
  // filter state at the knot.
  std::vector<double> knot_t_;
  std::vector<double> knot_x_;
  std::vector<double> knot_slope_;
  std::vector<double> knot_y_;
  double knot_dt_ = 0.0;  // uniform knot spacing when > 0
  double input_end_ = 0.0;
  double y_end_ = 0.0;
};

FilteredEnvelope apply_lpf(const EnvelopeSpec& envelope, const FilterSpec& filter);

struct CarrierSpec {
  double drive_freq = 0.0;  // MHz
  double phase = 0.0;       // rad
  void validate() const;
};

struct DrivePulse {
  EnvelopeSpec i_envelope;
  std::optional<EnvelopeSpec> q_envelope;
  CarrierSpec carrier;
  std::optional<FilterSpec> filter;
  int target_line = 0;
  double start_time = 0.0;  // ns

  void validate() const;
};

/// A DrivePulse with its filtered envelopes precomputed, ready for repeated
/// evaluation. The carrier phase is referenced to absolute time.
class CompiledPulse {
 public:
  explicit CompiledPulse(const DrivePulse& pulse);

  double start() const { return start_; }
  double end() const { return end_; }
  int line() const { return line_; }
  double omega() const { return omega_; }  // rad/ns

  double i_value(double t) const { return i_(t - start_); }
  double q_value(double t) const { return has_q_ ? q_(t - start_) : 0.0; }
  /// v(t) = I cos(w t + phi) + Q sin(w t + phi).
  double value(double t) const;
  std::vector<double> breakpoints() const;

 private:
  FilteredEnvelope i_;
  FilteredEnvelope q_;
  bool has_q_ = false;
  double omega_ = 0.0;
  double phase_ = 0.0;
  int line_ = 0;
  double start_ = 0.0;
  double end_ = 0.0;
};

/// Modulated drive amplitude in MHz.
double modulate(const DrivePulse& pulse, double t);

struct PulseProgram {
  std::vector<DrivePulse> pulses;

  /// End of the last pulse including filter tails.
  double duration() const;
  /// Highest carrier frequency in MHz (0 for an empty program).
  double max_carrier_mhz() const;
};

/// Samples `envelope` (optionally filtered) on a uniform grid; columns
/// time_ns, amplitude_MHz.
std::string envelope_csv(const EnvelopeSpec& envelope, const std::optional<FilterSpec>& filter,
                         double dt);

}  // namespace tpulse
