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

#include "tpulse/pulse.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "tpulse/csv.hpp"
#include "tpulse/errors.hpp"

namespace tpulse {

namespace {

constexpr double kPi = std::numbers::pi;

double clamp_to(double t, double lo, double hi) { return std::min(std::max(t, lo), hi); }

// Antiderivatives from 0, valid on the support.
double drag_i_primitive(double a, double tp, double t) {
  const double w = 2.0 * kPi / tp;
  return a * (t - std::sin(w * t) / w);
}

double drag_q_primitive(double b, double tp, double t) {
  const double w = 2.0 * kPi / tp;
  return b * (1.0 - std::cos(w * t)) / w;
}

double flattop_primitive(const EnvelopeSpec& s, double t) {
  const double a = s.amplitude, tr = s.rise_time, tf = s.flat_time;
  auto rise = [&](double x) {
    return tr > 0.0 ? 0.5 * a * (x - tr / kPi * std::sin(kPi * x / tr)) : 0.0;
  };
  if (t < tr) return rise(t);
  if (t < tr + tf) return rise(tr) + a * (t - tr);
  const double total = a * (tr + tf);
  return total - rise(2.0 * tr + tf - t);
}

}  // namespace

const char* to_string(EnvelopeKind kind) {
  switch (kind) {
    case EnvelopeKind::ideal_drag_i: return "ideal_drag_i";
    case EnvelopeKind::ideal_drag_q: return "ideal_drag_q";
    case EnvelopeKind::raised_cosine_flattop: return "raised_cosine_flattop";
    case EnvelopeKind::staircase: return "staircase";
    case EnvelopeKind::square: return "square";
  }
  return "unknown";
}

EnvelopeKind envelope_kind_from_string(const std::string& name) {
  for (auto k : {EnvelopeKind::ideal_drag_i, EnvelopeKind::ideal_drag_q,
                 EnvelopeKind::raised_cosine_flattop, EnvelopeKind::staircase,
                 EnvelopeKind::square}) {
    if (name == to_string(k)) return k;
  }
  fail(ErrorCode::invalid_argument, "unknown envelope kind '" + name + "'");
}

EnvelopeSpec EnvelopeSpec::ideal_drag_i(double a, double pulse_length) {
  EnvelopeSpec s;
  s.kind = EnvelopeKind::ideal_drag_i;
  s.amplitude = a;
  s.pulse_length = pulse_length;
  s.validate();
  return s;
}

EnvelopeSpec EnvelopeSpec::ideal_drag_q(double b, double pulse_length) {
  EnvelopeSpec s;
  s.kind = EnvelopeKind::ideal_drag_q;
  s.amplitude = b;
  s.pulse_length = pulse_length;
  s.validate();
  return s;
}

EnvelopeSpec EnvelopeSpec::raised_cosine_flattop(double a, double rise_time, double flat_time) {
  EnvelopeSpec s;
  s.kind = EnvelopeKind::raised_cosine_flattop;
  s.amplitude = a;
  s.rise_time = rise_time;
  s.flat_time = flat_time;
  s.pulse_length = 2.0 * rise_time + flat_time;
  s.validate();
  return s;
}

EnvelopeSpec EnvelopeSpec::square(double a, double pulse_length) {
  EnvelopeSpec s;
  s.kind = EnvelopeKind::square;
  s.amplitude = a;
  s.pulse_length = pulse_length;
  s.validate();
  return s;
}

EnvelopeSpec EnvelopeSpec::staircase(std::vector<double> steps, double sample_time) {
  EnvelopeSpec s;
  s.kind = EnvelopeKind::staircase;
  s.sample_time = sample_time;
  s.pulse_length = sample_time * static_cast<double>(steps.size());
  s.steps = std::move(steps);
  s.validate();
  return s;
}

double EnvelopeSpec::duration() const {
  if (kind == EnvelopeKind::staircase) return sample_time * static_cast<double>(steps.size());
  return pulse_length;
}

void EnvelopeSpec::validate() const {
  if (!(pulse_length > 0.0)) fail(ErrorCode::invalid_argument, "pulse length must be positive");
  switch (kind) {
    case EnvelopeKind::staircase:
      if (!(sample_time > 0.0)) fail(ErrorCode::invalid_argument, "staircase needs t_s > 0");
      if (steps.empty()) fail(ErrorCode::invalid_argument, "staircase needs at least one step");
      break;
    case EnvelopeKind::raised_cosine_flattop:
      if (rise_time < 0.0 || flat_time < 0.0) {
        fail(ErrorCode::invalid_argument, "rise and flat times must be non-negative");
      }
      if (std::abs(pulse_length - (2.0 * rise_time + flat_time)) > 1e-9 * pulse_length) {
        fail(ErrorCode::invalid_argument, "flattop requires T_p = 2 T_r + T_f");
      }
      break;
    default:
      break;
  }
}

double eval_ideal_drag(const EnvelopeSpec& s, double t) {
  if (t < 0.0 || t > s.pulse_length) return 0.0;
  const double x = 2.0 * kPi * t / s.pulse_length;
  if (s.kind == EnvelopeKind::ideal_drag_i) return s.amplitude * (1.0 - std::cos(x));
  return s.amplitude * std::sin(x);
}

double eval_raised_cosine_flattop(const EnvelopeSpec& s, double t) {
  const double tr = s.rise_time, tf = s.flat_time, a = s.amplitude;
  if (t < 0.0 || t > 2.0 * tr + tf) return 0.0;
  if (t < tr) return 0.5 * a * (1.0 - std::cos(kPi * t / tr));
  if (t < tr + tf) return a;
  if (tr == 0.0) return 0.0;
  return 0.5 * a * (1.0 - std::cos(kPi * (2.0 * tr + tf - t) / tr));
}

double eval_envelope(const EnvelopeSpec& s, double t) {
  switch (s.kind) {
    case EnvelopeKind::ideal_drag_i:
    case EnvelopeKind::ideal_drag_q:
      return eval_ideal_drag(s, t);
    case EnvelopeKind::raised_cosine_flattop:
      return eval_raised_cosine_flattop(s, t);
    case EnvelopeKind::square:
      return (t >= 0.0 && t < s.pulse_length) ? s.amplitude : 0.0;
    case EnvelopeKind::staircase: {
      if (t < 0.0) return 0.0;
      const auto i = static_cast<std::size_t>(t / s.sample_time);
      return i < s.steps.size() ? s.steps[i] : 0.0;
    }
  }
  return 0.0;
}

double envelope_integral(const EnvelopeSpec& s, double t0, double t1) {
  if (t1 < t0) return -envelope_integral(s, t1, t0);
  const double end = s.duration();
  const double a = clamp_to(t0, 0.0, end);
  const double b = clamp_to(t1, 0.0, end);
  if (b <= a) return 0.0;
  switch (s.kind) {
    case EnvelopeKind::ideal_drag_i:
      return drag_i_primitive(s.amplitude, s.pulse_length, b) -
             drag_i_primitive(s.amplitude, s.pulse_length, a);
    case EnvelopeKind::ideal_drag_q:
      return drag_q_primitive(s.amplitude, s.pulse_length, b) -
             drag_q_primitive(s.amplitude, s.pulse_length, a);
    case EnvelopeKind::raised_cosine_flattop:
      return flattop_primitive(s, b) - flattop_primitive(s, a);
    case EnvelopeKind::square:
      return s.amplitude * (b - a);
    case EnvelopeKind::staircase: {
      double sum = 0.0;
      const double ts = s.sample_time;
      auto i = static_cast<std::size_t>(a / ts);
      for (; i < s.steps.size(); ++i) {
        const double lo = std::max(a, ts * static_cast<double>(i));
        const double hi = std::min(b, ts * static_cast<double>(i + 1));
        if (hi <= lo) {
          if (lo >= b) break;
          continue;
        }
        sum += s.steps[i] * (hi - lo);
      }
      return sum;
    }
  }
  return 0.0;
}

double envelope_area(const EnvelopeSpec& s) { return envelope_integral(s, 0.0, s.duration()); }

std::vector<double> envelope_breakpoints(const EnvelopeSpec& s) {
  std::vector<double> out{0.0};
  if (s.kind == EnvelopeKind::staircase) {
    for (std::size_t i = 1; i < s.steps.size(); ++i) {
      if (s.steps[i] != s.steps[i - 1]) out.push_back(s.sample_time * static_cast<double>(i));
    }
  } else if (s.kind == EnvelopeKind::raised_cosine_flattop) {
    out.push_back(s.rise_time);
    out.push_back(s.rise_time + s.flat_time);
  }
  out.push_back(s.duration());
  return out;
}

EnvelopeSpec discretize_staircase(const EnvelopeSpec& source, double sample_time) {
  if (!(sample_time > 0.0)) fail(ErrorCode::invalid_argument, "t_s must be positive");
  if (source.piecewise_constant()) {
    fail(ErrorCode::invalid_argument, "staircase source must be an analytic envelope");
  }
  source.validate();
  const double tp = source.duration();
  const auto n = static_cast<std::size_t>(std::ceil(tp / sample_time - 1e-9));
  std::vector<double> steps(std::max<std::size_t>(n, 1));
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const double lo = sample_time * static_cast<double>(i);
    steps[i] = envelope_integral(source, lo, lo + sample_time) / sample_time;
  }
  return EnvelopeSpec::staircase(std::move(steps), sample_time);
}

EnvelopeSpec square_from_area(const EnvelopeSpec& source, double pulse_length) {
  if (!(pulse_length > 0.0)) fail(ErrorCode::invalid_argument, "pulse length must be positive");
  return EnvelopeSpec::square(envelope_area(source) / pulse_length, pulse_length);
}

double FilterSpec::tau() const { return 1.0 / ((2.0 * kPi) * cutoff_freq * 1e-3); }

void FilterSpec::validate() const {
  if (order != 1) {
    fail(ErrorCode::unsupported_filter, "only first-order filters are supported");
  }
  if (!(cutoff_freq > 0.0)) fail(ErrorCode::invalid_argument, "cutoff must be positive");
}

FilteredEnvelope::FilteredEnvelope(EnvelopeSpec spec, std::optional<FilterSpec> filter)
    : spec_(std::move(spec)), filter_(std::move(filter)) {
  spec_.validate();
  input_end_ = spec_.duration();
  duration_ = input_end_;
  if (!filter_) return;
  filter_->validate();
  tau_ = filter_->tau();

  double peak = 0.0;
  if (spec_.kind == EnvelopeKind::square) {
    knot_t_ = {0.0};
    knot_x_ = {spec_.amplitude};
    peak = std::abs(spec_.amplitude);
  } else if (spec_.kind == EnvelopeKind::staircase) {
    knot_dt_ = spec_.sample_time;
    for (std::size_t i = 0; i < spec_.steps.size(); ++i) {
      knot_t_.push_back(spec_.sample_time * static_cast<double>(i));
      knot_x_.push_back(spec_.steps[i]);
      peak = std::max(peak, std::abs(spec_.steps[i]));
    }
  } else {
    knot_dt_ = kSmoothGrid;
    const auto n = static_cast<std::size_t>(std::ceil(input_end_ / kSmoothGrid - 1e-9));
    for (std::size_t i = 0; i < n; ++i) {
      const double t = kSmoothGrid * static_cast<double>(i);
      knot_t_.push_back(t);
      knot_x_.push_back(eval_envelope(spec_, t));
      peak = std::max(peak, std::abs(knot_x_.back()));
    }
  }
  knot_slope_.assign(knot_t_.size(), 0.0);
  if (!spec_.piecewise_constant()) {
    for (std::size_t i = 0; i < knot_t_.size(); ++i) {
      const double t1 = i + 1 < knot_t_.size() ? knot_t_[i + 1] : input_end_;
      knot_slope_[i] = (eval_envelope(spec_, t1) - knot_x_[i]) / (t1 - knot_t_[i]);
    }
  }
  // Propagate the filter state across knots with the exact linear-input
  // response y = x - m tau + (y0 - x0 + m tau) exp(-dt/tau).
  knot_y_.assign(knot_t_.size(), 0.0);
  double y = 0.0;
  for (std::size_t i = 0; i < knot_t_.size(); ++i) {
    knot_y_[i] = y;
    const double t1 = i + 1 < knot_t_.size() ? knot_t_[i + 1] : input_end_;
    const double dt = t1 - knot_t_[i];
    const double m = knot_slope_[i];
    const double x0 = knot_x_[i];
    const double x1 = x0 + m * dt;
    y = x1 - m * tau_ + (y - x0 + m * tau_) * std::exp(-dt / tau_);
  }
  y_end_ = y;
  if (peak > 0.0 && std::abs(y_end_) > kTailThreshold * peak) {
    duration_ = input_end_ + tau_ * std::log(std::abs(y_end_) / (kTailThreshold * peak));
  }
}

double FilteredEnvelope::operator()(double t) const {
  if (!filter_) return eval_envelope(spec_, t);
  return eval_filtered(t);
}

double FilteredEnvelope::eval_filtered(double t) const {
  if (t < 0.0 || t >= duration_) return 0.0;
  if (t >= input_end_) return y_end_ * std::exp(-(t - input_end_) / tau_);
  std::size_t i = 0;
  if (knot_dt_ > 0.0) {
    i = std::min(static_cast<std::size_t>(t / knot_dt_), knot_t_.size() - 1);
  } else {
    i = static_cast<std::size_t>(
        std::upper_bound(knot_t_.begin(), knot_t_.end(), t) - knot_t_.begin() - 1);
  }
  const double dt = t - knot_t_[i];
  const double m = knot_slope_[i];
  const double x0 = knot_x_[i];
  return x0 + m * dt - m * tau_ + (knot_y_[i] - x0 + m * tau_) * std::exp(-dt / tau_);
}

std::vector<double> FilteredEnvelope::breakpoints() const {
  std::vector<double> out = envelope_breakpoints(spec_);
  if (filter_) out.push_back(duration_);
  return out;
}

FilteredEnvelope apply_lpf(const EnvelopeSpec& envelope, const FilterSpec& filter) {
  return FilteredEnvelope(envelope, filter);
}

void CarrierSpec::validate() const {
  if (!(drive_freq > 0.0)) fail(ErrorCode::invalid_argument, "carrier frequency must be positive");
}

void DrivePulse::validate() const {
  i_envelope.validate();
  carrier.validate();
  if (filter) filter->validate();
  if (q_envelope) {
    q_envelope->validate();
    if (std::abs(q_envelope->duration() - i_envelope.duration()) > 1e-9) {
      fail(ErrorCode::invalid_argument, "I and Q envelopes must share the pulse length");
    }
  }
  if (target_line < 0) fail(ErrorCode::index_out_of_range, "negative drive line");
}

CompiledPulse::CompiledPulse(const DrivePulse& p)
    : i_(p.i_envelope, p.filter),
      omega_((2.0 * kPi) * p.carrier.drive_freq * 1e-3),
      phase_(p.carrier.phase),
      line_(p.target_line),
      start_(p.start_time) {
  p.validate();
  double dur = i_.duration();
  if (p.q_envelope) {
    q_ = FilteredEnvelope(*p.q_envelope, p.filter);
    has_q_ = true;
    dur = std::max(dur, q_.duration());
  }
  end_ = start_ + dur;
}

double CompiledPulse::value(double t) const {
  const double x = omega_ * t + phase_;
  const double tl = t - start_;
  double v = i_(tl) * std::cos(x);
  if (has_q_) v += q_(tl) * std::sin(x);
  return v;
}

std::vector<double> CompiledPulse::breakpoints() const {
  std::vector<double> out;
  for (double b : i_.breakpoints()) out.push_back(start_ + b);
  if (has_q_)
    for (double b : q_.breakpoints()) out.push_back(start_ + b);
  out.push_back(end_);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

double modulate(const DrivePulse& pulse, double t) { return CompiledPulse(pulse).value(t); }

double PulseProgram::duration() const {
  double end = 0.0;
  for (const auto& p : pulses) end = std::max(end, CompiledPulse(p).end());
  return end;
}

double PulseProgram::max_carrier_mhz() const {
  double f = 0.0;
  for (const auto& p : pulses) f = std::max(f, p.carrier.drive_freq);
  return f;
}

std::string envelope_csv(const EnvelopeSpec& envelope, const std::optional<FilterSpec>& filter,
                         double dt) {
  if (!(dt > 0.0)) fail(ErrorCode::invalid_argument, "sampling interval must be positive");
  const FilteredEnvelope env(envelope, filter);
  CsvWriter w({"time_ns", "amplitude_MHz"});
  w.add_metadata("envelope", to_string(envelope.kind));
  if (filter) w.add_metadata("lpf_cutoff_MHz", format_number(filter->cutoff_freq));
  const auto n = static_cast<std::size_t>(std::ceil(env.duration() / dt));
  for (std::size_t i = 0; i <= n; ++i) {
    const double t = dt * static_cast<double>(i);
    w.add_row(std::vector<double>{t, env(t)});
  }
  return w.str();
}

}  // namespace tpulse
