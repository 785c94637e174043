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

#include "tpulse/gates.hpp"

#include <cmath>
#include <numbers>

#include "detail/least_squares.hpp"
#include "tpulse/errors.hpp"
#include "tpulse/metrics.hpp"

namespace tpulse {

namespace {

constexpr double kPi = std::numbers::pi;

Mat2 pauli(int k) {
  Mat2 m = Mat2::Zero();
  if (k == 0) {
    m(0, 1) = m(1, 0) = 1.0;
  } else if (k == 1) {
    m(0, 1) = cplx(0, -1);
    m(1, 0) = cplx(0, 1);
  } else {
    m(0, 0) = 1.0;
    m(1, 1) = -1.0;
  }
  return m;
}

// exp(-i v.sigma / 2)
Mat2 su2(double x, double y, double z) {
  const double n = std::sqrt(x * x + y * y + z * z);
  if (n < 1e-300) return Mat2::Identity();
  const Mat2 g = (x * pauli(0) + y * pauli(1) + z * pauli(2)) / n;
  return std::cos(n / 2) * Mat2::Identity() - cplx(0, 1) * std::sin(n / 2) * g;
}

}  // namespace

const char* to_string(WaveformMode mode) {
  switch (mode) {
    case WaveformMode::ideal: return "ideal";
    case WaveformMode::staircase: return "staircase";
    case WaveformMode::square: return "square";
  }
  return "?";
}

WaveformMode waveform_mode_from_string(const std::string& name) {
  if (name == "ideal") return WaveformMode::ideal;
  if (name == "staircase") return WaveformMode::staircase;
  if (name == "square") return WaveformMode::square;
  fail(ErrorCode::config_error, "unknown waveform mode '" + name + "'");
}

// --- templates --------------------------------------------------------------

EnvelopeSpec DragTemplate::i_envelope() const {
  const auto ideal = EnvelopeSpec::ideal_drag_i(amplitude, pulse_length);
  switch (mode) {
    case WaveformMode::ideal: return ideal;
    case WaveformMode::staircase: return discretize_staircase(ideal, sample_time);
    case WaveformMode::square: return square_from_area(ideal, pulse_length);
  }
  return ideal;
}

std::optional<EnvelopeSpec> DragTemplate::q_envelope() const {
  if (mode == WaveformMode::square || drag == 0.0) return std::nullopt;
  const auto ideal = EnvelopeSpec::ideal_drag_q(drag, pulse_length);
  if (mode == WaveformMode::staircase) return discretize_staircase(ideal, sample_time);
  return ideal;
}

DrivePulse DragTemplate::pulse(int line, double carrier_mhz, double phase, double start) const {
  DrivePulse p;
  p.i_envelope = i_envelope();
  p.q_envelope = q_envelope();
  p.carrier = {carrier_mhz, phase};
  p.filter = filter;
  p.target_line = line;
  p.start_time = start;
  return p;
}

void DragTemplate::validate() const {
  if (!(pulse_length > 0.0)) fail(ErrorCode::invalid_argument, "DRAG pulse length must be > 0");
  if (mode == WaveformMode::staircase && !(sample_time > 0.0)) {
    fail(ErrorCode::invalid_argument, "staircase sample time must be > 0");
  }
  if (filter) filter->validate();
}

EnvelopeSpec CrTemplate::envelope() const {
  switch (mode) {
    case WaveformMode::ideal:
      return EnvelopeSpec::raised_cosine_flattop(amplitude, rise_time, flat_time);
    case WaveformMode::staircase:
      return discretize_staircase(
          EnvelopeSpec::raised_cosine_flattop(amplitude, rise_time, flat_time), sample_time);
    case WaveformMode::square:
      return EnvelopeSpec::square(amplitude, pulse_length);
  }
  return {};
}

double CrTemplate::duration() const { return envelope().duration(); }

DrivePulse CrTemplate::pulse(int control_line, double carrier_mhz, double phase,
                             double start) const {
  DrivePulse p;
  p.i_envelope = envelope();
  p.carrier = {carrier_mhz, phase};
  p.filter = filter;
  p.target_line = control_line;
  p.start_time = start;
  return p;
}

void CrTemplate::validate() const {
  if (mode == WaveformMode::square) {
    if (!(pulse_length > 0.0)) fail(ErrorCode::invalid_argument, "square CR length must be > 0");
  } else if (rise_time < 0.0 || flat_time < 0.0 || rise_time + flat_time <= 0.0) {
    fail(ErrorCode::invalid_argument, "CR flattop times must be non-negative and non-trivial");
  }
  if (mode == WaveformMode::staircase && !(sample_time > 0.0)) {
    fail(ErrorCode::invalid_argument, "staircase sample time must be > 0");
  }
  if (filter) filter->validate();
}

void GateSet::validate() const {
  if (qubits != 1 && qubits != 2) fail(ErrorCode::invalid_argument, "gate set needs 1 or 2 qubits");
  if (static_cast<int>(x90.size()) != qubits || static_cast<int>(drive_freq.size()) != qubits) {
    fail(ErrorCode::invalid_argument, "one X90 template and drive frequency per qubit");
  }
  for (const auto& t : x90) t.validate();
  if (qubits == 2) {
    if (!cr) fail(ErrorCode::invalid_argument, "two-qubit gate set needs a CR template");
    cr->validate();
  }
}

// --- compilation and scheduling -----------------------------------------------

std::vector<NativeOp> compile_for(const GateSet& gates, const CliffordSequence& seq) {
  if (seq.qubits != gates.qubits) {
    fail(ErrorCode::invalid_argument, "sequence and gate set disagree on qubit count");
  }
  if (seq.qubits == 1) return compile_sequence(seq);
  const auto& g2 = CliffordGroup2Q::instance();
  const auto& corr = gates.cnot;
  const Mat2 zc = rz(corr.control_phase);
  std::vector<NativeOp> out;
  for (int c : seq.elements) {
    auto layers = word_layers(g2.word(c));
    const std::size_t last = layers.size() - 1;
    for (std::size_t i = 0; i < layers.size(); ++i) {
      auto& l = layers[i];
      if (i > 0) {
        l[0] = l[0] * zc;
        l[1] = l[1] * corr.post_target;
        out.push_back({NativeOp::Kind::cnot, 0, 0.0});
      }
      if (i < last) l[1] = corr.pre_target * l[1];
      for (int q = 0; q < 2; ++q) {
        const auto ops = compile_su2(l[q], q);
        out.insert(out.end(), ops.begin(), ops.end());
      }
    }
  }
  return out;
}

PulseProgram schedule(const GateSet& gates, const std::vector<NativeOp>& ops) {
  gates.validate();
  std::vector<double> cursor(gates.qubits, 0.0);
  std::vector<double> frame(gates.qubits, 0.0);
  PulseProgram program;
  for (const auto& op : ops) {
    if (op.qubit < 0 || op.qubit >= gates.qubits) {
      fail(ErrorCode::index_out_of_range, "native op on a missing qubit");
    }
    switch (op.kind) {
      case NativeOp::Kind::rz:
        frame[op.qubit] = std::remainder(frame[op.qubit] + op.angle, 2 * kPi);
        break;
      case NativeOp::Kind::x90: {
        const auto& t = gates.x90[op.qubit];
        program.pulses.push_back(
            t.pulse(op.qubit, gates.drive_freq[op.qubit], frame[op.qubit], cursor[op.qubit]));
        cursor[op.qubit] += t.duration();
        break;
      }
      case NativeOp::Kind::cnot: {
        if (gates.qubits != 2) fail(ErrorCode::invalid_argument, "CNOT on a one-qubit gate set");
        const double start = std::max(cursor[0], cursor[1]);
        program.pulses.push_back(gates.cr->pulse(0, gates.drive_freq[1], frame[1], start));
        cursor[0] = cursor[1] = start + gates.cr->duration();
        break;
      }
    }
  }
  return program;
}

// --- CNOT from CR ---------------------------------------------------------------

Mat4 cr_block(const SystemModel& model, const GateSet& gates, const EvolutionConfig& config) {
  if (model.num_qubits() != 2 || !gates.cr) {
    fail(ErrorCode::invalid_argument, "CR block needs a two-qubit model and a CR template");
  }
  const PulseProgram program{{gates.cr->pulse(0, gates.drive_freq[1], 0.0, 0.0)}};
  Operator cols = Operator::Zero(model.dim(), 4);
  for (int k = 0; k < 4; ++k) cols(model.basis_index({k / 2, k % 2}), k) = 1.0;
  EvolutionConfig cfg = config;
  cfg.mode = EvolutionMode::unitary;
  cfg.sample_times.clear();
  cfg.observables.clear();
  cfg.end_time.reset();
  const Operator u = propagate_columns(model, program, cols, cfg);
  const double t = program.duration();
  Mat4 block;
  for (int i = 0; i < 4; ++i) {
    const double e = mhz_to_rad_per_ns((i / 2) * gates.drive_freq[0] + (i % 2) * gates.drive_freq[1]);
    const cplx ph = std::polar(1.0, e * t);
    for (int j = 0; j < 4; ++j) block(i, j) = ph * u(model.basis_index({i / 2, i % 2}), j);
  }
  return block;
}

double average_gate_fidelity(const Eigen::MatrixXcd& block, const Eigen::MatrixXcd& target) {
  const double d = static_cast<double>(block.rows());
  const double overlap = std::norm((target.adjoint() * block).trace());
  return ((block.adjoint() * block).trace().real() + overlap) / (d * (d + 1.0));
}

CnotCorrection fit_cnot_correction(const Mat4& u) {
  const Mat2 u0 = u.block<2, 2>(0, 0);
  const Mat2 u1 = u.block<2, 2>(2, 2);
  const AxisAngle w = axis_angle(u1.adjoint() * u0);
  const auto& n = w.axis;
  // V0 takes the x axis onto n; then R0 = V0^dag U0^dag leaves the control-0
  // block at identity and the control-1 block as a rotation about x.
  Mat2 v0 = Mat2::Identity();
  const double ky = -n[2], kz = n[1];
  const double kn = std::hypot(ky, kz);
  if (kn > 1e-12) {
    const double ang = std::acos(std::clamp(n[0], -1.0, 1.0));
    v0 = su2(0.0, ang * ky / kn, ang * kz / kn);
  } else if (n[0] < 0.0) {
    v0 = rz(kPi);
  }
  const Mat2 u0n = u0 / std::sqrt(u0.determinant());
  const Mat2 r0 = v0.adjoint() * u0n.adjoint();
  const Mat4 cx = cnot_matrix();

  auto assemble = [&](const Eigen::VectorXd& x, double alpha) -> Mat4 {
    const Mat2 v = v0 * su2(x[0], x[1], x[2]);
    const Mat2 r = su2(x[3], x[4], x[5]) * r0;
    return kron(rz(alpha), r) * u * kron(Mat2::Identity(), v);
  };
  Eigen::VectorXd x = Eigen::VectorXd::Zero(7);
  {
    const Mat4 m = assemble(x, 0.0);
    const cplx p0 = m.block<2, 2>(0, 0).trace() / 2.0;
    const cplx p1 = (m.block<2, 2>(2, 2) * pauli(0)).trace() / 2.0;
    x[6] = std::arg(p0 / p1);
  }
  detail::Residual residual = [&](const Eigen::VectorXd& p, Eigen::VectorXd& r) {
    const Mat4 m = assemble(p, p[6]);
    const cplx tr = (cx.adjoint() * m).trace();
    const cplx ph = std::abs(tr) > 0.0 ? tr / std::abs(tr) : 1.0;
    const Mat4 diff = m - ph * cx;
    for (int k = 0; k < 16; ++k) {
      r[2 * k] = diff(k / 4, k % 4).real();
      r[2 * k + 1] = diff(k / 4, k % 4).imag();
    }
  };
  x = detail::least_squares(residual, x, 32).x;

  CnotCorrection c;
  c.pre_target = v0 * su2(x[0], x[1], x[2]);
  c.post_target = su2(x[3], x[4], x[5]) * r0;
  c.control_phase = std::remainder(x[6], 4 * kPi);
  c.fidelity = average_gate_fidelity(assemble(x, x[6]), cx);
  return c;
}

}  // namespace tpulse
