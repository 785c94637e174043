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

// Calibrated pulse templates, virtual-Z bookkeeping and the scheduler that
// turns native operations into a pulse program.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "tpulse/clifford.hpp"
#include "tpulse/dynamics.hpp"
#include "tpulse/pulse.hpp"

namespace tpulse {

enum class WaveformMode { ideal, staircase, square };

const char* to_string(WaveformMode mode);
WaveformMode waveform_mode_from_string(const std::string& name);

/// X(pi/2) DRAG template. Square mode drops the quadrature term and keeps
/// the in-phase area; staircase mode samples the ideal pair every
/// sample_time.
struct DragTemplate {
  WaveformMode mode = WaveformMode::ideal;
  double amplitude = 0.0;  // A, MHz
  double drag = 0.0;       // B, MHz
  double pulse_length = 20.0;
  double sample_time = 1.0;
  std::optional<FilterSpec> filter;

  EnvelopeSpec i_envelope() const;
  std::optional<EnvelopeSpec> q_envelope() const;
  double duration() const { return pulse_length; }
  DrivePulse pulse(int line, double carrier_mhz, double phase, double start) const;
  void validate() const;
};

/// Cross-resonance template: ideal is the raised-cosine flattop, staircase
/// samples it, square is a plain block of length pulse_length.
struct CrTemplate {
  WaveformMode mode = WaveformMode::ideal;
  double amplitude = 300.0;  // MHz
  double rise_time = 50.0;
  double flat_time = 0.0;
  double pulse_length = 0.0;  // square only
  double sample_time = 1.0;
  std::optional<FilterSpec> filter;

  EnvelopeSpec envelope() const;
  double duration() const;
  DrivePulse pulse(int control_line, double carrier_mhz, double phase, double start) const;
  void validate() const;
};

/// CNOT ~ (Rz(control_phase) (x) post_target) U_cr (I (x) pre_target).
struct CnotCorrection {
  Mat2 pre_target = Mat2::Identity();
  Mat2 post_target = Mat2::Identity();
  double control_phase = 0.0;
  double fidelity = 0.0;  // average gate fidelity on the computational block
};

struct GateSet {
  int qubits = 1;
  std::vector<DragTemplate> x90;         // one per qubit
  std::vector<double> drive_freq;        // MHz, one per qubit
  std::optional<CrTemplate> cr;          // control is qubit 0
  CnotCorrection cnot;

  void validate() const;
};

/// Clifford sequence lowered to native operations with the CNOT corrections
/// folded into the neighbouring single-qubit layers of each element.
std::vector<NativeOp> compile_for(const GateSet& gates, const CliffordSequence& seq);

/// As-soon-as-possible schedule with per-qubit cursors. Virtual Z updates
/// the qubit frame; X(pi/2) pulses carry the frame as carrier phase; the CR
/// pulse blocks both qubits and carries the target frame.
PulseProgram schedule(const GateSet& gates, const std::vector<NativeOp>& ops);

/// Computational block of the CR propagator in the frame rotating at the
/// drive frequencies, basis order |control, target>.
Mat4 cr_block(const SystemModel& model, const GateSet& gates, const EvolutionConfig& config);

/// Average gate fidelity of a (possibly non-unitary) block against a target
/// unitary of the same dimension.
double average_gate_fidelity(const Eigen::MatrixXcd& block, const Eigen::MatrixXcd& target);

/// Single-qubit corrections turning U_cr into a CNOT, from an analytic
/// estimate refined by least squares.
CnotCorrection fit_cnot_correction(const Mat4& u_cr);

}  // namespace tpulse
