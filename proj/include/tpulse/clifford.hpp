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

// Single- and two-qubit Clifford groups, random sequences with recovery, and
// compilation to the native set {virtual Rz, X(pi/2), CNOT}.
//
// Two-qubit matrices use qubit 0 as the most significant tensor factor; the
// native CNOT has qubit 0 as control.

#include <array>
#include <cstdint>
#include <memory>
#include <vector>

#include <Eigen/Dense>

namespace tpulse {

using Mat2 = Eigen::Matrix2cd;
using Mat4 = Eigen::Matrix4cd;

Mat2 rz(double angle);   // diag(e^{-i a/2}, e^{i a/2})
Mat2 rx(double angle);
Mat2 ry(double angle);
Mat4 cnot_matrix();
Mat4 kron(const Mat2& a, const Mat2& b);

/// Operator distance modulo global phase: min over phase of ||A - e^{i p} B||_F.
double phase_distance(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);

class CliffordGroup1Q {
 public:
  static const CliffordGroup1Q& instance();
  int size() const { return static_cast<int>(elements_.size()); }
  const Mat2& element(int i) const { return elements_.at(i); }
  int index_of(const Mat2& u) const;  // -1 if not a Clifford
  int inverse(int i) const { return inverse_.at(i); }
  /// Index of element(a) * element(b).
  int compose(int a, int b) const { return table_[a * size() + b]; }

 private:
  CliffordGroup1Q();
  std::vector<Mat2> elements_;
  std::vector<int> inverse_;
  std::vector<int> table_;
};

/// A two-qubit Clifford as layers of single-qubit Cliffords separated by
/// CNOTs: element = L[k] CNOT L[k-1] ... CNOT L[0], L[0] applied first.
struct CliffordWord {
  std::vector<std::array<int, 2>> layers;  // 1Q Clifford index on qubit 0, 1
  int cnots() const { return static_cast<int>(layers.size()) - 1; }
};

class CliffordGroup2Q {
 public:
  static const CliffordGroup2Q& instance();
  int size() const { return static_cast<int>(elements_.size()); }
  const Mat4& element(int i) const { return elements_.at(i); }
  const CliffordWord& word(int i) const { return words_.at(i); }
  int index_of(const Mat4& u) const;
  int inverse(int i) const { return inverse_.at(i); }

 private:
  CliffordGroup2Q();
  struct Index;
  std::vector<Mat4> elements_;
  std::vector<CliffordWord> words_;
  std::vector<int> inverse_;
  std::shared_ptr<Index> index_;
};

struct RbConfig {
  std::vector<int> sequence_lengths{1, 2, 4, 8, 16, 32, 64, 128};
  int sequences_per_length = 20;
  std::uint64_t seed = 1;
  int qubits = 1;
  void validate() const;
};

/// m random Clifford indices followed by the recovery element.
struct CliffordSequence {
  int qubits = 1;
  std::vector<int> elements;
};

/// Deterministic per-(length, sequence) seed derived from the master seed.
std::uint64_t split_seed(std::uint64_t master, std::uint64_t length, std::uint64_t index);

CliffordSequence generate_clifford_sequence(const RbConfig& config, int length,
                                            std::uint64_t seed);

/// Ideal unitary of a sequence (2x2 or 4x4).
Eigen::MatrixXcd sequence_unitary(const CliffordSequence& seq);

/// Native operation on the ideal level.
struct NativeOp {
  enum class Kind { rz, x90, cnot };
  Kind kind;
  int qubit;         // rz / x90; control for cnot
  double angle = 0;  // rz only
};

/// U = Rz(a) Ry(b) Rz(c) up to phase, compiled to at most two X(pi/2) pulses
/// and virtual Rz, in time order.
std::vector<NativeOp> compile_su2(const Mat2& u, int qubit);

/// Single-qubit layers of a two-qubit Clifford word as matrices; a CNOT sits
/// between consecutive layers.
std::vector<std::array<Mat2, 2>> word_layers(const CliffordWord& word);

/// Every Clifford compiled on its own (no merging across elements).
std::vector<NativeOp> compile_sequence(const CliffordSequence& seq);
Eigen::MatrixXcd native_unitary(const std::vector<NativeOp>& ops, int qubits);

}  // namespace tpulse
