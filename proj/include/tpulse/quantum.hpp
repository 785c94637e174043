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

// Truncated transmon Hilbert space: parameters, lab-frame Hamiltonians,
// collapse operators and density matrices.
//
// Units: angular frequencies are rad/ns, times inside the dynamics are ns,
// T1/T2 are configured in microseconds.

#include <complex>
#include <limits>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

namespace tpulse {

using cplx = std::complex<double>;
using Operator = Eigen::MatrixXcd;
using StateVector = Eigen::VectorXcd;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kInfiniteTime = std::numeric_limits<double>::infinity();

/// Linear frequency in MHz to angular frequency in rad/ns.
constexpr double mhz_to_rad_per_ns(double mhz) { return kTwoPi * mhz * 1e-3; }
constexpr double rad_per_ns_to_mhz(double w) { return w / kTwoPi * 1e3; }

struct TransmonParams {
  double qubit_freq = 0.0;     // rad/ns
  double anharmonicity = 0.0;  // rad/ns, negative
  double t1 = kInfiniteTime;   // us
  double t2 = kInfiniteTime;   // us
  int levels = 3;

  static TransmonParams from_mhz(double freq_mhz, double anharmonicity_mhz,
                                 double t1_us, double t2_us, int levels = 3);

  /// Throws Error if an invariant is broken.
  void validate() const;

  /// 1/T1 in 1/ns (0 when T1 is infinite).
  double relaxation_rate() const;
  /// 1/T_phi = 1/T2 - 1/(2 T1) in 1/ns.
  double pure_dephasing_rate() const;
};

class SystemModel {
 public:
  SystemModel() = default;
  /// coupling is the exchange strength J in rad/ns.
  explicit SystemModel(std::vector<TransmonParams> qubits, double coupling = 0.0);

  const std::vector<TransmonParams>& qubits() const { return qubits_; }
  const TransmonParams& qubit(int index) const;
  int num_qubits() const { return static_cast<int>(qubits_.size()); }
  double coupling() const { return coupling_; }
  int dim() const { return dim_; }
  int levels(int qubit) const { return qubit_at(qubit).levels; }

  /// Model of one transmon taken out of this system (no coupling).
  SystemModel single_qubit(int index) const;
  /// Same model with T1 = T2 = infinity on every qubit.
  SystemModel without_decoherence() const;
  /// Same model truncated to `levels` per transmon.
  SystemModel with_levels(int levels) const;

  /// Flat basis index of a product state |l0, l1, ...>; qubit 0 is the most
  /// significant factor of the tensor product.
  int basis_index(const std::vector<int>& level_per_qubit) const;
  std::vector<int> basis_levels(int index) const;

 private:
  const TransmonParams& qubit_at(int index) const;

  std::vector<TransmonParams> qubits_;
  double coupling_ = 0.0;
  int dim_ = 0;
};

/// Lowering operator of a `levels`-dimensional oscillator.
Operator annihilation(int levels);

/// Embeds a single-transmon operator into the full space of `model`.
Operator embed(const SystemModel& model, const Operator& local, int qubit_index);

Operator number_operator(const SystemModel& model, int qubit_index);

/// Duffing Hamiltonian with exchange coupling, lab frame, rad/ns.
Operator static_hamiltonian(const SystemModel& model);

/// (a_i + a_i^dagger) on the full space.
Operator drive_operator(const SystemModel& model, int qubit_index);

/// Relaxation sqrt(1/T1) a_i and dephasing sqrt(2/T_phi) n_i per qubit, in
/// units of sqrt(1/ns); zero-rate operators are omitted.
std::vector<Operator> collapse_operators(const SystemModel& model);

/// |0><0| - |1><1| on one transmon (higher levels contribute 0).
Operator z_operator(const SystemModel& model, int qubit_index);

/// Projector onto level `level` of one transmon.
Operator level_projector(const SystemModel& model, int qubit_index, int level);

/// Dressed 0->1 transition frequency of each qubit (rad/ns): eigenvalues of the
/// static Hamiltonian identified by maximal overlap with bare states.
std::vector<double> dressed_qubit_frequencies(const SystemModel& model);

class DensityMatrix {
 public:
  static constexpr double kHermitianTol = 1e-10;
  static constexpr double kTraceTol = 1e-8;
  static constexpr double kPositivityTol = 1e-8;

  /// Validates the invariants and throws Error(invalid_argument) otherwise.
  explicit DensityMatrix(Operator matrix);

  static DensityMatrix pure(const StateVector& psi);
  static DensityMatrix basis(const SystemModel& model, const std::vector<int>& levels);

  const Operator& matrix() const { return m_; }
  int dim() const { return static_cast<int>(m_.rows()); }
  double trace() const { return m_.trace().real(); }
  double population(int basis_index) const { return m_(basis_index, basis_index).real(); }

  /// Reduced density matrix of one transmon.
  Operator reduced(const SystemModel& model, int qubit_index) const;

  /// Matrix built without validation; callers guarantee the invariants up to
  /// integrator tolerance.
  static DensityMatrix unchecked(Operator matrix);

 private:
  struct Unchecked {};
  DensityMatrix(Operator matrix, Unchecked) : m_(std::move(matrix)) {}

  Operator m_;
};

/// Hermiticity residual max |A - A^dagger|.
double hermiticity_error(const Operator& a);

}  // namespace tpulse
