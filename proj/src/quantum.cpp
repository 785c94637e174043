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

#include "tpulse/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "tpulse/errors.hpp"

namespace tpulse {

TransmonParams TransmonParams::from_mhz(double freq_mhz, double anharmonicity_mhz,
                                        double t1_us, double t2_us, int levels) {
  TransmonParams p;
  p.qubit_freq = mhz_to_rad_per_ns(freq_mhz);
  p.anharmonicity = mhz_to_rad_per_ns(anharmonicity_mhz);
  p.t1 = t1_us;
  p.t2 = t2_us;
  p.levels = levels;
  p.validate();
  return p;
}

void TransmonParams::validate() const {
  if (levels < 2) {
    fail(ErrorCode::invalid_dimension, "transmon needs at least 2 levels");
  }
  if (levels >= 3 && !(anharmonicity < 0.0)) {
    fail(ErrorCode::invalid_argument, "anharmonicity must be negative");
  }
  if (!(qubit_freq > 0.0)) {
    fail(ErrorCode::invalid_argument, "qubit frequency must be positive");
  }
  if (!(t1 > 0.0) || !(t2 > 0.0)) {
    fail(ErrorCode::invalid_argument, "T1 and T2 must be positive");
  }
  // Infinite T1 with finite T2 is pure dephasing and stays valid.
  if (std::isfinite(t1) && t2 > 2.0 * t1 * (1.0 + 1e-12)) {
    std::ostringstream os;
    os << "T2 = " << t2 << " us exceeds 2*T1 = " << 2.0 * t1 << " us";
    fail(ErrorCode::unphysical_dephasing, os.str());
  }
}

double TransmonParams::relaxation_rate() const {
  return std::isfinite(t1) ? 1.0 / (t1 * 1e3) : 0.0;
}

double TransmonParams::pure_dephasing_rate() const {
  const double inv_t2 = std::isfinite(t2) ? 1.0 / (t2 * 1e3) : 0.0;
  const double rate = inv_t2 - 0.5 * relaxation_rate();
  // Rounding at T2 == 2 T1 must not produce a tiny negative rate.
  return rate > 1e-15 * inv_t2 ? rate : 0.0;
}

SystemModel::SystemModel(std::vector<TransmonParams> qubits, double coupling)
    : qubits_(std::move(qubits)), coupling_(coupling) {
  if (qubits_.empty() || qubits_.size() > 2) {
    fail(ErrorCode::invalid_dimension, "system must contain one or two transmons");
  }
  for (const auto& q : qubits_) q.validate();
  if (qubits_.size() == 1 && coupling_ != 0.0) {
    fail(ErrorCode::invalid_argument, "coupling must be zero for a single transmon");
  }
  dim_ = 1;
  for (const auto& q : qubits_) dim_ *= q.levels;
}

const TransmonParams& SystemModel::qubit_at(int index) const {
  if (index < 0 || index >= num_qubits()) {
    fail(ErrorCode::index_out_of_range,
         "qubit index " + std::to_string(index) + " out of range");
  }
  return qubits_[static_cast<std::size_t>(index)];
}

const TransmonParams& SystemModel::qubit(int index) const { return qubit_at(index); }

SystemModel SystemModel::single_qubit(int index) const {
  return SystemModel({qubit_at(index)}, 0.0);
}

SystemModel SystemModel::without_decoherence() const {
  auto qs = qubits_;
  for (auto& q : qs) {
    q.t1 = kInfiniteTime;
    q.t2 = kInfiniteTime;
  }
  return SystemModel(std::move(qs), coupling_);
}

SystemModel SystemModel::with_levels(int levels) const {
  auto qs = qubits_;
  for (auto& q : qs) q.levels = levels;
  return SystemModel(std::move(qs), coupling_);
}

int SystemModel::basis_index(const std::vector<int>& level_per_qubit) const {
  if (static_cast<int>(level_per_qubit.size()) != num_qubits()) {
    fail(ErrorCode::invalid_dimension, "basis label length does not match qubit count");
  }
  int index = 0;
  for (int q = 0; q < num_qubits(); ++q) {
    const int l = level_per_qubit[static_cast<std::size_t>(q)];
    if (l < 0 || l >= levels(q)) {
      fail(ErrorCode::index_out_of_range, "level " + std::to_string(l) + " out of range");
    }
    index = index * levels(q) + l;
  }
  return index;
}

std::vector<int> SystemModel::basis_levels(int index) const {
  std::vector<int> out(qubits_.size());
  for (int q = num_qubits() - 1; q >= 0; --q) {
    out[static_cast<std::size_t>(q)] = index % levels(q);
    index /= levels(q);
  }
  return out;
}

Operator annihilation(int levels) {
  if (levels < 2) fail(ErrorCode::invalid_dimension, "annihilation needs levels >= 2");
  Operator a = Operator::Zero(levels, levels);
  for (int i = 0; i + 1 < levels; ++i) a(i, i + 1) = std::sqrt(static_cast<double>(i + 1));
  return a;
}

Operator embed(const SystemModel& model, const Operator& local, int qubit_index) {
  const int n = model.levels(qubit_index);
  if (local.rows() != n || local.cols() != n) {
    fail(ErrorCode::invalid_dimension, "local operator does not match transmon levels");
  }
  Operator out = Operator::Identity(1, 1);
  for (int q = 0; q < model.num_qubits(); ++q) {
    const Operator factor =
        q == qubit_index ? local : Operator::Identity(model.levels(q), model.levels(q));
    Operator next(out.rows() * factor.rows(), out.cols() * factor.cols());
    for (Eigen::Index i = 0; i < out.rows(); ++i)
      for (Eigen::Index j = 0; j < out.cols(); ++j)
        next.block(i * factor.rows(), j * factor.cols(), factor.rows(), factor.cols()) =
            out(i, j) * factor;
    out = std::move(next);
  }
  return out;
}

Operator number_operator(const SystemModel& model, int qubit_index) {
  const Operator a = annihilation(model.levels(qubit_index));
  return embed(model, a.adjoint() * a, qubit_index);
}

Operator static_hamiltonian(const SystemModel& model) {
  const int d = model.dim();
  Operator h = Operator::Zero(d, d);
  for (int q = 0; q < model.num_qubits(); ++q) {
    const auto& p = model.qubit(q);
    const Operator n = number_operator(model, q);
    const Operator id = Operator::Identity(d, d);
    h += p.qubit_freq * n + 0.5 * p.anharmonicity * n * (n - id);
  }
  if (model.num_qubits() == 2 && model.coupling() != 0.0) {
    const Operator a0 = embed(model, annihilation(model.levels(0)), 0);
    const Operator a1 = embed(model, annihilation(model.levels(1)), 1);
    h += model.coupling() * (a0.adjoint() * a1 + a0 * a1.adjoint());
  }
  return h;
}

Operator drive_operator(const SystemModel& model, int qubit_index) {
  const Operator a = annihilation(model.levels(qubit_index));
  return embed(model, a + a.adjoint(), qubit_index);
}

std::vector<Operator> collapse_operators(const SystemModel& model) {
  std::vector<Operator> out;
  for (int q = 0; q < model.num_qubits(); ++q) {
    const auto& p = model.qubit(q);
    p.validate();
    const double relax = p.relaxation_rate();
    const double dephase = p.pure_dephasing_rate();
    if (relax > 0.0) {
      out.push_back(std::sqrt(relax) * embed(model, annihilation(p.levels), q));
    }
    if (dephase > 0.0) {
      out.push_back(std::sqrt(2.0 * dephase) * number_operator(model, q));
    }
  }
  return out;
}

Operator z_operator(const SystemModel& model, int qubit_index) {
  return level_projector(model, qubit_index, 0) - level_projector(model, qubit_index, 1);
}

Operator level_projector(const SystemModel& model, int qubit_index, int level) {
  const int n = model.levels(qubit_index);
  if (level < 0 || level >= n) fail(ErrorCode::index_out_of_range, "level out of range");
  Operator p = Operator::Zero(n, n);
  p(level, level) = 1.0;
  return embed(model, p, qubit_index);
}

std::vector<double> dressed_qubit_frequencies(const SystemModel& model) {
  const Operator h = static_hamiltonian(model);
  Eigen::SelfAdjointEigenSolver<Operator> es(h);
  const auto& vecs = es.eigenvectors();
  const auto& vals = es.eigenvalues();
  auto energy_of = [&](int bare) {
    Eigen::Index best = 0;
    vecs.row(bare).cwiseAbs2().maxCoeff(&best);
    return vals(best);
  };
  std::vector<int> ground(static_cast<std::size_t>(model.num_qubits()), 0);
  const double e0 = energy_of(model.basis_index(ground));
  std::vector<double> out;
  for (int q = 0; q < model.num_qubits(); ++q) {
    auto excited = ground;
    excited[static_cast<std::size_t>(q)] = 1;
    out.push_back(energy_of(model.basis_index(excited)) - e0);
  }
  return out;
}

double hermiticity_error(const Operator& a) {
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

DensityMatrix::DensityMatrix(Operator matrix) : m_(std::move(matrix)) {
  if (m_.rows() != m_.cols() || m_.rows() == 0) {
    fail(ErrorCode::invalid_dimension, "density matrix must be square and non-empty");
  }
  if (hermiticity_error(m_) > kHermitianTol) {
    fail(ErrorCode::invalid_argument, "density matrix is not Hermitian");
  }
  if (std::abs(m_.trace().real() - 1.0) > kTraceTol) {
    fail(ErrorCode::invalid_argument, "density matrix trace differs from 1");
  }
  const Operator herm = 0.5 * (m_ + m_.adjoint());
  Eigen::SelfAdjointEigenSolver<Operator> es(herm, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -kPositivityTol) {
    fail(ErrorCode::invalid_argument, "density matrix has a negative eigenvalue");
  }
}

DensityMatrix DensityMatrix::unchecked(Operator matrix) {
  return DensityMatrix(std::move(matrix), Unchecked{});
}

DensityMatrix DensityMatrix::pure(const StateVector& psi) {
  const double norm = psi.norm();
  if (norm == 0.0) fail(ErrorCode::invalid_argument, "zero state vector");
  const StateVector v = psi / norm;
  return DensityMatrix(v * v.adjoint());
}

DensityMatrix DensityMatrix::basis(const SystemModel& model, const std::vector<int>& levels) {
  StateVector v = StateVector::Zero(model.dim());
  v(model.basis_index(levels)) = 1.0;
  return pure(v);
}

Operator DensityMatrix::reduced(const SystemModel& model, int qubit_index) const {
  if (model.dim() != dim()) fail(ErrorCode::invalid_dimension, "state/model dimension mismatch");
  const int n = model.levels(qubit_index);
  Operator out = Operator::Zero(n, n);
  for (int i = 0; i < dim(); ++i) {
    const auto li = model.basis_levels(i);
    for (int j = 0; j < dim(); ++j) {
      const auto lj = model.basis_levels(j);
      bool same_rest = true;
      for (int q = 0; q < model.num_qubits(); ++q) {
        if (q != qubit_index && li[static_cast<std::size_t>(q)] != lj[static_cast<std::size_t>(q)]) {
          same_rest = false;
          break;
        }
      }
      if (same_rest) {
        out(li[static_cast<std::size_t>(qubit_index)], lj[static_cast<std::size_t>(qubit_index)]) +=
            m_(i, j);
      }
    }
  }
  return out;
}

}  // namespace tpulse
