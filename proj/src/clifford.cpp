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

#include "tpulse/clifford.hpp"

#include <cmath>
#include <deque>
#include <numbers>
#include <random>
#include <unordered_map>

#include "tpulse/errors.hpp"

namespace tpulse {

namespace {

constexpr double kPi = std::numbers::pi;
using Key = std::vector<std::int64_t>;

struct KeyHash {
  std::size_t operator()(const Key& k) const {
    std::uint64_t h = 1469598103934665603ull;
    for (auto v : k) h = (h ^ static_cast<std::uint64_t>(v)) * 1099511628211ull;
    return static_cast<std::size_t>(h);
  }
};

// Phase-normalised, rounded entries. Clifford entries are 0 or have modulus
// at least 1/2, so the first entry above 1/4 fixes the phase.
Key canonical_key(const Eigen::MatrixXcd& u) {
  std::complex<double> ref = 1.0;
  for (int j = 0; j < u.cols(); ++j) {
    bool found = false;
    for (int i = 0; i < u.rows(); ++i) {
      if (std::abs(u(i, j)) > 0.25) {
        ref = std::conj(u(i, j)) / std::abs(u(i, j));
        found = true;
        break;
      }
    }
    if (found) break;
  }
  Key key;
  key.reserve(2 * u.size());
  for (int j = 0; j < u.cols(); ++j) {
    for (int i = 0; i < u.rows(); ++i) {
      const auto v = u(i, j) * ref;
      key.push_back(std::llround(v.real() * 1e6));
      key.push_back(std::llround(v.imag() * 1e6));
    }
  }
  return key;
}

Mat2 hadamard() {
  Mat2 h;
  h << 1, 1, 1, -1;
  return h / std::sqrt(2.0);
}

Mat2 phase_s() {
  Mat2 s;
  s << 1, 0, 0, std::complex<double>(0, 1);
  return s;
}

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

}  // namespace

Mat2 rz(double a) {
  Mat2 m = Mat2::Zero();
  m(0, 0) = std::polar(1.0, -a / 2);
  m(1, 1) = std::polar(1.0, a / 2);
  return m;
}

Mat2 rx(double a) {
  Mat2 m;
  const double c = std::cos(a / 2), s = std::sin(a / 2);
  m << c, std::complex<double>(0, -s), std::complex<double>(0, -s), c;
  return m;
}

Mat2 ry(double a) {
  Mat2 m;
  const double c = std::cos(a / 2), s = std::sin(a / 2);
  m << c, -s, s, c;
  return m;
}

Mat4 cnot_matrix() {
  Mat4 m = Mat4::Zero();
  m(0, 0) = m(1, 1) = m(2, 3) = m(3, 2) = 1.0;
  return m;
}

Mat4 kron(const Mat2& a, const Mat2& b) {
  Mat4 m;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) m.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  }
  return m;
}

double phase_distance(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  const std::complex<double> overlap = (b.adjoint() * a).trace();
  const std::complex<double> ph = std::abs(overlap) > 0 ? overlap / std::abs(overlap) : 1.0;
  return (a - ph * b).norm();
}

// --- single qubit -----------------------------------------------------------

CliffordGroup1Q::CliffordGroup1Q() {
  std::unordered_map<Key, int, KeyHash> seen;
  std::deque<Mat2> queue{Mat2::Identity()};
  seen[canonical_key(Mat2::Identity())] = 0;
  elements_.push_back(Mat2::Identity());
  const Mat2 gens[2] = {hadamard(), phase_s()};
  while (!queue.empty()) {
    const Mat2 g = queue.front();
    queue.pop_front();
    for (const auto& gen : gens) {
      const Mat2 h = gen * g;
      const Key k = canonical_key(h);
      if (seen.count(k)) continue;
      seen[k] = static_cast<int>(elements_.size());
      elements_.push_back(h);
      queue.push_back(h);
    }
  }
  const int n = size();
  table_.resize(n * n);
  inverse_.resize(n);
  for (int a = 0; a < n; ++a) {
    inverse_[a] = seen.at(canonical_key(elements_[a].adjoint()));
    for (int b = 0; b < n; ++b) table_[a * n + b] = seen.at(canonical_key(elements_[a] * elements_[b]));
  }
}

const CliffordGroup1Q& CliffordGroup1Q::instance() {
  static const CliffordGroup1Q group;
  return group;
}

int CliffordGroup1Q::index_of(const Mat2& u) const {
  const Key k = canonical_key(u);
  for (int i = 0; i < size(); ++i) {
    if (canonical_key(elements_[i]) == k) return i;
  }
  return -1;
}

// --- two qubits -------------------------------------------------------------

struct CliffordGroup2Q::Index {
  std::unordered_map<Key, int, KeyHash> map;
};

CliffordGroup2Q::CliffordGroup2Q() : index_(std::make_shared<Index>()) {
  const auto& c1 = CliffordGroup1Q::instance();
  const int h = c1.index_of(hadamard());
  const int s = c1.index_of(phase_s());
  // Generators: 1Q Clifford index acting on one qubit, or -1 for CNOT.
  struct Gen {
    int qubit;
    int clifford;
  };
  const Gen gens[5] = {{0, h}, {0, s}, {1, h}, {1, s}, {-1, -1}};
  const Mat4 cx = cnot_matrix();
  auto gen_matrix = [&](const Gen& g) -> Mat4 {
    if (g.qubit < 0) return cx;
    return g.qubit == 0 ? kron(c1.element(g.clifford), Mat2::Identity())
                        : kron(Mat2::Identity(), c1.element(g.clifford));
  };

  std::vector<int> parent{-1};
  std::vector<int> via{-1};
  elements_.push_back(Mat4::Identity());
  index_->map[canonical_key(Mat4::Identity())] = 0;

  // 0-1 breadth-first search: single-qubit generators are free, CNOT costs
  // one, so every element is reached with the fewest CNOTs.
  std::vector<int> level{0};
  while (!level.empty()) {
    std::deque<int> queue(level.begin(), level.end());
    std::vector<int> closed;
    while (!queue.empty()) {
      const int g = queue.front();
      queue.pop_front();
      closed.push_back(g);
      for (int k = 0; k < 4; ++k) {
        const Mat4 m = gen_matrix(gens[k]) * elements_[g];
        const Key key = canonical_key(m);
        if (index_->map.count(key)) continue;
        index_->map[key] = static_cast<int>(elements_.size());
        elements_.push_back(m);
        parent.push_back(g);
        via.push_back(k);
        queue.push_back(static_cast<int>(elements_.size()) - 1);
      }
    }
    std::vector<int> next;
    for (int g : closed) {
      const Mat4 m = cx * elements_[g];
      const Key key = canonical_key(m);
      if (index_->map.count(key)) continue;
      index_->map[key] = static_cast<int>(elements_.size());
      elements_.push_back(m);
      parent.push_back(g);
      via.push_back(4);
      next.push_back(static_cast<int>(elements_.size()) - 1);
    }
    level = std::move(next);
  }
  if (size() != 11520) fail(ErrorCode::invalid_argument, "two-qubit Clifford closure failed");

  const int id = c1.index_of(Mat2::Identity());
  words_.resize(size());
  inverse_.resize(size());
  for (int i = 0; i < size(); ++i) {
    std::vector<int> path;
    for (int g = i; parent[g] >= 0; g = parent[g]) path.push_back(via[g]);
    CliffordWord w;
    w.layers.push_back({id, id});
    for (auto it = path.rbegin(); it != path.rend(); ++it) {
      if (*it == 4) {
        w.layers.push_back({id, id});
        continue;
      }
      auto& layer = w.layers.back();
      const Gen& g = gens[*it];
      layer[g.qubit] = c1.compose(g.clifford, layer[g.qubit]);
    }
    words_[i] = std::move(w);
    inverse_[i] = index_of(elements_[i].adjoint());
  }
}

const CliffordGroup2Q& CliffordGroup2Q::instance() {
  static const CliffordGroup2Q group;
  return group;
}

int CliffordGroup2Q::index_of(const Mat4& u) const {
  const auto it = index_->map.find(canonical_key(u));
  return it == index_->map.end() ? -1 : it->second;
}

std::vector<std::array<Mat2, 2>> word_layers(const CliffordWord& word) {
  const auto& c1 = CliffordGroup1Q::instance();
  std::vector<std::array<Mat2, 2>> out;
  for (const auto& l : word.layers) out.push_back({c1.element(l[0]), c1.element(l[1])});
  return out;
}

// --- sequences ----------------------------------------------------------------

void RbConfig::validate() const {
  if (sequence_lengths.empty()) fail(ErrorCode::invalid_argument, "no sequence lengths");
  for (std::size_t i = 0; i < sequence_lengths.size(); ++i) {
    if (sequence_lengths[i] < 1) fail(ErrorCode::invalid_argument, "lengths must be >= 1");
    if (i > 0 && sequence_lengths[i] <= sequence_lengths[i - 1]) {
      fail(ErrorCode::invalid_argument, "sequence lengths must be strictly increasing");
    }
  }
  if (sequences_per_length < 2) fail(ErrorCode::invalid_argument, "need K >= 2 sequences");
  if (qubits != 1 && qubits != 2) fail(ErrorCode::invalid_argument, "RB supports 1 or 2 qubits");
}

std::uint64_t split_seed(std::uint64_t master, std::uint64_t length, std::uint64_t index) {
  return splitmix(splitmix(splitmix(master) ^ length) ^ (index * 0x632be59bd9b4e019ull));
}

CliffordSequence generate_clifford_sequence(const RbConfig& config, int length,
                                            std::uint64_t seed) {
  if (length < 1) fail(ErrorCode::invalid_argument, "sequence length must be >= 1");
  CliffordSequence seq;
  seq.qubits = config.qubits;
  std::mt19937_64 rng(seed);
  if (config.qubits == 1) {
    const auto& g = CliffordGroup1Q::instance();
    std::uniform_int_distribution<int> pick(0, g.size() - 1);
    int total = g.index_of(Mat2::Identity());
    for (int i = 0; i < length; ++i) {
      const int c = pick(rng);
      seq.elements.push_back(c);
      total = g.compose(c, total);
    }
    seq.elements.push_back(g.inverse(total));
  } else {
    const auto& g = CliffordGroup2Q::instance();
    std::uniform_int_distribution<int> pick(0, g.size() - 1);
    Mat4 total = Mat4::Identity();
    for (int i = 0; i < length; ++i) {
      const int c = pick(rng);
      seq.elements.push_back(c);
      total = g.element(g.index_of(g.element(c) * total));
    }
    seq.elements.push_back(g.inverse(g.index_of(total)));
  }
  return seq;
}

Eigen::MatrixXcd sequence_unitary(const CliffordSequence& seq) {
  const int d = seq.qubits == 1 ? 2 : 4;
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(d, d);
  for (int c : seq.elements) {
    if (seq.qubits == 1) {
      u = CliffordGroup1Q::instance().element(c) * u;
    } else {
      u = CliffordGroup2Q::instance().element(c) * u;
    }
  }
  return u;
}

// --- compilation ----------------------------------------------------------------

std::vector<NativeOp> compile_su2(const Mat2& input, int qubit) {
  constexpr double kTol = 1e-9;
  const Mat2 u = input / std::sqrt(input.determinant());
  // u ~ Rz(phi) Ry(theta) Rz(lambda)
  const double theta = 2.0 * std::atan2(std::abs(u(1, 0)), std::abs(u(0, 0)));
  // Half-angles straight from the SU(2) entries; halving a difference of
  // args would leave a sign ambiguity on the branch cut.
  const double half_sum = std::abs(u(1, 1)) > kTol ? std::arg(u(1, 1)) : 0.0;
  const double half_diff = std::abs(u(1, 0)) > kTol ? std::arg(u(1, 0)) : 0.0;
  const double phi = half_sum + half_diff;
  const double lambda = half_sum - half_diff;
  auto z = [&](double a) { return NativeOp{NativeOp::Kind::rz, qubit, std::remainder(a, 2 * kPi)}; };
  const NativeOp x90{NativeOp::Kind::x90, qubit, 0.0};
  std::vector<NativeOp> ops;
  if (theta < kTol) {
    ops = {z(phi + lambda)};
  } else if (std::abs(theta - kPi / 2) < kTol) {
    ops = {z(lambda - kPi / 2), x90, z(phi + kPi / 2)};
  } else {
    ops = {z(lambda), x90, z(theta + kPi), x90, z(phi + kPi)};
  }
  std::vector<NativeOp> out;
  for (const auto& op : ops) {
    if (op.kind == NativeOp::Kind::rz && std::abs(op.angle) < 1e-12) continue;
    out.push_back(op);
  }
  return out;
}

std::vector<NativeOp> compile_sequence(const CliffordSequence& seq) {
  std::vector<NativeOp> out;
  for (int c : seq.elements) {
    if (seq.qubits == 1) {
      const auto ops = compile_su2(CliffordGroup1Q::instance().element(c), 0);
      out.insert(out.end(), ops.begin(), ops.end());
      continue;
    }
    const auto layers = word_layers(CliffordGroup2Q::instance().word(c));
    for (std::size_t i = 0; i < layers.size(); ++i) {
      if (i > 0) out.push_back({NativeOp::Kind::cnot, 0, 0.0});
      for (int q = 0; q < 2; ++q) {
        const auto ops = compile_su2(layers[i][q], q);
        out.insert(out.end(), ops.begin(), ops.end());
      }
    }
  }
  return out;
}

Eigen::MatrixXcd native_unitary(const std::vector<NativeOp>& ops, int qubits) {
  const int d = qubits == 1 ? 2 : 4;
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(d, d);
  for (const auto& op : ops) {
    Eigen::MatrixXcd g;
    if (op.kind == NativeOp::Kind::cnot) {
      g = cnot_matrix();
    } else {
      const Mat2 m = op.kind == NativeOp::Kind::rz ? rz(op.angle) : rx(kPi / 2);
      if (qubits == 1) {
        g = m;
      } else {
        g = op.qubit == 0 ? kron(m, Mat2::Identity()) : kron(Mat2::Identity(), m);
      }
    }
    u = g * u;
  }
  return u;
}

}  // namespace tpulse
