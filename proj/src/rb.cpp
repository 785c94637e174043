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

#include "tpulse/rb.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <json.hpp>

#include "detail/least_squares.hpp"
#include "tpulse/csv.hpp"
#include "tpulse/errors.hpp"
#include "tpulse/parallel.hpp"

namespace tpulse {

const char* to_string(RbBackend backend) {
  switch (backend) {
    case RbBackend::pulse: return "pulse";
    case RbBackend::symbolic: return "symbolic";
    case RbBackend::depolarizing: return "depolarizing";
  }
  return "?";
}

double rb_infidelity(double decay, int qubits) {
  const double d = std::pow(2.0, qubits);
  return (d - 1.0) * (1.0 - decay) / d;
}

DecayFit fit_decay(const std::vector<double>& lengths, const std::vector<double>& survival,
                   double fallback_baseline, bool force_fixed) {
  if (lengths.size() != survival.size() || lengths.size() < 3) {
    fail(ErrorCode::fit_failed, "decay fit needs at least 3 lengths");
  }
  const int n = static_cast<int>(lengths.size());
  DecayFit f;
  const auto [lo, hi] = std::minmax_element(survival.begin(), survival.end());
  if (*hi - *lo < 1e-12) {
    f.decay = 1.0;
    f.baseline = 0.0;
    f.amplitude = *hi;
    f.ok = true;
    return f;
  }
  // x = (A, p, B); B is dropped from the parameters when held fixed.
  auto solve = [&](bool fixed) {
    detail::Residual res = [&](const Eigen::VectorXd& x, Eigen::VectorXd& r) {
      const double b = fixed ? fallback_baseline : x[2];
      for (int i = 0; i < n; ++i) r[i] = x[0] * std::pow(x[1], lengths[i]) + b - survival[i];
    };
    Eigen::VectorXd x0(fixed ? 2 : 3);
    x0[0] = 0.5;
    x0[1] = 0.99;
    if (!fixed) x0[2] = 0.5;
    return detail::least_squares(res, x0, n, 1e-14);
  };
  // Gauss-Newton covariance of (A, p[, B]) at the solution
  auto covariance = [&](const detail::LeastSquaresResult& sol, bool fixed) {
    const int np = fixed ? 2 : 3;
    const double a = sol.x[0], p = sol.x[1];
    Eigen::MatrixXd jac(n, np);
    for (int i = 0; i < n; ++i) {
      jac(i, 0) = std::pow(p, lengths[i]);
      jac(i, 1) = a * lengths[i] * std::pow(p, lengths[i] - 1.0);
      if (np == 3) jac(i, 2) = 1.0;
    }
    const double s2 = n > np ? sol.rms * sol.rms * n / (n - np) : 0.0;
    return Eigen::MatrixXd(s2 * (jac.transpose() * jac).completeOrthogonalDecomposition().pseudoInverse());
  };
  // survival that never falls halfway to the baseline cannot pin it
  const bool shallow = *lo > fallback_baseline + 0.5 * (1.0 - fallback_baseline);
  auto sol = solve(force_fixed || shallow);
  bool fixed = force_fixed || shallow;
  if (!fixed) {
    const double a = sol.x[0], b = sol.x[2];
    const double se_b = std::sqrt(std::max(0.0, covariance(sol, false)(2, 2)));
    if (a < 0.0 || a > 1.0 || b < 0.0 || b > 1.0 || !(se_b <= 0.05)) {
      sol = solve(true);
      fixed = true;
    }
  }
  f.amplitude = sol.x[0];
  f.decay = sol.x[1];
  f.baseline = fixed ? fallback_baseline : sol.x[2];
  f.baseline_fixed = fixed;
  f.rms = sol.rms;
  if (std::isfinite(f.decay)) f.decay_stderr = std::sqrt(std::max(0.0, covariance(sol, fixed)(1, 1)));
  f.ok = true;
  if (!std::isfinite(f.decay) || f.decay < 0.0 || f.decay > 1.0) {
    f.ok = false;
    f.message = "decay parameter outside [0, 1]";
  } else if (f.rms > 0.05) {
    f.ok = false;
    f.message = "fit residual above 0.05";
  } else if (f.baseline_fixed) {
    f.message = "baseline held at 1/d";
  }
  return f;
}

double run_sequence(const SystemModel& model, const GateSet& gates, const CliffordSequence& seq,
                    const RbOptions& options) {
  const int d = seq.qubits == 1 ? 2 : 4;
  switch (options.backend) {
    case RbBackend::symbolic: {
      const Eigen::MatrixXcd u = native_unitary(compile_sequence(seq), seq.qubits);
      return std::norm(u(0, 0));
    }
    case RbBackend::depolarizing: {
      Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(d, d);
      rho(0, 0) = 1.0;
      const Eigen::MatrixXcd mixed = Eigen::MatrixXcd::Identity(d, d) / static_cast<double>(d);
      for (int c : seq.elements) {
        const Eigen::MatrixXcd u = seq.qubits == 1
                                       ? Eigen::MatrixXcd(CliffordGroup1Q::instance().element(c))
                                       : Eigen::MatrixXcd(CliffordGroup2Q::instance().element(c));
        rho = options.depolarizing_p * (u * rho * u.adjoint()) + (1.0 - options.depolarizing_p) * mixed;
      }
      return rho(0, 0).real();
    }
    case RbBackend::pulse: break;
  }
  if (model.num_qubits() != seq.qubits) {
    fail(ErrorCode::invalid_argument, "model and sequence disagree on qubit count");
  }
  const PulseProgram program = schedule(gates, compile_for(gates, seq));
  const std::vector<int> ground(model.num_qubits(), 0);
  const int g = model.basis_index(ground);
  if (options.solver.mode == EvolutionMode::unitary) {
    Operator col = Operator::Zero(model.dim(), 1);
    col(g, 0) = 1.0;
    return std::norm(propagate_columns(model, program, col, options.solver)(g, 0));
  }
  EvolutionConfig cfg = options.solver;
  cfg.sample_times.clear();
  cfg.observables.clear();
  return evolve(model, program, DensityMatrix::basis(model, ground), cfg).final_state.population(g);
}

RbResult run_rb(const SystemModel& model, const GateSet& gates, const RbConfig& config,
                const RbOptions& options) {
  config.validate();
  if (options.backend == RbBackend::pulse) gates.validate();
  if (options.bootstrap < 0) fail(ErrorCode::invalid_argument, "bootstrap count must be >= 0");
  const int nl = static_cast<int>(config.sequence_lengths.size());
  const int k = config.sequences_per_length;
  RbResult out;
  out.qubits = config.qubits;
  out.lengths = config.sequence_lengths;
  out.samples.resize(static_cast<std::size_t>(nl) * k);
  parallel_for(out.samples.size(), options.threads, [&](std::size_t job) {
    const int li = static_cast<int>(job) / k;
    const int si = static_cast<int>(job) % k;
    const int m = config.sequence_lengths[li];
    const auto seq = generate_clifford_sequence(config, m, split_seed(config.seed, m, si));
    out.samples[job] = {m, si, run_sequence(model, gates, seq, options)};
  });

  std::vector<double> xs(out.lengths.begin(), out.lengths.end());
  auto means_of = [&](const std::vector<int>& pick) {
    std::vector<double> mean(nl, 0.0);
    for (int li = 0; li < nl; ++li) {
      for (int j = 0; j < k; ++j) mean[li] += out.samples[li * k + pick[li * k + j]].survival;
      mean[li] /= k;
    }
    return mean;
  };
  std::vector<int> identity(static_cast<std::size_t>(nl) * k);
  for (int li = 0; li < nl; ++li) std::iota(identity.begin() + li * k, identity.begin() + (li + 1) * k, 0);
  out.mean_survival = means_of(identity);
  const double inv_d = 1.0 / std::pow(2.0, config.qubits);
  out.fit = fit_decay(xs, out.mean_survival, inv_d);
  out.infidelity = 100.0 * rb_infidelity(out.fit.decay, config.qubits);

  std::vector<double> boot;
  for (int b = 0; b < options.bootstrap; ++b) {
    std::mt19937_64 rng(split_seed(config.seed, 0xB0075u, static_cast<std::uint64_t>(b)));
    std::uniform_int_distribution<int> pick(0, k - 1);
    std::vector<int> idx(identity.size());
    for (auto& i : idx) i = pick(rng);
    const auto f = fit_decay(xs, means_of(idx), inv_d, out.fit.baseline_fixed);
    if (f.ok) boot.push_back(100.0 * rb_infidelity(f.decay, config.qubits));
  }
  out.bootstrap_used = static_cast<int>(boot.size());
  if (boot.size() > 1) {
    const double mu = std::accumulate(boot.begin(), boot.end(), 0.0) / boot.size();
    double ss = 0.0;
    for (double v : boot) ss += (v - mu) * (v - mu);
    out.infidelity_std = std::sqrt(ss / (boot.size() - 1));
  }

  out.metadata = model_metadata(model, options.solver);
  out.metadata["backend"] = to_string(options.backend);
  out.metadata["seed"] = std::to_string(config.seed);
  out.metadata["qubits"] = std::to_string(config.qubits);
  out.metadata["sequences_per_length"] = std::to_string(k);
  out.metadata["survival"] = "population of |0...0> at program end";
  if (options.backend == RbBackend::depolarizing) {
    out.metadata["depolarizing_p"] = format_number(options.depolarizing_p);
  }
  return out;
}

std::string RbResult::raw_csv() const {
  CsvWriter w({"m", "sequence_index", "survival"});
  for (const auto& [key, v] : metadata) w.add_metadata(key, v);
  for (const auto& s : samples) {
    w.add_row({std::to_string(s.length), std::to_string(s.sequence), format_number(s.survival)});
  }
  return w.str();
}

std::string RbResult::summary_json() const {
  nlohmann::ordered_json j;
  j["metadata"] = metadata;
  j["qubits"] = qubits;
  j["lengths"] = lengths;
  j["mean_survival"] = mean_survival;
  j["fit"] = {{"amplitude", fit.amplitude},
              {"baseline", fit.baseline},
              {"decay", fit.decay},
              {"decay_stderr", fit.decay_stderr},
              {"rms", fit.rms},
              {"baseline_fixed", fit.baseline_fixed},
              {"ok", fit.ok},
              {"message", fit.message}};
  j["infidelity_percent"] = infidelity;
  j["infidelity_std_percent"] = infidelity_std;
  j["bootstrap_resamples"] = bootstrap_used;
  return j.dump(2) + "\n";
}

std::vector<LengthFidelityPoint> sweep_length_fidelity(
    const SystemModel& model, const std::vector<std::pair<double, double>>& pairs,
    const GateSetOptions& base, const RbConfig& config, const RbOptions& options) {
  std::vector<LengthFidelityPoint> out;
  for (const auto& [amp, length] : pairs) {
    GateSetOptions o = base;
    o.cr_amplitude = amp;
    o.cr_length = length;
    const GateSet gates = calibrate_gate_set(model, o);
    LengthFidelityPoint p;
    p.amplitude = amp;
    p.pulse_length = length;
    p.cnot_fidelity = gates.cnot.fidelity;
    p.rb = run_rb(model, gates, config, options);
    p.rb.metadata["cr_amplitude_mhz"] = format_number(amp);
    p.rb.metadata["cr_length_ns"] = format_number(length);
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace tpulse
