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

#include "tpulse/dynamics.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <functional>

#include "tpulse/csv.hpp"
#include "tpulse/errors.hpp"
#include "tpulse/simd/kernels.hpp"

namespace tpulse {

namespace {

constexpr int kMaxLines = 2;
constexpr long kMaxStepsPerSegment = 200'000'000;

// Dormand-Prince 5(4) tableau.
constexpr double kC[7] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
constexpr double kA[7][6] = {
    {},
    {1.0 / 5},
    {3.0 / 40, 9.0 / 40},
    {44.0 / 45, -56.0 / 15, 32.0 / 9},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
    {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
};
constexpr double kE[7] = {71.0 / 57600,      0.0,           -71.0 / 16695, 71.0 / 1920,
                          -17253.0 / 339200, 22.0 / 525, -1.0 / 40};

// Plain complex product; std::complex's operator* carries inf/nan recovery
// that is measurable in the right-hand side.
inline cplx mul(cplx a, cplx b) {
  return {a.real() * b.real() - a.imag() * b.imag(), a.real() * b.imag() + a.imag() * b.real()};
}

std::size_t padded(std::size_t m) { return (m + 3) & ~std::size_t{3}; }

struct HamTerm {
  int row;
  int col;
  cplx base;
  std::array<double, kMaxLines> line{};
};

struct JumpTerm {
  int a, c, b, d;
  cplx coef;
  int freq;  // index into the distinct phase frequencies
};

// State layout: rows x cols complex matrix, split into a real block followed
// by an imaginary block, each row padded to a multiple of four doubles.
class Engine {
 public:
  Engine(const SystemModel& model, const PulseProgram& program, const EvolutionConfig& config,
         bool dissipative, int cols)
      : n_(model.dim()),
        m_(cols),
        ld_(padded(static_cast<std::size_t>(cols))),
        block_(static_cast<std::size_t>(n_) * ld_),
        dissipative_(dissipative),
        config_(config),
        k_(simd::active_kernels()) {
    config.validate(program);
    const Operator h0 = static_hamiltonian(model);
    energy_.resize(n_);
    for (int j = 0; j < n_; ++j) energy_[j] = h0(j, j).real();
    // The bare diagonal is a sum of single-transmon level energies, so the
    // frame phases factor per qubit.
    nq_ = model.num_qubits();
    for (int q = 0; q < nq_; ++q) {
      const SystemModel single = model.single_qubit(q);
      const Operator hq = static_hamiltonian(single);
      level_energy_.emplace_back();
      for (int l = 0; l < single.dim(); ++l) level_energy_.back().push_back(hq(l, l).real());
    }
    for (int j = 0; j < n_; ++j) basis_levels_.push_back(model.basis_levels(j));
    level_phase_.resize(nq_);
    for (int q = 0; q < nq_; ++q) level_phase_[q].resize(level_energy_[q].size());

    std::vector<Operator> drives;
    for (int q = 0; q < model.num_qubits(); ++q) drives.push_back(drive_operator(model, q));
    for (const auto& p : program.pulses) {
      if (p.target_line < 0 || p.target_line >= model.num_qubits()) {
        fail(ErrorCode::index_out_of_range,
             "pulse targets drive line " + std::to_string(p.target_line));
      }
    }
    for (int j = 0; j < n_; ++j) {
      for (int k = 0; k < n_; ++k) {
        HamTerm term{j, k, j == k ? cplx{} : h0(j, k), {}};
        bool nonzero = std::abs(term.base) > 0.0;
        for (std::size_t l = 0; l < drives.size(); ++l) {
          term.line[l] = drives[l](j, k).real();
          nonzero = nonzero || term.line[l] != 0.0;
        }
        if (nonzero) terms_.push_back(term);
      }
    }

    if (dissipative_) setup_dissipator(model);

    const double s = drive_coefficient(config.drive_scale);
    drive_scale_ = s;
    for (const auto& p : program.pulses) pulses_.emplace_back(p);

    end_time_ = program.duration();
    if (config.end_time) end_time_ = std::max(end_time_, *config.end_time);

    double f_ref = program.max_carrier_mhz();
    for (const auto& q : model.qubits()) f_ref = std::max(f_ref, rad_per_ns_to_mhz(q.qubit_freq));
    max_step_ = config.max_step > 0.0 ? config.max_step : EvolutionConfig::step_limit(f_ref);

    for (int s_ = 0; s_ < 7; ++s_) stage_[s_].assign(2 * block_, 0.0);
    tmp_.assign(2 * block_, 0.0);
    ynew_.assign(2 * block_, 0.0);
    err_.assign(2 * block_, 0.0);
    work_.assign(2 * block_, 0.0);
    phase_re_.resize(n_);
    phase_im_.resize(n_);
  }

  std::size_t size() const { return 2 * block_; }
  std::size_t ld() const { return ld_; }
  double end_time() const { return end_time_; }

  void load(const Operator& x, std::vector<double>& y) const {
    y.assign(2 * block_, 0.0);
    for (int j = 0; j < n_; ++j) {
      for (int c = 0; c < m_; ++c) {
        y[j * ld_ + c] = x(j, c).real();
        y[block_ + j * ld_ + c] = x(j, c).imag();
      }
    }
  }

  // Lab-frame matrix of the interaction-picture state y at time t.
  Operator to_lab(const std::vector<double>& y, double t) const {
    Operator x(n_, m_);
    for (int j = 0; j < n_; ++j) {
      const cplx pj = std::polar(1.0, -energy_[j] * t);
      for (int c = 0; c < m_; ++c) {
        cplx v(y[j * ld_ + c], y[block_ + j * ld_ + c]);
        if (dissipative_) {
          v *= pj * std::polar(1.0, energy_[c] * t);
        } else {
          v *= pj;
        }
        x(j, c) = v;
      }
    }
    return x;
  }

  // Integrates from 0 to end_time, invoking `observe` at each requested time.
  void run(std::vector<double>& y, const std::vector<double>& sample_times,
           const std::function<void(double, const std::vector<double>&)>& observe) {
    std::vector<double> marks{0.0, end_time_};
    for (const auto& p : pulses_) {
      for (double b : p.breakpoints()) {
        if (b > 0.0 && b < end_time_) marks.push_back(b);
      }
    }
    std::vector<double> samples;
    for (double t : sample_times) {
      if (t >= 0.0 && t <= end_time_) samples.push_back(t);
    }
    marks.insert(marks.end(), samples.begin(), samples.end());
    std::sort(marks.begin(), marks.end());
    std::sort(samples.begin(), samples.end());
    std::vector<double> seg;
    for (double b : marks) {
      if (seg.empty() || b - seg.back() > 1e-9) seg.push_back(b);
    }
    seg.back() = std::max(seg.back(), end_time_);

    std::size_t next_sample = 0;
    auto emit = [&](double t) {
      while (next_sample < samples.size() && samples[next_sample] <= t + 1e-9) {
        observe(samples[next_sample], y);
        ++next_sample;
      }
    };
    emit(0.0);
    double h = max_step_;
    for (std::size_t i = 0; i + 1 < seg.size(); ++i) {
      select_active(seg[i], seg[i + 1]);
      h = integrate_segment(y, seg[i], seg[i + 1], h);
      emit(seg[i + 1]);
    }
  }

  long accepted() const { return accepted_; }
  long rejected() const { return rejected_; }

 private:
  void setup_dissipator(const SystemModel& model) {
    gain_.assign(static_cast<std::size_t>(n_) * n_, 0.0);
    for (const Operator& l : collapse_operators(model)) {
      const Operator gamma = l.adjoint() * l;
      for (int a = 0; a < n_; ++a) {
        for (int c = 0; c < n_; ++c) {
          if (a != c && std::abs(gamma(a, c)) > 1e-15) {
            fail(ErrorCode::invalid_argument, "collapse operators must give a diagonal L^dag L");
          }
        }
      }
      std::vector<std::pair<std::pair<int, int>, cplx>> nz;
      bool diagonal = true;
      for (int a = 0; a < n_; ++a) {
        for (int b = 0; b < n_; ++b) {
          if (std::abs(l(a, b)) > 0.0) {
            nz.push_back({{a, b}, l(a, b)});
            diagonal = diagonal && a == b;
          }
        }
      }
      for (int a = 0; a < n_; ++a) {
        for (int c = 0; c < n_; ++c) {
          gain_[a * n_ + c] -= 0.5 * (gamma(a, a).real() + gamma(c, c).real());
          if (diagonal) gain_[a * n_ + c] += (l(a, a) * std::conj(l(c, c))).real();
        }
      }
      if (diagonal) continue;
      for (const auto& [ab, lab] : nz) {
        for (const auto& [cd, lcd] : nz) {
          JumpTerm jt{ab.first, cd.first, ab.second, cd.second, lab * std::conj(lcd), -1};
          const double f = energy_[jt.a] - energy_[jt.c] - energy_[jt.b] + energy_[jt.d];
          for (std::size_t i = 0; i < jump_rep_.size(); ++i) {
            const JumpTerm& r = jumps_[jump_rep_[i]];
            const double g = energy_[r.a] - energy_[r.c] - energy_[r.b] + energy_[r.d];
            if (std::abs(f - g) <= 1e-12 * (1.0 + std::abs(f))) jt.freq = static_cast<int>(i);
          }
          if (jt.freq < 0) {
            jt.freq = static_cast<int>(jump_rep_.size());
            jump_rep_.push_back(jumps_.size());
          }
          jumps_.push_back(jt);
        }
      }
      jump_phase_.resize(jump_rep_.size());
    }
  }

  void select_active(double t0, double t1) {
    active_.clear();
    for (std::size_t i = 0; i < pulses_.size(); ++i) {
      if (pulses_[i].start() < t1 - 1e-12 && pulses_[i].end() > t0 + 1e-12) active_.push_back(i);
    }
  }

  void rhs(double t, const double* y, double* out) {
    for (int q = 0; q < nq_; ++q) {
      auto& lp = level_phase_[q];
      for (std::size_t l = 0; l < lp.size(); ++l) lp[l] = std::polar(1.0, level_energy_[q][l] * t);
    }
    for (int j = 0; j < n_; ++j) {
      cplx pj = level_phase_[0][basis_levels_[j][0]];
      for (int q = 1; q < nq_; ++q) pj = mul(pj, level_phase_[q][basis_levels_[j][q]]);
      phase_re_[j] = pj.real();
      phase_im_[j] = pj.imag();
    }
    std::array<double, kMaxLines> v{};
    for (std::size_t i : active_) {
      const auto& p = pulses_[i];
      v[p.line()] += drive_scale_ * p.value(t);
    }

    double* acc = dissipative_ ? work_.data() : out;
    std::fill(acc, acc + 2 * block_, 0.0);
    const double* yr = y;
    const double* yi = y + block_;
    double* ar = acc;
    double* ai = acc + block_;
    for (const auto& term : terms_) {
      cplx h = term.base;
      for (int l = 0; l < kMaxLines; ++l) h += term.line[l] * v[l];
      if (h == cplx{}) continue;
      const cplx pj(phase_re_[term.row], phase_im_[term.row]);
      const cplx pk(phase_re_[term.col], -phase_im_[term.col]);
      // -i * exp(i E_j t) h exp(-i E_k t)
      const cplx u = mul(mul(pj, h), pk);
      const cplx w(u.imag(), -u.real());
      k_.caxpy(static_cast<std::size_t>(m_), w.real(), w.imag(), yr + term.col * ld_,
               yi + term.col * ld_, ar + term.row * ld_, ai + term.row * ld_);
    }
    if (!dissipative_) return;

    // -i[H, rho] = M + M^dagger with M = -i H rho.
    double* outr = out;
    double* outi = out + block_;
    std::fill(out, out + 2 * block_, 0.0);
    for (int a = 0; a < n_; ++a) {
      for (int c = 0; c < n_; ++c) {
        const std::size_t ac = a * ld_ + c;
        const std::size_t ca = c * ld_ + a;
        const double g = gain_[a * n_ + c];
        outr[ac] = ar[ac] + ar[ca] + g * yr[ac];
        outi[ac] = ai[ac] - ai[ca] + g * yi[ac];
      }
    }
    for (std::size_t i = 0; i < jump_rep_.size(); ++i) {
      // exp(i (E_a - E_c - E_b + E_d) t)
      const JumpTerm& j = jumps_[jump_rep_[i]];
      jump_phase_[i] = mul(mul(cplx(phase_re_[j.a], phase_im_[j.a]),
                               cplx(phase_re_[j.c], -phase_im_[j.c])),
                           mul(cplx(phase_re_[j.b], -phase_im_[j.b]),
                               cplx(phase_re_[j.d], phase_im_[j.d])));
    }
    for (const auto& j : jumps_) {
      const cplx ph = jump_phase_[j.freq];
      const std::size_t bd = j.b * ld_ + j.d;
      const cplx val = mul(mul(j.coef, ph), cplx(yr[bd], yi[bd]));
      const std::size_t ac = j.a * ld_ + j.c;
      outr[ac] += val.real();
      outi[ac] += val.imag();
    }
  }

  double integrate_segment(std::vector<double>& y, double t0, double t1, double h) {
    const std::size_t len = 2 * block_;
    const double count = 2.0 * n_ * m_;
    const double h_min = 1e-13 * std::max(1.0, t1);
    double t = t0;
    h = std::min(h, max_step_);
    rhs(t, y.data(), stage_[0].data());
    long steps = 0;
    bool rejected_last = false;
    while (t1 - t > 1e-12) {
      const double h_try = std::min(h, t1 - t);
      const bool clipped = h_try < h;
      const double* ks[7];
      double coef[7];
      for (int s = 1; s < 7; ++s) {
        for (int j = 0; j < s; ++j) {
          ks[j] = stage_[j].data();
          coef[j] = h_try * kA[s][j];
        }
        double* dst = s == 6 ? ynew_.data() : tmp_.data();
        k_.lincomb(len, y.data(), static_cast<std::size_t>(s), coef, ks, dst);
        rhs(t + kC[s] * h_try, dst, stage_[s].data());
      }
      for (int j = 0; j < 7; ++j) {
        ks[j] = stage_[j].data();
        coef[j] = h_try * kE[j];
      }
      k_.lincomb(len, nullptr, 7, coef, ks, err_.data());
      const double norm = std::sqrt(
          k_.error_sq(len, err_.data(), y.data(), ynew_.data(), config_.absolute_tolerance,
                      config_.relative_tolerance) /
          count);
      if (!std::isfinite(norm)) {
        fail(ErrorCode::tolerance_not_reached, "integrator produced a non-finite state");
      }
      if (norm <= 1.0) {
        t = clipped ? t1 : t + h_try;
        y.swap(ynew_);
        stage_[0].swap(stage_[6]);
        ++accepted_;
        double factor = norm == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(norm, -0.2), 0.2, 5.0);
        if (rejected_last) factor = std::min(factor, 1.0);
        if (!clipped) h = std::min(h_try * factor, max_step_);
        rejected_last = false;
      } else {
        ++rejected_;
        h = h_try * std::clamp(0.9 * std::pow(norm, -0.2), 0.2, 1.0);
        rejected_last = true;
        if (h < h_min) {
          fail(ErrorCode::tolerance_not_reached,
               "step size underflow at t = " + format_number(t) + " ns");
        }
      }
      if (++steps > kMaxStepsPerSegment) {
        fail(ErrorCode::tolerance_not_reached, "step budget exhausted");
      }
    }
    return h;
  }

  int n_;
  int m_;
  std::size_t ld_;
  std::size_t block_;
  bool dissipative_;
  EvolutionConfig config_;
  const simd::Kernels& k_;
  std::vector<double> energy_;
  int nq_ = 0;
  std::vector<std::vector<double>> level_energy_;
  std::vector<std::vector<int>> basis_levels_;
  std::vector<std::vector<cplx>> level_phase_;
  std::vector<std::size_t> jump_rep_;
  std::vector<cplx> jump_phase_;
  std::vector<HamTerm> terms_;
  std::vector<double> gain_;
  std::vector<JumpTerm> jumps_;
  std::vector<CompiledPulse> pulses_;
  std::vector<std::size_t> active_;
  double drive_scale_ = 0.0;
  double end_time_ = 0.0;
  double max_step_ = 0.0;
  std::vector<double> stage_[7];
  std::vector<double> tmp_, ynew_, err_, work_;
  std::vector<double> phase_re_, phase_im_;
  long accepted_ = 0;
  long rejected_ = 0;
};

void check_observables(const EvolutionConfig& config, int dim) {
  for (const auto& [name, op] : config.observables) {
    if (op.rows() != dim || op.cols() != dim) {
      fail(ErrorCode::invalid_dimension, "observable '" + name + "' has the wrong dimension");
    }
    if (hermiticity_error(op) > 1e-10) {
      fail(ErrorCode::non_hermitian, "observable '" + name + "' is not Hermitian");
    }
  }
}

}  // namespace

const char* to_string(EvolutionMode mode) {
  return mode == EvolutionMode::lindblad ? "lindblad" : "unitary";
}

EvolutionMode evolution_mode_from_string(const std::string& name) {
  if (name == "lindblad") return EvolutionMode::lindblad;
  if (name == "unitary") return EvolutionMode::unitary;
  fail(ErrorCode::invalid_argument, "unknown evolution mode '" + name + "'");
}

double EvolutionConfig::step_limit(double f_max_mhz) {
  if (!(f_max_mhz > 0.0)) return 1.0;
  return 1.0 / (20.0 * f_max_mhz * 1e-3);
}

void EvolutionConfig::validate(const PulseProgram& program) const {
  if (!(relative_tolerance > 0.0) || !(absolute_tolerance > 0.0)) {
    fail(ErrorCode::invalid_argument, "tolerances must be positive");
  }
  if (max_step < 0.0) fail(ErrorCode::step_size_violation, "max_step must be positive");
  const double f = program.max_carrier_mhz();
  if (max_step > 0.0 && f > 0.0 && max_step > step_limit(f) * (1.0 + 1e-12)) {
    fail(ErrorCode::step_size_violation,
         "max_step " + format_number(max_step) + " ns does not resolve a " + format_number(f) +
             " MHz carrier (limit " + format_number(step_limit(f)) + " ns)");
  }
  for (const auto& p : program.pulses) p.validate();
}

double drive_coefficient(double drive_scale) { return drive_scale * kTwoPi * 1e-3; }

EvolutionResult evolve(const SystemModel& model, const PulseProgram& program,
                       const DensityMatrix& initial, const EvolutionConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  if (initial.dim() != model.dim()) {
    fail(ErrorCode::invalid_dimension, "initial state dimension does not match the model");
  }
  check_observables(config, model.dim());
  const bool lindblad = config.mode == EvolutionMode::lindblad;

  // Unitary mode propagates the eigenvectors of the initial state.
  Operator columns;
  Eigen::VectorXd weights;
  if (lindblad) {
    columns = initial.matrix();
  } else {
    Eigen::SelfAdjointEigenSolver<Operator> es(initial.matrix());
    std::vector<int> keep;
    for (int i = 0; i < es.eigenvalues().size(); ++i) {
      if (es.eigenvalues()(i) > 1e-15) keep.push_back(i);
    }
    columns.resize(model.dim(), static_cast<int>(keep.size()));
    weights.resize(static_cast<int>(keep.size()));
    for (std::size_t i = 0; i < keep.size(); ++i) {
      columns.col(static_cast<int>(i)) = es.eigenvectors().col(keep[i]);
      weights(static_cast<int>(i)) = es.eigenvalues()(keep[i]);
    }
  }

  Engine engine(model, program, config, lindblad, static_cast<int>(columns.cols()));
  std::vector<double> y;
  engine.load(columns, y);

  auto density = [&](double t, const std::vector<double>& state) {
    const Operator x = engine.to_lab(state, t);
    if (lindblad) return x;
    return Operator(x * weights.asDiagonal() * x.adjoint());
  };

  EvolutionResult result;
  ExpectationSeries series;
  for (const auto& [name, op] : config.observables) {
    series.names.push_back(name);
    series.values.emplace_back();
  }
  engine.run(y, config.sample_times, [&](double t, const std::vector<double>& state) {
    const Operator rho = density(t, state);
    series.times.push_back(t);
    for (std::size_t k = 0; k < config.observables.size(); ++k) {
      series.values[k].push_back((rho * config.observables[k].second).trace().real());
    }
  });
  result.final_time = engine.end_time();
  result.final_state = DensityMatrix::unchecked(density(result.final_time, y));
  if (!config.sample_times.empty()) result.samples = std::move(series);
  result.accepted_steps = engine.accepted();
  result.rejected_steps = engine.rejected();
  result.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

Operator propagate_columns(const SystemModel& model, const PulseProgram& program,
                           const Operator& columns, const EvolutionConfig& config) {
  if (columns.rows() != model.dim()) {
    fail(ErrorCode::invalid_dimension, "state columns do not match the model dimension");
  }
  Engine engine(model, program, config, false, static_cast<int>(columns.cols()));
  std::vector<double> y;
  engine.load(columns, y);
  engine.run(y, {}, [](double, const std::vector<double>&) {});
  return engine.to_lab(y, engine.end_time());
}

double expectation(const DensityMatrix& state, const Operator& observable) {
  if (observable.rows() != state.dim() || observable.cols() != state.dim()) {
    fail(ErrorCode::invalid_dimension, "observable dimension does not match the state");
  }
  if (hermiticity_error(observable) > 1e-10) {
    fail(ErrorCode::non_hermitian, "observable is not Hermitian");
  }
  return (state.matrix() * observable).trace().real();
}

std::string trajectory_csv(const ExpectationSeries& series) {
  std::vector<std::string> header{"time_ns"};
  header.insert(header.end(), series.names.begin(), series.names.end());
  CsvWriter w(header);
  for (std::size_t i = 0; i < series.times.size(); ++i) {
    std::vector<double> row{series.times[i]};
    for (const auto& v : series.values) row.push_back(v[i]);
    w.add_row(row);
  }
  return w.str();
}

}  // namespace tpulse
