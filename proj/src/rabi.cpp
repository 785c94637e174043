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

#include <cmath>

#include "tpulse/dynamics.hpp"
#include "tpulse/errors.hpp"

namespace tpulse {

namespace {

constexpr double kSampleSpacing = 0.5;  // ns

// Least-squares residual of c + a cos(wt) + b sin(wt) at a fixed frequency.
double sinusoid_residual(const std::vector<double>& t, const std::vector<double>& p,
                         double f_mhz) {
  const double w = kTwoPi * f_mhz * 1e-3;
  Eigen::MatrixXd x(static_cast<int>(t.size()), 3);
  Eigen::VectorXd y(static_cast<int>(t.size()));
  for (std::size_t i = 0; i < t.size(); ++i) {
    const int r = static_cast<int>(i);
    x(r, 0) = 1.0;
    x(r, 1) = std::cos(w * t[i]);
    x(r, 2) = std::sin(w * t[i]);
    y(r) = p[i];
  }
  const Eigen::VectorXd coef = x.colPivHouseholderQr().solve(y);
  return std::sqrt((x * coef - y).squaredNorm() / static_cast<double>(t.size()));
}

}  // namespace

RabiFit measure_rabi(const SystemModel& model, int qubit_index, double amplitude,
                     double drive_scale, double cycles) {
  if (!(amplitude > 0.0) || !(drive_scale > 0.0)) {
    fail(ErrorCode::invalid_argument, "Rabi measurement needs positive amplitude and scale");
  }
  const SystemModel single = model.single_qubit(qubit_index).without_decoherence();
  const double f_drive = rad_per_ns_to_mhz(dressed_qubit_frequencies(single)[0]);
  const double f_guess = drive_scale * amplitude;  // MHz
  const double length = (cycles + 0.5) / f_guess * 1e3;

  DrivePulse pulse;
  pulse.i_envelope = EnvelopeSpec::square(amplitude, length);
  pulse.carrier = {f_drive, 0.0};
  PulseProgram program{{pulse}};

  EvolutionConfig config;
  config.mode = EvolutionMode::unitary;
  config.drive_scale = drive_scale;
  config.observables = {{"p1", level_projector(single, 0, 1)}};
  for (double t = 0.0; t <= length; t += kSampleSpacing) config.sample_times.push_back(t);
  const auto res = evolve(single, program, DensityMatrix::basis(single, {0}), config);
  const auto& times = res.samples->times;
  const auto& pop = res.samples->values[0];

  // Coarse scan, then golden-section refinement of the best bracket.
  const int n = 400;
  const double lo = 0.6 * f_guess, hi = 1.4 * f_guess;
  const double df = (hi - lo) / n;
  int best = 0;
  double best_r = INFINITY;
  for (int i = 0; i <= n; ++i) {
    const double r = sinusoid_residual(times, pop, lo + df * i);
    if (r < best_r) {
      best_r = r;
      best = i;
    }
  }
  double a = lo + df * (best - 1), b = lo + df * (best + 1);
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - g * (b - a), x2 = a + g * (b - a);
  double r1 = sinusoid_residual(times, pop, x1), r2 = sinusoid_residual(times, pop, x2);
  while (b - a > 1e-10 * f_guess) {
    if (r1 < r2) {
      b = x2;
      x2 = x1;
      r2 = r1;
      x1 = b - g * (b - a);
      r1 = sinusoid_residual(times, pop, x1);
    } else {
      a = x1;
      x1 = x2;
      r1 = r2;
      x2 = a + g * (b - a);
      r2 = sinusoid_residual(times, pop, x2);
    }
  }
  RabiFit fit;
  fit.frequency = 0.5 * (a + b);
  fit.rms_residual = sinusoid_residual(times, pop, fit.frequency);
  return fit;
}

double calibrate_drive_scale(const SystemModel& model, int qubit_index, double test_amplitude) {
  constexpr double kGuess = 0.5;
  const RabiFit fit = measure_rabi(model, qubit_index, test_amplitude, kGuess);
  if (fit.rms_residual > 1e-3 || !(fit.frequency > 0.0)) {
    fail(ErrorCode::fit_failed, "Rabi oscillation fit did not converge (rms residual " +
                                    std::to_string(fit.rms_residual) + ")");
  }
  // A transfer time of 1/A means the population oscillates at A/2.
  return kGuess * (0.5 * test_amplitude) / fit.frequency;
}

}  // namespace tpulse
