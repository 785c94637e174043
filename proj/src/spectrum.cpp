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

#include "tpulse/spectrum.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>

#include "tpulse/errors.hpp"

namespace tpulse {

namespace {
// FFTW planning is not thread-safe.
std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

std::vector<double> sample_waveform(const DrivePulse& pulse, double sample_rate) {
  if (!(sample_rate > 0.0)) fail(ErrorCode::invalid_argument, "sample rate must be positive");
  const CompiledPulse cp(pulse);
  const double dt = 1.0 / sample_rate;  // ns
  const auto n = static_cast<std::size_t>(std::ceil((cp.end() - cp.start()) / dt));
  std::vector<double> x(n);
  for (std::size_t k = 0; k < n; ++k) x[k] = cp.value(cp.start() + dt * static_cast<double>(k));
  return x;
}

std::vector<SpectrumPoint> spectrum(const DrivePulse& pulse, double sample_rate, int n_fft) {
  if (!(sample_rate * 1e3 > 2.0 * pulse.carrier.drive_freq)) {
    fail(ErrorCode::nyquist_violation, "sample rate " + std::to_string(sample_rate) +
                                           " GS/s does not exceed twice the carrier");
  }
  if (n_fft <= 0 || (n_fft & (n_fft - 1)) != 0) {
    fail(ErrorCode::invalid_argument, "n_fft must be a power of two");
  }
  const std::vector<double> x = sample_waveform(pulse, sample_rate);
  if (x.size() > static_cast<std::size_t>(n_fft)) {
    fail(ErrorCode::invalid_argument, "n_fft is shorter than the sampled pulse");
  }
  double* in = fftw_alloc_real(n_fft);
  fftw_complex* out = fftw_alloc_complex(n_fft / 2 + 1);
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(plan_mutex());
    plan = fftw_plan_dft_r2c_1d(n_fft, in, out, FFTW_ESTIMATE);
  }
  std::fill(in, in + n_fft, 0.0);
  std::copy(x.begin(), x.end(), in);
  fftw_execute(plan);

  std::vector<SpectrumPoint> result(n_fft / 2 + 1);
  const double df = sample_rate * 1e3 / n_fft;
  for (int k = 0; k <= n_fft / 2; ++k) {
    const double mag = std::hypot(out[k][0], out[k][1]);
    result[k] = {df * k, 20.0 * std::log10(std::max(mag, 1e-300))};
  }
  {
    std::lock_guard<std::mutex> lock(plan_mutex());
    fftw_destroy_plan(plan);
  }
  fftw_free(in);
  fftw_free(out);
  return result;
}

SpectrumPoint spectrum_peak(const std::vector<SpectrumPoint>& spec, double f_lo, double f_hi) {
  SpectrumPoint best{NAN, -INFINITY};
  for (const auto& p : spec) {
    if (p.frequency >= f_lo && p.frequency <= f_hi && p.power > best.power) best = p;
  }
  if (std::isnan(best.frequency)) fail(ErrorCode::invalid_argument, "empty frequency window");
  return best;
}

}  // namespace tpulse
