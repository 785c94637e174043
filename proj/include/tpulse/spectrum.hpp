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

// Magnitude spectra of sampled, modulated pulses.

#include <vector>

#include "tpulse/pulse.hpp"

namespace tpulse {

struct SpectrumPoint {
  double frequency;  // MHz
  double power;      // dB, 20 log10 |X|
};

/// Samples the modulated pulse at `sample_rate` GS/s from its start to its
/// (filter-extended) end, zero-pads to `n_fft` and returns the one-sided
/// magnitude spectrum. Throws nyquist_violation when the sample rate does not
/// exceed twice the carrier, invalid_argument when n_fft is not a power of two
/// or is shorter than the record.
std::vector<SpectrumPoint> spectrum(const DrivePulse& pulse, double sample_rate, int n_fft);

/// Samples used by spectrum(), exposed for oracles.
std::vector<double> sample_waveform(const DrivePulse& pulse, double sample_rate);

/// Largest power within [f_lo, f_hi] MHz; returns the bin.
SpectrumPoint spectrum_peak(const std::vector<SpectrumPoint>& spec, double f_lo, double f_hi);

}  // namespace tpulse
