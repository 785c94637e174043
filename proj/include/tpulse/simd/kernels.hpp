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

// Vector kernels used by the integrator inner loops. Complex data is stored
// split (real and imaginary arrays). A scalar reference implementation is
// always built; vector variants are picked at runtime when the CPU has them.
//
// TPULSE_SIMD=scalar in the environment forces the reference path.

#include <cstddef>

namespace tpulse::simd {

enum class Isa { scalar, avx2, neon };

const char* to_string(Isa isa);

struct Kernels {
  Isa isa;
  // y += (ar + i ai) * x
  void (*caxpy)(std::size_t n, double ar, double ai, const double* xr, const double* xi,
                double* yr, double* yi);
  // out = z * x, elementwise
  void (*cmul)(std::size_t n, const double* zr, const double* zi, const double* xr,
               const double* xi, double* outr, double* outi);
  // out = y + sum_j c[j] * k[j]; y may be null
  void (*lincomb)(std::size_t n, const double* y, std::size_t m, const double* c,
                  const double* const* k, double* out);
  // sum_i (err_i / (atol + rtol * max(|a_i|, |b_i|)))^2
  double (*error_sq)(std::size_t n, const double* err, const double* a, const double* b,
                     double atol, double rtol);
};

const Kernels& scalar_kernels();
bool isa_available(Isa isa);
/// Kernels for `isa`; falls back to scalar when unavailable.
const Kernels& kernels_for(Isa isa);
/// Process-wide selection, resolved once.
const Kernels& active_kernels();

namespace detail {
const Kernels* avx2_kernels();
const Kernels* neon_kernels();
}  // namespace detail

}  // namespace tpulse::simd
