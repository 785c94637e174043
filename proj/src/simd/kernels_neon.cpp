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

// NEON is part of the aarch64 baseline, so no per-file flags are needed.

#include "tpulse/simd/kernels.hpp"

#if defined(__aarch64__) && defined(__ARM_NEON)

#include <arm_neon.h>

#include <algorithm>
#include <cmath>

namespace tpulse::simd {
namespace {

void caxpy(std::size_t n, double ar, double ai, const double* xr, const double* xi, double* yr,
           double* yi) {
  const float64x2_t vr = vdupq_n_f64(ar);
  const float64x2_t vi = vdupq_n_f64(ai);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t a = vld1q_f64(xr + i);
    const float64x2_t b = vld1q_f64(xi + i);
    float64x2_t r = vld1q_f64(yr + i);
    float64x2_t m = vld1q_f64(yi + i);
    r = vfmaq_f64(r, vr, a);
    r = vfmsq_f64(r, vi, b);
    m = vfmaq_f64(m, vr, b);
    m = vfmaq_f64(m, vi, a);
    vst1q_f64(yr + i, r);
    vst1q_f64(yi + i, m);
  }
  for (; i < n; ++i) {
    yr[i] += ar * xr[i] - ai * xi[i];
    yi[i] += ar * xi[i] + ai * xr[i];
  }
}

void cmul(std::size_t n, const double* zr, const double* zi, const double* xr, const double* xi,
          double* outr, double* outi) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t a = vld1q_f64(zr + i);
    const float64x2_t b = vld1q_f64(zi + i);
    const float64x2_t c = vld1q_f64(xr + i);
    const float64x2_t d = vld1q_f64(xi + i);
    vst1q_f64(outr + i, vfmsq_f64(vmulq_f64(a, c), b, d));
    vst1q_f64(outi + i, vfmaq_f64(vmulq_f64(a, d), b, c));
  }
  for (; i < n; ++i) {
    const double re = zr[i] * xr[i] - zi[i] * xi[i];
    const double im = zr[i] * xi[i] + zi[i] * xr[i];
    outr[i] = re;
    outi[i] = im;
  }
}

void lincomb(std::size_t n, const double* y, std::size_t m, const double* c,
             const double* const* k, double* out) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    float64x2_t acc = y ? vld1q_f64(y + i) : vdupq_n_f64(0.0);
    for (std::size_t j = 0; j < m; ++j) acc = vfmaq_n_f64(acc, vld1q_f64(k[j] + i), c[j]);
    vst1q_f64(out + i, acc);
  }
  for (; i < n; ++i) {
    double acc = y ? y[i] : 0.0;
    for (std::size_t j = 0; j < m; ++j) acc += c[j] * k[j][i];
    out[i] = acc;
  }
}

double error_sq(std::size_t n, const double* err, const double* a, const double* b, double atol,
                double rtol) {
  float64x2_t sum = vdupq_n_f64(0.0);
  const float64x2_t va = vdupq_n_f64(atol);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t mx = vmaxq_f64(vabsq_f64(vld1q_f64(a + i)), vabsq_f64(vld1q_f64(b + i)));
    const float64x2_t sc = vfmaq_n_f64(va, mx, rtol);
    const float64x2_t r = vdivq_f64(vld1q_f64(err + i), sc);
    sum = vfmaq_f64(sum, r, r);
  }
  double total = vgetq_lane_f64(sum, 0) + vgetq_lane_f64(sum, 1);
  for (; i < n; ++i) {
    const double sc = atol + rtol * std::max(std::abs(a[i]), std::abs(b[i]));
    const double r = err[i] / sc;
    total += r * r;
  }
  return total;
}

}  // namespace

const Kernels* detail::neon_kernels() {
  static const Kernels k{Isa::neon, caxpy, cmul, lincomb, error_sq};
  return &k;
}

}  // namespace tpulse::simd

#else

namespace tpulse::simd {
const Kernels* detail::neon_kernels() { return nullptr; }
}  // namespace tpulse::simd

#endif
