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

// Built with -mavx2 -mfma; only reached after a runtime CPU check.

#include "tpulse/simd/kernels.hpp"

#if defined(__AVX2__) && defined(__FMA__)

#include <immintrin.h>

#include <algorithm>
#include <cmath>

namespace tpulse::simd {
namespace {

void caxpy(std::size_t n, double ar, double ai, const double* xr, const double* xi, double* yr,
           double* yi) {
  const __m256d vr = _mm256_set1_pd(ar);
  const __m256d vi = _mm256_set1_pd(ai);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d a = _mm256_loadu_pd(xr + i);
    const __m256d b = _mm256_loadu_pd(xi + i);
    __m256d r = _mm256_loadu_pd(yr + i);
    __m256d m = _mm256_loadu_pd(yi + i);
    r = _mm256_fmadd_pd(vr, a, r);
    r = _mm256_fnmadd_pd(vi, b, r);
    m = _mm256_fmadd_pd(vr, b, m);
    m = _mm256_fmadd_pd(vi, a, m);
    _mm256_storeu_pd(yr + i, r);
    _mm256_storeu_pd(yi + i, m);
  }
  for (; i < n; ++i) {
    yr[i] += ar * xr[i] - ai * xi[i];
    yi[i] += ar * xi[i] + ai * xr[i];
  }
}

void cmul(std::size_t n, const double* zr, const double* zi, const double* xr, const double* xi,
          double* outr, double* outi) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d a = _mm256_loadu_pd(zr + i);
    const __m256d b = _mm256_loadu_pd(zi + i);
    const __m256d c = _mm256_loadu_pd(xr + i);
    const __m256d d = _mm256_loadu_pd(xi + i);
    const __m256d re = _mm256_fmsub_pd(a, c, _mm256_mul_pd(b, d));
    const __m256d im = _mm256_fmadd_pd(a, d, _mm256_mul_pd(b, c));
    _mm256_storeu_pd(outr + i, re);
    _mm256_storeu_pd(outi + i, im);
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
  for (; i + 4 <= n; i += 4) {
    __m256d acc = y ? _mm256_loadu_pd(y + i) : _mm256_setzero_pd();
    for (std::size_t j = 0; j < m; ++j) {
      acc = _mm256_fmadd_pd(_mm256_set1_pd(c[j]), _mm256_loadu_pd(k[j] + i), acc);
    }
    _mm256_storeu_pd(out + i, acc);
  }
  for (; i < n; ++i) {
    double acc = y ? y[i] : 0.0;
    for (std::size_t j = 0; j < m; ++j) acc += c[j] * k[j][i];
    out[i] = acc;
  }
}

double error_sq(std::size_t n, const double* err, const double* a, const double* b, double atol,
                double rtol) {
  const __m256d sign = _mm256_set1_pd(-0.0);
  const __m256d va = _mm256_set1_pd(atol);
  const __m256d vr = _mm256_set1_pd(rtol);
  __m256d sum = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d x = _mm256_andnot_pd(sign, _mm256_loadu_pd(a + i));
    const __m256d z = _mm256_andnot_pd(sign, _mm256_loadu_pd(b + i));
    const __m256d sc = _mm256_fmadd_pd(vr, _mm256_max_pd(x, z), va);
    const __m256d r = _mm256_div_pd(_mm256_loadu_pd(err + i), sc);
    sum = _mm256_fmadd_pd(r, r, sum);
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, sum);
  double total = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
  for (; i < n; ++i) {
    const double sc = atol + rtol * std::max(std::abs(a[i]), std::abs(b[i]));
    const double r = err[i] / sc;
    total += r * r;
  }
  return total;
}

}  // namespace

const Kernels* detail::avx2_kernels() {
  static const Kernels k{Isa::avx2, caxpy, cmul, lincomb, error_sq};
  return &k;
}

}  // namespace tpulse::simd

#else

namespace tpulse::simd {
const Kernels* detail::avx2_kernels() { return nullptr; }
}  // namespace tpulse::simd

#endif
