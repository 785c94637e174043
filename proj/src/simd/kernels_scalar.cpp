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

#include <algorithm>
#include <cmath>

#include "tpulse/simd/kernels.hpp"

namespace tpulse::simd {
namespace {

void caxpy(std::size_t n, double ar, double ai, const double* xr, const double* xi, double* yr,
           double* yi) {
  for (std::size_t i = 0; i < n; ++i) {
    yr[i] += ar * xr[i] - ai * xi[i];
    yi[i] += ar * xi[i] + ai * xr[i];
  }
}

void cmul(std::size_t n, const double* zr, const double* zi, const double* xr, const double* xi,
          double* outr, double* outi) {
  for (std::size_t i = 0; i < n; ++i) {
    const double re = zr[i] * xr[i] - zi[i] * xi[i];
    const double im = zr[i] * xi[i] + zi[i] * xr[i];
    outr[i] = re;
    outi[i] = im;
  }
}

void lincomb(std::size_t n, const double* y, std::size_t m, const double* c,
             const double* const* k, double* out) {
  for (std::size_t i = 0; i < n; ++i) {
    double acc = y ? y[i] : 0.0;
    for (std::size_t j = 0; j < m; ++j) acc += c[j] * k[j][i];
    out[i] = acc;
  }
}

double error_sq(std::size_t n, const double* err, const double* a, const double* b, double atol,
                double rtol) {
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double sc = atol + rtol * std::max(std::abs(a[i]), std::abs(b[i]));
    const double r = err[i] / sc;
    sum += r * r;
  }
  return sum;
}

}  // namespace

const Kernels& scalar_kernels() {
  static const Kernels k{Isa::scalar, caxpy, cmul, lincomb, error_sq};
  return k;
}

}  // namespace tpulse::simd
