// Copyright 2026 The rxkit Authors
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
#include <cstddef>

#include "rxkit/simd/kernels.hpp"

namespace rxkit::simd
{
namespace
{

// Shared with the vector variants: arguments below this flush to zero.
constexpr double kExpFlushBelow = -708.0;

double dot(const double * a, const double * b, std::size_t n)
{
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    acc += a[i] * b[i];
  }
  return acc;
}

double sq_dist(const double * a, const double * b, std::size_t n)
{
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double diff = a[i] - b[i];
    acc += diff * diff;
  }
  return acc;
}

void axpy(double alpha, const double * x, double * y, std::size_t n)
{
  for (std::size_t i = 0; i < n; ++i) {
    y[i] += alpha * x[i];
  }
}

void sq_dist_to_columns(
  const double * cols, std::size_t ld, std::size_t m, std::size_t d, const double * x,
  double * out)
{
  for (std::size_t j = 0; j < m; ++j) {
    out[j] = 0.0;
  }
  for (std::size_t k = 0; k < d; ++k) {
    const double * band = cols + k * ld;
    const double xk = x[k];
    for (std::size_t j = 0; j < m; ++j) {
      const double diff = band[j] - xk;
      out[j] += diff * diff;
    }
  }
}

void exp_scaled(const double * in, double scale, double * out, std::size_t n)
{
  for (std::size_t i = 0; i < n; ++i) {
    const double x = scale * in[i];
    out[i] = x < kExpFlushBelow ? 0.0 : std::exp(x);
  }
}

void sincos(const double * in, double * s, double * c, std::size_t n)
{
  for (std::size_t i = 0; i < n; ++i) {
    s[i] = std::sin(in[i]);
    c[i] = std::cos(in[i]);
  }
}

void lower_solve_panel(
  const double * L, std::size_t ld, std::size_t m, double * Y, std::size_t width,
  double * norms)
{
  for (std::size_t b = 0; b < width; ++b) {
    norms[b] = 0.0;
  }
  for (std::size_t i = 0; i < m; ++i) {
    const double * li = L + i * ld;
    double * yi = Y + i * width;
    for (std::size_t j = 0; j < i; ++j) {
      const double lij = li[j];
      const double * yj = Y + j * width;
      for (std::size_t b = 0; b < width; ++b) {
        yi[b] -= lij * yj[b];
      }
    }
    const double diag = li[i];
    for (std::size_t b = 0; b < width; ++b) {
      yi[b] /= diag;
      norms[b] += yi[b] * yi[b];
    }
  }
}

void gemm_nt(
  const double * a, std::size_t lda, const double * b, std::size_t ldb, std::size_t m,
  std::size_t n, std::size_t k, double alpha, double * c, std::size_t ldc)
{
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      c[i * ldc + j] += alpha * dot(a + i * lda, b + j * ldb, k);
    }
  }
}

}  // namespace

const KernelTable & scalar_kernels()
{
  static const KernelTable table{
    Isa::scalar, "scalar", &dot, &sq_dist, &axpy, &sq_dist_to_columns, &exp_scaled, &sincos,
    &lower_solve_panel, &gemm_nt};
  return table;
}

}  // namespace rxkit::simd
