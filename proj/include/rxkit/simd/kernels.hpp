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

#ifndef RXKIT_SIMD_KERNELS_HPP_
#define RXKIT_SIMD_KERNELS_HPP_

#include <cstddef>
#include <string_view>

namespace rxkit::simd
{

enum class Isa { scalar, avx2 };

/// Inner loops shared by every detector. Each ISA provides one table; the
/// scalar table is the reference the vector variants are tested against.
///
/// All kernels are deterministic for a given table. `lower_solve_panel`
/// additionally treats every panel column independently: a column's result
/// does not depend on the panel width or on its position in the panel.
struct KernelTable
{
  Isa isa;
  std::string_view name;

  /// sum_i a[i] * b[i]
  double (*dot)(const double * a, const double * b, std::size_t n);

  /// sum_i (a[i] - b[i])^2
  double (*sq_dist)(const double * a, const double * b, std::size_t n);

  /// y[i] += alpha * x[i]
  void (*axpy)(double alpha, const double * x, double * y, std::size_t n);

  /// out[j] = sum_k (cols[k * ld + j] - x[k])^2 for j < m.
  /// `cols` holds m points stored band-major (d rows of stride ld).
  void (*sq_dist_to_columns)(
    const double * cols, std::size_t ld, std::size_t m, std::size_t d, const double * x,
    double * out);

  /// out[i] = exp(scale * in[i]). Results below the normal range flush to 0.
  void (*exp_scaled)(const double * in, double scale, double * out, std::size_t n);

  /// s[i] = sin(in[i]), c[i] = cos(in[i])
  void (*sincos)(const double * in, double * s, double * c, std::size_t n);

  /// Forward substitution L * Y = B for a panel of right-hand sides.
  /// L is m x m lower triangular with row stride ld; Y (m x width, row-major)
  /// holds B on entry and the solution on exit. norms[b] receives the squared
  /// 2-norm of solution column b.
  void (*lower_solve_panel)(
    const double * L, std::size_t ld, std::size_t m, double * Y, std::size_t width,
    double * norms);

  /// c[i * ldc + j] += alpha * sum_t a[i * lda + t] * b[j * ldb + t]
  /// for i < m, j < n. Each entry's value depends only on its own operands.
  void (*gemm_nt)(
    const double * a, std::size_t lda, const double * b, std::size_t ldb, std::size_t m,
    std::size_t n, std::size_t k, double alpha, double * c, std::size_t ldc);
};

const KernelTable & scalar_kernels();

/// nullptr when the binary was built without the AVX2 translation unit.
const KernelTable * avx2_kernels();

/// True when the running CPU supports the ISA (and it was compiled in).
bool isa_supported(Isa isa);

/// Table used by the library. Chosen once from CPU features; the
/// RXKIT_SIMD environment variable ("scalar" or "avx2") overrides the choice.
const KernelTable & active();

/// Overrides the active table (tests and benchmarks). Throws
/// std::invalid_argument if the ISA is not supported here.
void select(Isa isa);

/// Restores the previously active table on scope exit.
class ScopedIsa
{
public:
  explicit ScopedIsa(Isa isa);
  ~ScopedIsa();
  ScopedIsa(const ScopedIsa &) = delete;
  ScopedIsa & operator=(const ScopedIsa &) = delete;

private:
  const KernelTable * previous_;
};

}  // namespace rxkit::simd

#endif  // RXKIT_SIMD_KERNELS_HPP_
