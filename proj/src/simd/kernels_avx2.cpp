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

// Compiled with -mavx2 -mfma. Only reached after a runtime CPU check.

#include <immintrin.h>

#include <cmath>
#include <cstddef>
#include <cstdint>

#include "rxkit/simd/kernels.hpp"

namespace rxkit::simd
{
namespace
{

constexpr double kExpFlushBelow = -708.0;
constexpr double kExpFastAbove = 709.0;
constexpr double kSinCosFastBelow = 1e5;

inline double hsum(__m256d v)
{
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

double dot(const double * a, const double * b, std::size_t n)
{
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  __m256d acc2 = _mm256_setzero_pd();
  __m256d acc3 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 16 <= n; i += 16) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
    acc2 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 8), _mm256_loadu_pd(b + i + 8), acc2);
    acc3 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 12), _mm256_loadu_pd(b + i + 12), acc3);
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
  }
  double acc = hsum(_mm256_add_pd(_mm256_add_pd(acc0, acc1), _mm256_add_pd(acc2, acc3)));
  for (; i < n; ++i) {
    acc = std::fma(a[i], b[i], acc);
  }
  return acc;
}

double sq_dist(const double * a, const double * b, std::size_t n)
{
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256d d0 = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    const __m256d d1 = _mm256_sub_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4));
    acc0 = _mm256_fmadd_pd(d0, d0, acc0);
    acc1 = _mm256_fmadd_pd(d1, d1, acc1);
  }
  for (; i + 4 <= n; i += 4) {
    const __m256d d0 = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    acc0 = _mm256_fmadd_pd(d0, d0, acc0);
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) {
    const double diff = a[i] - b[i];
    acc = std::fma(diff, diff, acc);
  }
  return acc;
}

void axpy(double alpha, const double * x, double * y, std::size_t n)
{
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  }
  for (; i < n; ++i) {
    y[i] = std::fma(alpha, x[i], y[i]);
  }
}

void sq_dist_to_columns(
  const double * cols, std::size_t ld, std::size_t m, std::size_t d, const double * x,
  double * out)
{
  std::size_t j = 0;
  for (; j + 4 <= m; j += 4) {
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t k = 0; k < d; ++k) {
      const __m256d diff = _mm256_sub_pd(_mm256_loadu_pd(cols + k * ld + j), _mm256_set1_pd(x[k]));
      acc = _mm256_fmadd_pd(diff, diff, acc);
    }
    _mm256_storeu_pd(out + j, acc);
  }
  for (; j < m; ++j) {
    double acc = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
      const double diff = cols[k * ld + j] - x[k];
      acc = std::fma(diff, diff, acc);
    }
    out[j] = acc;
  }
}

// exp on [kExpFlushBelow, kExpFastAbove]: x = n ln2 + r, |r| <= ln2/2, degree-13
// Taylor polynomial for e^r, then 2^n applied to the exponent bits.
inline __m256d exp_core(__m256d x)
{
  const __m256d log2e = _mm256_set1_pd(1.4426950408889634);
  const __m256d ln2_hi = _mm256_set1_pd(6.93147180369123816490e-01);
  const __m256d ln2_lo = _mm256_set1_pd(1.90821492927058770002e-10);
  const __m256d n = _mm256_round_pd(
    _mm256_mul_pd(x, log2e), _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_fnmadd_pd(n, ln2_hi, x);
  r = _mm256_fnmadd_pd(n, ln2_lo, r);

  static constexpr double kInvFact[] = {
    1.0 / 6227020800.0, 1.0 / 479001600.0, 1.0 / 39916800.0, 1.0 / 3628800.0,
    1.0 / 362880.0,     1.0 / 40320.0,     1.0 / 5040.0,      1.0 / 720.0,
    1.0 / 120.0,        1.0 / 24.0,        1.0 / 6.0,         0.5,
    1.0,                1.0};
  __m256d p = _mm256_set1_pd(kInvFact[0]);
  for (std::size_t k = 1; k < sizeof(kInvFact) / sizeof(kInvFact[0]); ++k) {
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(kInvFact[k]));
  }

  // Integer n sits in the low mantissa bits after adding 1.5 * 2^52; shifting
  // by 52 moves it into the exponent field (wrapping handles negative n).
  const __m256d magic = _mm256_set1_pd(6755399441055744.0);
  const __m256i n_bits = _mm256_slli_epi64(_mm256_castpd_si256(_mm256_add_pd(n, magic)), 52);
  return _mm256_castsi256_pd(_mm256_add_epi64(_mm256_castpd_si256(p), n_bits));
}

void exp_scaled(const double * in, double scale, double * out, std::size_t n)
{
  const __m256d vscale = _mm256_set1_pd(scale);
  const __m256d lo = _mm256_set1_pd(kExpFlushBelow);
  const __m256d hi = _mm256_set1_pd(kExpFastAbove);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d x = _mm256_mul_pd(vscale, _mm256_loadu_pd(in + i));
    // NaN compares false on both sides and takes the slow path.
    const __m256d in_range = _mm256_and_pd(
      _mm256_cmp_pd(x, lo, _CMP_GE_OQ), _mm256_cmp_pd(x, hi, _CMP_LE_OQ));
    const __m256d flush = _mm256_cmp_pd(x, lo, _CMP_LT_OQ);
    if (_mm256_movemask_pd(_mm256_or_pd(in_range, flush)) != 0xF) {
      for (std::size_t k = 0; k < 4; ++k) {
        const double xs = scale * in[i + k];
        out[i + k] = xs < kExpFlushBelow ? 0.0 : std::exp(xs);
      }
      continue;
    }
    const __m256d clamped = _mm256_max_pd(x, lo);
    _mm256_storeu_pd(out + i, _mm256_andnot_pd(flush, exp_core(clamped)));
  }
  for (; i < n; ++i) {
    const double xs = scale * in[i];
    if (xs < kExpFlushBelow) {
      out[i] = 0.0;
    } else if (xs <= kExpFastAbove) {
      double lane[4] = {xs, xs, xs, xs};
      _mm256_storeu_pd(lane, exp_core(_mm256_loadu_pd(lane)));
      out[i] = lane[0];
    } else {
      out[i] = std::exp(xs);
    }
  }
}

// sin and cos of |x| < kSinCosFastBelow. Reduction x = q pi/2 + r with pi/2
// split over three doubles, then minimax kernels on |r| <= pi/4.
inline void sincos_core(__m256d x, __m256d & s_out, __m256d & c_out)
{
  const __m256d two_over_pi = _mm256_set1_pd(0.6366197723675814);
  const __m256d q = _mm256_round_pd(
    _mm256_mul_pd(x, two_over_pi), _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_fnmadd_pd(q, _mm256_set1_pd(1.5707963267948966), x);
  r = _mm256_fnmadd_pd(q, _mm256_set1_pd(6.123233995736766e-17), r);
  r = _mm256_fnmadd_pd(q, _mm256_set1_pd(-1.4973849048591698e-33), r);
  const __m256d z = _mm256_mul_pd(r, r);

  __m256d ps = _mm256_set1_pd(1.58969099521155010221e-10);
  ps = _mm256_fmadd_pd(ps, z, _mm256_set1_pd(-2.50507602534068634195e-08));
  ps = _mm256_fmadd_pd(ps, z, _mm256_set1_pd(2.75573137070700676789e-06));
  ps = _mm256_fmadd_pd(ps, z, _mm256_set1_pd(-1.98412698298579493134e-04));
  ps = _mm256_fmadd_pd(ps, z, _mm256_set1_pd(8.33333333332248946124e-03));
  ps = _mm256_fmadd_pd(ps, z, _mm256_set1_pd(-1.66666666666666324348e-01));
  const __m256d sin_r = _mm256_fmadd_pd(_mm256_mul_pd(ps, z), r, r);

  __m256d pc = _mm256_set1_pd(-1.13596475577881948265e-11);
  pc = _mm256_fmadd_pd(pc, z, _mm256_set1_pd(2.08757232129817482790e-09));
  pc = _mm256_fmadd_pd(pc, z, _mm256_set1_pd(-2.75573143513906633035e-07));
  pc = _mm256_fmadd_pd(pc, z, _mm256_set1_pd(2.48015872894767294178e-05));
  pc = _mm256_fmadd_pd(pc, z, _mm256_set1_pd(-1.38888888888741095749e-03));
  pc = _mm256_fmadd_pd(pc, z, _mm256_set1_pd(4.16666666666666019037e-02));
  const __m256d cos_r = _mm256_fmadd_pd(
    _mm256_mul_pd(z, z), pc, _mm256_fnmadd_pd(_mm256_set1_pd(0.5), z, _mm256_set1_pd(1.0)));

  const __m256d magic = _mm256_set1_pd(6755399441055744.0);
  const __m256i qi = _mm256_castpd_si256(_mm256_add_pd(q, magic));
  const __m256i one = _mm256_set1_epi64x(1);
  const __m256i two = _mm256_set1_epi64x(2);
  const __m256d swap = _mm256_castsi256_pd(_mm256_cmpeq_epi64(_mm256_and_si256(qi, one), one));
  const __m256d sin_sign = _mm256_castsi256_pd(_mm256_slli_epi64(_mm256_and_si256(qi, two), 62));
  const __m256d cos_sign = _mm256_castsi256_pd(
    _mm256_slli_epi64(_mm256_and_si256(_mm256_add_epi64(qi, one), two), 62));

  s_out = _mm256_xor_pd(_mm256_blendv_pd(sin_r, cos_r, swap), sin_sign);
  c_out = _mm256_xor_pd(_mm256_blendv_pd(cos_r, sin_r, swap), cos_sign);
}

void sincos(const double * in, double * s, double * c, std::size_t n)
{
  const __m256d sign_mask = _mm256_set1_pd(-0.0);
  const __m256d limit = _mm256_set1_pd(kSinCosFastBelow);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d x = _mm256_loadu_pd(in + i);
    const __m256d ok = _mm256_cmp_pd(_mm256_andnot_pd(sign_mask, x), limit, _CMP_LT_OQ);
    if (_mm256_movemask_pd(ok) != 0xF) {
      for (std::size_t k = 0; k < 4; ++k) {
        s[i + k] = std::sin(in[i + k]);
        c[i + k] = std::cos(in[i + k]);
      }
      continue;
    }
    __m256d vs;
    __m256d vc;
    sincos_core(x, vs, vc);
    _mm256_storeu_pd(s + i, vs);
    _mm256_storeu_pd(c + i, vc);
  }
  for (; i < n; ++i) {
    if (std::abs(in[i]) < kSinCosFastBelow) {
      double lane[4] = {in[i], in[i], in[i], in[i]};
      __m256d vs;
      __m256d vc;
      sincos_core(_mm256_loadu_pd(lane), vs, vc);
      double ls[4];
      double lc[4];
      _mm256_storeu_pd(ls, vs);
      _mm256_storeu_pd(lc, vc);
      s[i] = ls[0];
      c[i] = lc[0];
    } else {
      s[i] = std::sin(in[i]);
      c[i] = std::cos(in[i]);
    }
  }
}

// Column arithmetic is acc = fma(-L_ij, y_j, acc) over ascending j, then a
// division by L_ii and norm = fma(y, y, norm), whichever path a column takes.
template <std::size_t Regs>
inline void solve_columns(
  const double * L, std::size_t ld, std::size_t m, double * Y, std::size_t width, std::size_t c0,
  double * norms)
{
  __m256d norm[Regs];
  for (std::size_t r = 0; r < Regs; ++r) {
    norm[r] = _mm256_setzero_pd();
  }
  for (std::size_t i = 0; i < m; ++i) {
    const double * li = L + i * ld;
    double * yi = Y + i * width + c0;
    __m256d acc[Regs];
    for (std::size_t r = 0; r < Regs; ++r) {
      acc[r] = _mm256_loadu_pd(yi + 4 * r);
    }
    for (std::size_t j = 0; j < i; ++j) {
      const __m256d lij = _mm256_set1_pd(li[j]);
      const double * yj = Y + j * width + c0;
      for (std::size_t r = 0; r < Regs; ++r) {
        acc[r] = _mm256_fnmadd_pd(lij, _mm256_loadu_pd(yj + 4 * r), acc[r]);
      }
    }
    const __m256d diag = _mm256_set1_pd(li[i]);
    for (std::size_t r = 0; r < Regs; ++r) {
      acc[r] = _mm256_div_pd(acc[r], diag);
      _mm256_storeu_pd(yi + 4 * r, acc[r]);
      norm[r] = _mm256_fmadd_pd(acc[r], acc[r], norm[r]);
    }
  }
  for (std::size_t r = 0; r < Regs; ++r) {
    _mm256_storeu_pd(norms + c0 + 4 * r, norm[r]);
  }
}

void lower_solve_panel(
  const double * L, std::size_t ld, std::size_t m, double * Y, std::size_t width,
  double * norms)
{
  std::size_t c0 = 0;
  for (; c0 + 32 <= width; c0 += 32) {
    solve_columns<8>(L, ld, m, Y, width, c0, norms);
  }
  for (; c0 + 4 <= width; c0 += 4) {
    solve_columns<1>(L, ld, m, Y, width, c0, norms);
  }
  for (; c0 < width; ++c0) {
    double norm = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double * li = L + i * ld;
      double acc = Y[i * width + c0];
      for (std::size_t j = 0; j < i; ++j) {
        acc = std::fma(-li[j], Y[j * width + c0], acc);
      }
      acc /= li[i];
      Y[i * width + c0] = acc;
      norm = std::fma(acc, acc, norm);
    }
    norms[c0] = norm;
  }
}

// 2 x 4 register tile. Every entry, tiled or not, is four lane sums over
// t = 0 mod 4 .. 3 mod 4, reduced by hsum, then a scalar fma tail.
void gemm_nt(
  const double * a, std::size_t lda, const double * b, std::size_t ldb, std::size_t m,
  std::size_t n, std::size_t k, double alpha, double * c, std::size_t ldc)
{
  const std::size_t k4 = k - k % 4;
  auto tail = [&](const double * ai, const double * bj, double acc) {
    for (std::size_t t = k4; t < k; ++t) {
      acc = std::fma(ai[t], bj[t], acc);
    }
    return acc;
  };
  auto single = [&](std::size_t i, std::size_t j) {
    const double * ai = a + i * lda;
    const double * bj = b + j * ldb;
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t t = 0; t < k4; t += 4) {
      acc = _mm256_fmadd_pd(_mm256_loadu_pd(ai + t), _mm256_loadu_pd(bj + t), acc);
    }
    c[i * ldc + j] += alpha * tail(ai, bj, hsum(acc));
  };

  std::size_t i = 0;
  for (; i + 2 <= m; i += 2) {
    const double * a0 = a + i * lda;
    const double * a1 = a0 + lda;
    std::size_t j = 0;
    for (; j + 4 <= n; j += 4) {
      const double * b0 = b + j * ldb;
      const double * b1 = b0 + ldb;
      const double * b2 = b1 + ldb;
      const double * b3 = b2 + ldb;
      __m256d c00 = _mm256_setzero_pd();
      __m256d c01 = _mm256_setzero_pd();
      __m256d c02 = _mm256_setzero_pd();
      __m256d c03 = _mm256_setzero_pd();
      __m256d c10 = _mm256_setzero_pd();
      __m256d c11 = _mm256_setzero_pd();
      __m256d c12 = _mm256_setzero_pd();
      __m256d c13 = _mm256_setzero_pd();
      for (std::size_t t = 0; t < k4; t += 4) {
        const __m256d x0 = _mm256_loadu_pd(a0 + t);
        const __m256d x1 = _mm256_loadu_pd(a1 + t);
        __m256d y = _mm256_loadu_pd(b0 + t);
        c00 = _mm256_fmadd_pd(x0, y, c00);
        c10 = _mm256_fmadd_pd(x1, y, c10);
        y = _mm256_loadu_pd(b1 + t);
        c01 = _mm256_fmadd_pd(x0, y, c01);
        c11 = _mm256_fmadd_pd(x1, y, c11);
        y = _mm256_loadu_pd(b2 + t);
        c02 = _mm256_fmadd_pd(x0, y, c02);
        c12 = _mm256_fmadd_pd(x1, y, c12);
        y = _mm256_loadu_pd(b3 + t);
        c03 = _mm256_fmadd_pd(x0, y, c03);
        c13 = _mm256_fmadd_pd(x1, y, c13);
      }
      double * r0 = c + i * ldc + j;
      double * r1 = r0 + ldc;
      r0[0] += alpha * tail(a0, b0, hsum(c00));
      r0[1] += alpha * tail(a0, b1, hsum(c01));
      r0[2] += alpha * tail(a0, b2, hsum(c02));
      r0[3] += alpha * tail(a0, b3, hsum(c03));
      r1[0] += alpha * tail(a1, b0, hsum(c10));
      r1[1] += alpha * tail(a1, b1, hsum(c11));
      r1[2] += alpha * tail(a1, b2, hsum(c12));
      r1[3] += alpha * tail(a1, b3, hsum(c13));
    }
    for (; j < n; ++j) {
      single(i, j);
      single(i + 1, j);
    }
  }
  for (; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      single(i, j);
    }
  }
}

}  // namespace

const KernelTable * avx2_kernels()
{
  static const KernelTable table{
    Isa::avx2, "avx2", &dot, &sq_dist, &axpy, &sq_dist_to_columns, &exp_scaled, &sincos,
    &lower_solve_panel, &gemm_nt};
  return &table;
}

}  // namespace rxkit::simd
