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

#ifndef RXKIT_NUMERICS_HPP_
#define RXKIT_NUMERICS_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "rxkit/matrix.hpp"
#include "rxkit/rng.hpp"

namespace rxkit
{

/// Cholesky factor L of A + ridge*I (L lower triangular, positive diagonal).
/// Every inverse in the detectors is applied through this factor; no
/// explicit inverse is ever formed.
class SpdFactor
{
public:
  SpdFactor(Matrix lower, double ridge);

  std::size_t dim() const noexcept { return lower_.rows(); }
  const Matrix & lower() const noexcept { return lower_; }
  /// Ridge actually applied, after any retry.
  double ridge() const noexcept { return ridge_; }

  /// L * L^T, i.e. A + ridge*I.
  Matrix reconstruct() const;

  friend bool operator==(const SpdFactor &, const SpdFactor &) = default;

private:
  Matrix lower_;
  double ridge_;
};

/// Factorizes (A + A^T)/2 + ridge*I. A must be square and symmetric to
/// 1e-8 relative. If the factorization fails and ridge > 0, it is retried
/// once with 10*ridge; a second failure throws FactorizationError naming
/// the pivot.
SpdFactor spd_factorize(const Matrix & a, double ridge);

/// X with (A + ridge*I) X = B.
Matrix solve(const SpdFactor & factor, const Matrix & b);

/// Column-wise v^T (A + ridge*I)^{-1} v = |L^{-1} v|^2 for every column v of
/// `panel` (dim x k, row-major). The panel is overwritten with L^{-1} V.
std::vector<double> quadratic_forms(const SpdFactor & factor, Matrix & panel);

/// Entry (i, j) = |x_i - y_j|^2, never negative. Rows are computed
/// independently, so the result does not depend on the thread count.
Matrix pairwise_sq_dists(const Matrix & x, const Matrix & y);

inline constexpr std::size_t kDefaultMaxPairs = 1'000'000;

/// Median of the pairwise Euclidean distances |x_i - x_j|, i < j. Uses every
/// pair when there are at most max_pairs of them, otherwise max_pairs
/// distinct pairs drawn uniformly from `rng`. Throws DataError when the
/// median is zero (e.g. all points identical).
double median_lengthscale(const Matrix & x, std::size_t max_pairs, RngSpec rng);

/// rows x cols i.i.d. N(0, 1/scale^2) entries; entry k of the row-major
/// output is normal_at(rng, k) / scale.
Matrix gaussian_sample(RngSpec rng, std::size_t rows, std::size_t cols, double scale);

/// Kernel lengthscale: fixed, or factor * median heuristic.
struct LengthscaleSpec
{
  bool use_median = true;
  double value = 0.0;
  double factor = 1.0;
  std::size_t max_pairs = kDefaultMaxPairs;

  static LengthscaleSpec fixed(double sigma) { return {false, sigma, 1.0, kDefaultMaxPairs}; }
  static LengthscaleSpec median(double factor = 1.0) { return {true, 0.0, factor, kDefaultMaxPairs}; }

  double resolve(const Matrix & x, RngSpec rng) const;
};

/// a * a^T (symmetric), computed from row dot products.
Matrix row_gram(const Matrix & a);

/// Accumulates sum_i v_i v_i^T over a stream of dim-length rows. Rows are
/// buffered transposed in fixed-size blocks, so the resident state is
/// dim^2 + dim*block_rows values regardless of the number of rows added, and
/// the result depends only on the row sequence.
class OuterProductAccumulator
{
public:
  explicit OuterProductAccumulator(std::size_t dim, std::size_t block_rows = 256);

  void add(std::span<const double> row);
  /// Flushes the pending block and returns the symmetric sum.
  Matrix finish();

  std::size_t dim() const noexcept { return dim_; }
  std::size_t rows_added() const noexcept { return rows_added_; }
  std::size_t resident_values() const noexcept { return gram_.size() + block_.size(); }

private:
  void flush();

  std::size_t dim_;
  std::size_t block_rows_;
  std::size_t pending_ = 0;
  std::size_t rows_added_ = 0;
  Matrix gram_;
  Matrix block_;
};

}  // namespace rxkit

#endif  // RXKIT_NUMERICS_HPP_
