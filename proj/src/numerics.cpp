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

#include "rxkit/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>

#include "rxkit/error.hpp"
#include "rxkit/parallel.hpp"
#include "rxkit/simd/kernels.hpp"

namespace rxkit
{

SpdFactor::SpdFactor(Matrix lower, double ridge) : lower_(std::move(lower)), ridge_(ridge)
{
  if (lower_.rows() != lower_.cols()) {
    throw DimensionError("SpdFactor: factor must be square");
  }
}

Matrix SpdFactor::reconstruct() const
{
  const std::size_t m = dim();
  const auto & k = simd::active();
  Matrix out(m, m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      const double v = k.dot(lower_.row(i).data(), lower_.row(j).data(), j + 1);
      out(i, j) = v;
      out(j, i) = v;
    }
  }
  return out;
}

namespace
{

struct PivotFailure
{
  std::size_t index;
  double value;
};

constexpr std::size_t kBlock = 64;

// c[i * ldc + j] += alpha * <x_i, x_j> for j <= i < count, where x_i starts
// at x + i * ldx and has len entries. Tiled in kBlock x kBlock pieces.
void syrk_lower(
  const simd::KernelTable & k, const double * x, std::size_t ldx, std::size_t count,
  std::size_t len, double alpha, double * c, std::size_t ldc)
{
  const std::size_t tiles = (count + kBlock - 1) / kBlock;
  parallel_for(tiles, 1, [&](std::size_t t_begin, std::size_t t_end) {
    for (std::size_t ti = t_begin; ti < t_end; ++ti) {
      const std::size_t i0 = ti * kBlock;
      const std::size_t i1 = std::min(count, i0 + kBlock);
      for (std::size_t j0 = 0; j0 < i0; j0 += kBlock) {
        k.gemm_nt(
          x + i0 * ldx, ldx, x + j0 * ldx, ldx, i1 - i0, kBlock, len, alpha, c + i0 * ldc + j0,
          ldc);
      }
      for (std::size_t i = i0; i < i1; ++i) {
        k.gemm_nt(x + i * ldx, ldx, x + i0 * ldx, ldx, 1, i - i0 + 1, len, alpha, c + i * ldc + i0, ldc);
      }
    }
  });
}

// Blocked right-looking Cholesky on the lower triangle of A + ridge*I,
// computed in place in `w`. Every entry is finished by a single worker, so
// the factor does not depend on the thread count.
std::optional<PivotFailure> cholesky_lower(const Matrix & a, double ridge, Matrix & w)
{
  const std::size_t m = a.rows();
  const auto & k = simd::active();
  std::fill(w.values().begin(), w.values().end(), 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      w(i, j) = a(i, j);
    }
    w(i, i) += ridge;
  }

  for (std::size_t k0 = 0; k0 < m; k0 += kBlock) {
    const std::size_t k1 = std::min(m, k0 + kBlock);
    // Diagonal block.
    for (std::size_t i = k0; i < k1; ++i) {
      double * wi = w.row(i).data();
      for (std::size_t j = k0; j < i; ++j) {
        const double * wj = w.row(j).data();
        wi[j] = (wi[j] - k.dot(wi + k0, wj + k0, j - k0)) / wj[j];
      }
      const double pivot = wi[i] - k.dot(wi + k0, wi + k0, i - k0);
      if (!(pivot > 0.0) || !std::isfinite(pivot)) {
        return PivotFailure{i, pivot};
      }
      wi[i] = std::sqrt(pivot);
    }
    if (k1 == m) {
      break;
    }
    // Panel below the diagonal block.
    parallel_for(m - k1, 32, [&](std::size_t begin, std::size_t end) {
      for (std::size_t i = k1 + begin; i < k1 + end; ++i) {
        double * wi = w.row(i).data();
        for (std::size_t j = k0; j < k1; ++j) {
          const double * wj = w.row(j).data();
          wi[j] = (wi[j] - k.dot(wi + k0, wj + k0, j - k0)) / wj[j];
        }
      }
    });
    // Trailing update.
    syrk_lower(k, &w(k1, k0), m, m - k1, k1 - k0, -1.0, &w(k1, k1), m);
  }
  return std::nullopt;
}

}  // namespace

SpdFactor spd_factorize(const Matrix & a, double ridge)
{
  if (a.rows() != a.cols()) {
    throw DimensionError("spd_factorize: matrix is not square");
  }
  if (!(ridge >= 0.0) || !std::isfinite(ridge)) {
    throw std::invalid_argument("spd_factorize: ridge must be finite and >= 0");
  }
  const std::size_t m = a.rows();
  double scale = 1.0;
  for (const double v : a.values()) {
    scale = std::max(scale, std::abs(v));
  }
  Matrix sym(m, m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      if (std::abs(a(i, j) - a(j, i)) > 1e-8 * scale) {
        throw std::invalid_argument(
          "spd_factorize: matrix is not symmetric at (" + std::to_string(i) + "," +
          std::to_string(j) + ")");
      }
      sym(i, j) = 0.5 * (a(i, j) + a(j, i));
    }
  }

  Matrix lower(m, m);
  auto failure = cholesky_lower(sym, ridge, lower);
  if (failure && ridge > 0.0) {
    ridge *= 10.0;
    failure = cholesky_lower(sym, ridge, lower);
  }
  if (failure) {
    throw FactorizationError(failure->index, failure->value);
  }
  return SpdFactor(std::move(lower), ridge);
}

Matrix solve(const SpdFactor & factor, const Matrix & b)
{
  const std::size_t m = factor.dim();
  if (b.rows() != m) {
    throw DimensionError(
      "solve: right-hand side has " + std::to_string(b.rows()) + " rows, factor is " +
      std::to_string(m));
  }
  const Matrix & L = factor.lower();
  const std::size_t k = b.cols();
  Matrix x = b;
  // Forward: L y = b.
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      const double lij = L(i, j);
      for (std::size_t c = 0; c < k; ++c) {
        x(i, c) -= lij * x(j, c);
      }
    }
    for (std::size_t c = 0; c < k; ++c) {
      x(i, c) /= L(i, i);
    }
  }
  // Backward: L^T x = y.
  for (std::size_t ii = m; ii-- > 0;) {
    for (std::size_t j = ii + 1; j < m; ++j) {
      const double lji = L(j, ii);
      for (std::size_t c = 0; c < k; ++c) {
        x(ii, c) -= lji * x(j, c);
      }
    }
    for (std::size_t c = 0; c < k; ++c) {
      x(ii, c) /= L(ii, ii);
    }
  }
  return x;
}

std::vector<double> quadratic_forms(const SpdFactor & factor, Matrix & panel)
{
  if (panel.rows() != factor.dim()) {
    throw DimensionError("quadratic_forms: panel rows do not match factor dimension");
  }
  std::vector<double> norms(panel.cols());
  if (panel.cols() > 0) {
    simd::active().lower_solve_panel(
      factor.lower().data(), factor.dim(), factor.dim(), panel.data(), panel.cols(), norms.data());
  }
  return norms;
}

Matrix pairwise_sq_dists(const Matrix & x, const Matrix & y)
{
  if (x.cols() != y.cols()) {
    throw DimensionError("pairwise_sq_dists: band counts differ");
  }
  const Matrix yt = y.transposed();
  Matrix out(x.rows(), y.rows());
  const auto & k = simd::active();
  parallel_for(x.rows(), 64, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      double * row = out.row(i).data();
      k.sq_dist_to_columns(yt.data(), y.rows(), y.rows(), x.cols(), x.row(i).data(), row);
      for (std::size_t j = 0; j < y.rows(); ++j) {
        row[j] = std::max(row[j], 0.0);
      }
    }
  });
  return out;
}

namespace
{

// Number of pairs (a, b), a < b, whose first index is below i.
std::uint64_t pairs_before(std::uint64_t i, std::uint64_t n) { return i * n - i * (i + 1) / 2; }

std::pair<std::size_t, std::size_t> pair_from_index(std::uint64_t p, std::uint64_t n)
{
  std::uint64_t lo = 0;
  std::uint64_t hi = n - 1;
  while (hi - lo > 1) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    if (pairs_before(mid, n) <= p) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const std::uint64_t j = lo + 1 + (p - pairs_before(lo, n));
  return {static_cast<std::size_t>(lo), static_cast<std::size_t>(j)};
}

double median_in_place(std::vector<double> & v)
{
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  const double upper = v[mid];
  if (v.size() % 2 == 1) {
    return upper;
  }
  const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

}  // namespace

double median_lengthscale(const Matrix & x, std::size_t max_pairs, RngSpec rng)
{
  const std::uint64_t n = x.rows();
  if (n < 2) {
    throw std::invalid_argument("median_lengthscale: need at least two points");
  }
  if (max_pairs == 0) {
    throw std::invalid_argument("median_lengthscale: max_pairs must be positive");
  }
  const auto & k = simd::active();
  const std::size_t d = x.cols();
  const std::uint64_t total = n * (n - 1) / 2;
  std::vector<double> dists;

  if (total <= max_pairs) {
    dists.reserve(static_cast<std::size_t>(total));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        dists.push_back(std::sqrt(k.sq_dist(x.row(i).data(), x.row(j).data(), d)));
      }
    }
  } else {
    // Uniform subset of max_pairs distinct pair indices. Dense index spaces
    // use rejection against a bitmap; sparse ones draw, sort and drop
    // repeats until enough remain. Both procedures are symmetric in the
    // index space.
    Rng gen(rng);
    std::vector<std::uint64_t> picks;
    picks.reserve(max_pairs);
    if (total / 64 <= max_pairs) {
      std::vector<std::uint64_t> taken((total + 63) / 64, 0);
      while (picks.size() < max_pairs) {
        const std::uint64_t t = gen.uniform_index(total);
        std::uint64_t & word = taken[t / 64];
        const std::uint64_t bit = std::uint64_t{1} << (t % 64);
        if ((word & bit) == 0) {
          word |= bit;
          picks.push_back(t);
        }
      }
    } else {
      while (picks.size() < max_pairs) {
        const std::size_t have = picks.size();
        for (std::size_t t = have; t < max_pairs; ++t) {
          picks.push_back(gen.uniform_index(total));
        }
        const auto mid = picks.begin() + static_cast<std::ptrdiff_t>(have);
        std::sort(mid, picks.end());
        std::inplace_merge(picks.begin(), mid, picks.end());
        picks.erase(std::unique(picks.begin(), picks.end()), picks.end());
      }
    }
    dists.reserve(picks.size());
    for (const auto p : picks) {
      const auto [a, b] = pair_from_index(p, n);
      dists.push_back(std::sqrt(k.sq_dist(x.row(a).data(), x.row(b).data(), d)));
    }
  }

  const double sigma = median_in_place(dists);
  if (!(sigma > 0.0)) {
    throw DataError(
      "median_lengthscale: median pairwise distance is zero (degenerate data); "
      "supply an explicit lengthscale");
  }
  return sigma;
}

Matrix gaussian_sample(RngSpec rng, std::size_t rows, std::size_t cols, double scale)
{
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw std::invalid_argument("gaussian_sample: scale must be positive");
  }
  Matrix out(rows, cols);
  auto values = out.values();
  for (std::size_t i = 0; i < values.size(); ++i) {
    values[i] = normal_at(rng, i) / scale;
  }
  return out;
}

double LengthscaleSpec::resolve(const Matrix & x, RngSpec rng) const
{
  if (!(factor > 0.0)) {
    throw std::invalid_argument("lengthscale factor must be positive");
  }
  if (!use_median) {
    if (!(value > 0.0) || !std::isfinite(value)) {
      throw std::invalid_argument("lengthscale must be positive");
    }
    return factor * value;
  }
  return factor * median_lengthscale(x, max_pairs, rng);
}

Matrix row_gram(const Matrix & a)
{
  const std::size_t m = a.rows();
  Matrix out(m, m);
  // Column chunks keep a tile pair's operands in cache.
  constexpr std::size_t kChunk = 256;
  for (std::size_t t0 = 0; t0 < a.cols(); t0 += kChunk) {
    syrk_lower(
      simd::active(), a.data() + t0, a.cols(), m, std::min(kChunk, a.cols() - t0), 1.0,
      out.data(), m);
  }
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      out(j, i) = out(i, j);
    }
  }
  return out;
}

OuterProductAccumulator::OuterProductAccumulator(std::size_t dim, std::size_t block_rows)
: dim_(dim), block_rows_(std::max<std::size_t>(1, block_rows)), gram_(dim, dim), block_(dim, block_rows_)
{
  if (dim == 0) {
    throw std::invalid_argument("OuterProductAccumulator: dimension must be positive");
  }
}

void OuterProductAccumulator::add(std::span<const double> row)
{
  if (row.size() != dim_) {
    throw DimensionError("OuterProductAccumulator: row length mismatch");
  }
  for (std::size_t a = 0; a < dim_; ++a) {
    block_(a, pending_) = row[a];
  }
  ++pending_;
  ++rows_added_;
  if (pending_ == block_rows_) {
    flush();
  }
}

void OuterProductAccumulator::flush()
{
  if (pending_ == 0) {
    return;
  }
  syrk_lower(simd::active(), block_.data(), block_rows_, dim_, pending_, 1.0, gram_.data(), dim_);
  pending_ = 0;
}

Matrix OuterProductAccumulator::finish()
{
  flush();
  Matrix out = gram_;
  for (std::size_t a = 0; a < dim_; ++a) {
    for (std::size_t b = 0; b < a; ++b) {
      out(b, a) = out(a, b);
    }
  }
  return out;
}

}  // namespace rxkit
