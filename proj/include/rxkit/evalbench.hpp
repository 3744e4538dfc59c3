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


#ifndef RXKIT_EVALBENCH_HPP_
#define RXKIT_EVALBENCH_HPP_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "rxkit/detector.hpp"
#include "rxkit/matrix.hpp"
#include "rxkit/raster.hpp"
#include "rxkit/timing.hpp"

namespace rxkit
{

/// ROC vertices from (0, 0) to (1, 1), one per distinct score. The first
/// vertex carries threshold +inf.
struct RocResult
{
  std::vector<double> thresholds;  // descending
  std::vector<double> fpr;
  std::vector<double> tpr;
  double auc = 0.0;
  std::size_t n_pos = 0;
  std::size_t n_neg = 0;
};

/// Exact ROC of `scores` against 0/1 `labels`. The AUC is the trapezoidal
/// area, accumulated in integers, which equals the Mann-Whitney statistic
/// with ties counted 1/2. Throws DataError for single-class labels,
/// mismatched lengths or non-finite scores.
RocResult roc_auc(std::span<const double> scores, std::span<const std::uint8_t> labels);

/// "fpr,tpr,threshold" header plus one line per vertex.
void write_roc_csv(std::ostream & os, const RocResult & roc);

struct BenchRecord
{
  Method method;
  Phase phase;
  std::size_t n;
  std::size_t d;
  std::size_t param;  // N for KRX, D for RRX, 0 for RX
  double wall_seconds;
};

struct BenchResult
{
  /// repeats records per recorded phase, in run order.
  std::vector<BenchRecord> runs;
  /// Median over repeats, one record per recorded phase.
  std::vector<BenchRecord> medians;
};

/// Fits on and scores every pixel of `data`, once untimed and then
/// `repeats` times, on one thread. Phases a method does not have (RX
/// transform) produce no record.
BenchResult bench_detector(const Raster & data, const DetectorParams & params, std::size_t repeats);

/// "method,phase,n,d,param,wall_seconds" header plus one line per record.
void write_bench_csv(std::ostream & os, std::span<const BenchRecord> records);

struct LabeledPatch
{
  Raster raster;
  Mask mask;
};

/// Patches of `grid` assigned to `split`, in grid order.
std::vector<LabeledPatch> labeled_patches(
  const Raster & raster, const Mask & mask, const PatchGrid & grid, Split split);

struct GridSearchResult
{
  std::vector<double> lambda_grid;
  std::vector<double> c_grid;
  /// lambda rows x c columns.
  Matrix mean_val_auc;
  std::size_t best_lambda_index = 0;
  std::size_t best_c_index = 0;
  /// Median pairwise distance of the training pixels; sigma = c * median.
  double median = 0.0;

  double best_lambda() const { return lambda_grid[best_lambda_index]; }
  double best_c() const { return c_grid[best_c_index]; }
  double best_auc() const { return mean_val_auc(best_lambda_index, best_c_index); }
};

/// lambda in {1e-5, 1e-4, ..., 1e0}.
std::vector<double> paper_lambda_grid();
/// c in {0.05, 0.1, 0.2, 0.5, 1, 2, 5}.
std::vector<double> paper_c_grid();

/// For every (lambda, c): fits `base.method` (krx or rrx) on the pooled
/// training pixels with sigma = c * median, scores each validation patch and
/// averages the AUCs. Every cell draws from its own seed derived from
/// base.rng and the cell index. The best cell maximizes the mean AUC; ties
/// go to the smaller lambda, then the smaller c.
GridSearchResult grid_search(
  std::span<const LabeledPatch> train, std::span<const LabeledPatch> validation,
  const std::vector<double> & lambda_grid, const std::vector<double> & c_grid,
  const DetectorParams & base);

/// Seed used by grid cell `index`.
RngSpec grid_cell_rng(RngSpec base, std::size_t index);

/// First line "lambda\c,<c values>", then one row per lambda.
void write_grid_csv(std::ostream & os, const GridSearchResult & result);

}  // namespace rxkit

#endif  // RXKIT_EVALBENCH_HPP_
