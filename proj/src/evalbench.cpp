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

#include "rxkit/evalbench.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "rxkit/error.hpp"
#include "rxkit/parallel.hpp"
#include "text_io.hpp"

namespace rxkit
{

RocResult roc_auc(std::span<const double> scores, std::span<const std::uint8_t> labels)
{
  if (scores.size() != labels.size()) {
    throw DimensionError(
      "roc_auc: " + std::to_string(scores.size()) + " scores but " + std::to_string(labels.size()) +
      " labels");
  }
  RocResult roc;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (!std::isfinite(scores[i])) {
      throw DataError("roc_auc: non-finite score at index " + std::to_string(i));
    }
    (labels[i] != 0 ? roc.n_pos : roc.n_neg) += 1;
  }
  if (roc.n_pos == 0 || roc.n_neg == 0) {
    throw DataError("roc_auc: labels must contain both classes");
  }

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores[a] > scores[b];
  });

  const double p = static_cast<double>(roc.n_pos);
  const double q = static_cast<double>(roc.n_neg);
  roc.thresholds.push_back(std::numeric_limits<double>::infinity());
  roc.fpr.push_back(0.0);
  roc.tpr.push_back(0.0);

  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t twice_area = 0;  // sum of (fp - fp_prev) * (tp_prev + tp)
  std::size_t i = 0;
  while (i < order.size()) {
    const double s = scores[order[i]];
    const std::uint64_t tp_prev = tp;
    const std::uint64_t fp_prev = fp;
    for (; i < order.size() && scores[order[i]] == s; ++i) {
      (labels[order[i]] != 0 ? tp : fp) += 1;
    }
    twice_area += (fp - fp_prev) * (tp_prev + tp);
    roc.thresholds.push_back(s);
    roc.fpr.push_back(static_cast<double>(fp) / q);
    roc.tpr.push_back(static_cast<double>(tp) / p);
  }
  roc.auc = static_cast<double>(twice_area) / (2.0 * p * q);
  return roc;
}

void write_roc_csv(std::ostream & os, const RocResult & roc)
{
  os << "fpr,tpr,threshold\n";
  for (std::size_t i = 0; i < roc.fpr.size(); ++i) {
    os << detail::format_double(roc.fpr[i]) << ',' << detail::format_double(roc.tpr[i]) << ','
       << detail::format_double(roc.thresholds[i]) << '\n';
  }
}

namespace
{

double median_of(std::vector<double> v)
{
  std::sort(v.begin(), v.end());
  const std::size_t mid = v.size() / 2;
  return v.size() % 2 == 1 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

}  // namespace

BenchResult bench_detector(const Raster & data, const DetectorParams & params, std::size_t repeats)
{
  if (repeats == 0) {
    throw std::invalid_argument("bench_detector: repeats must be positive");
  }
  const ScopedThreadCount serial(1);
  const Matrix & x = data.samples();
  (void)detect(x, x, params);  // warm-up

  BenchResult result;
  std::vector<std::vector<double>> per_phase(kAllPhases.size());
  std::vector<bool> seen(kAllPhases.size(), false);
  for (std::size_t r = 0; r < repeats; ++r) {
    const Detection det = detect(x, x, params);
    for (std::size_t p = 0; p < kAllPhases.size(); ++p) {
      const Phase phase = kAllPhases[p];
      if (!det.timer.recorded(phase)) {
        continue;
      }
      seen[p] = true;
      per_phase[p].push_back(det.timer.seconds(phase));
      result.runs.push_back(BenchRecord{
        params.method, phase, x.rows(), x.cols(), params.size_param(), det.timer.seconds(phase)});
    }
  }
  for (std::size_t p = 0; p < kAllPhases.size(); ++p) {
    if (seen[p]) {
      result.medians.push_back(BenchRecord{
        params.method, kAllPhases[p], x.rows(), x.cols(), params.size_param(),
        median_of(per_phase[p])});
    }
  }
  return result;
}

void write_bench_csv(std::ostream & os, std::span<const BenchRecord> records)
{
  os << "method,phase,n,d,param,wall_seconds\n";
  for (const auto & r : records) {
    os << to_string(r.method) << ',' << to_string(r.phase) << ',' << r.n << ',' << r.d << ','
       << r.param << ',' << detail::format_double(r.wall_seconds) << '\n';
  }
}

std::vector<double> paper_lambda_grid() { return {1e-5, 1e-4, 1e-3, 1e-2, 1e-1, 1e0}; }

std::vector<double> paper_c_grid() { return {0.05, 0.1, 0.2, 0.5, 1.0, 2.0, 5.0}; }

std::vector<LabeledPatch> labeled_patches(
  const Raster & raster, const Mask & mask, const PatchGrid & grid, Split split)
{
  if (raster.height() != mask.height() || raster.width() != mask.width()) {
    throw DimensionError("labeled_patches: raster and mask dimensions differ");
  }
  const auto rasters = extract_patches(raster, grid);
  const auto masks = extract_patches(mask, grid);
  std::vector<LabeledPatch> out;
  for (const auto i : grid.indices_of(split)) {
    out.push_back({rasters[i], masks[i]});
  }
  return out;
}

RngSpec grid_cell_rng(RngSpec base, std::size_t index)
{
  const auto block = Rng::block(
    base.with_stream(streams::grid_cells + static_cast<std::uint32_t>(index)), 0);
  return RngSpec{block[0], base.stream};
}

GridSearchResult grid_search(
  std::span<const LabeledPatch> train, std::span<const LabeledPatch> validation,
  const std::vector<double> & lambda_grid, const std::vector<double> & c_grid,
  const DetectorParams & base)
{
  if (train.empty() || validation.empty()) {
    throw std::invalid_argument("grid_search: train and validation patch lists must be non-empty");
  }
  if (lambda_grid.empty() || c_grid.empty()) {
    throw std::invalid_argument("grid_search: grids must be non-empty");
  }
  if (base.method == Method::rx) {
    throw std::invalid_argument("grid_search: method must be krx or rrx");
  }
  for (const double c : c_grid) {
    if (!(c > 0.0)) {
      throw std::invalid_argument("grid_search: lengthscale factors must be positive");
    }
  }

  std::vector<Raster> train_rasters;
  for (const auto & p : train) {
    train_rasters.push_back(p.raster);
  }
  const Matrix pooled = stack_samples(train_rasters);

  GridSearchResult result;
  result.lambda_grid = lambda_grid;
  result.c_grid = c_grid;
  result.median =
    median_lengthscale(pooled, base.sigma.max_pairs, base.rng.with_stream(streams::pairs));
  result.mean_val_auc = Matrix(lambda_grid.size(), c_grid.size());

  for (std::size_t li = 0; li < lambda_grid.size(); ++li) {
    for (std::size_t ci = 0; ci < c_grid.size(); ++ci) {
      DetectorParams params = base;
      params.ridge = lambda_grid[li];
      params.sigma = LengthscaleSpec::fixed(c_grid[ci] * result.median);
      params.rng = grid_cell_rng(base.rng, li * c_grid.size() + ci);
      if (params.method == Method::krx) {
        params.subsample = std::min(params.subsample, pooled.rows());
      }
      // One fit per cell; the validation patches are scored as one batch and
      // split afterwards.
      std::vector<Raster> val_rasters;
      for (const auto & v : validation) {
        val_rasters.push_back(v.raster);
      }
      const Detection det = detect(pooled, stack_samples(val_rasters), params);
      double sum = 0.0;
      std::size_t offset = 0;
      for (const auto & v : validation) {
        const std::size_t n = v.raster.pixels();
        sum += roc_auc(std::span(det.scores).subspan(offset, n), v.mask.labels()).auc;
        offset += n;
      }
      result.mean_val_auc(li, ci) = sum / static_cast<double>(validation.size());
    }
  }

  // Row-major scan with strict improvement keeps the first maximum; sort
  // order of the grids decides "smaller".
  std::vector<std::size_t> lo(lambda_grid.size());
  std::vector<std::size_t> co(c_grid.size());
  std::iota(lo.begin(), lo.end(), std::size_t{0});
  std::iota(co.begin(), co.end(), std::size_t{0});
  std::stable_sort(lo.begin(), lo.end(), [&](auto a, auto b) { return lambda_grid[a] < lambda_grid[b]; });
  std::stable_sort(co.begin(), co.end(), [&](auto a, auto b) { return c_grid[a] < c_grid[b]; });
  double best = -1.0;
  for (const auto li : lo) {
    for (const auto ci : co) {
      if (result.mean_val_auc(li, ci) > best) {
        best = result.mean_val_auc(li, ci);
        result.best_lambda_index = li;
        result.best_c_index = ci;
      }
    }
  }
  return result;
}

void write_grid_csv(std::ostream & os, const GridSearchResult & result)
{
  os << "lambda\\c";
  for (const double c : result.c_grid) {
    os << ',' << detail::format_double(c);
  }
  os << '\n';
  for (std::size_t li = 0; li < result.lambda_grid.size(); ++li) {
    os << detail::format_double(result.lambda_grid[li]);
    for (std::size_t ci = 0; ci < result.c_grid.size(); ++ci) {
      os << ',' << detail::format_double(result.mean_val_auc(li, ci));
    }
    os << '\n';
  }
}

}  // namespace rxkit
