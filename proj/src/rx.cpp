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

#include "rxkit/rx.hpp"

#include <algorithm>
#include <stdexcept>

#include "rxkit/error.hpp"
#include "rxkit/parallel.hpp"

namespace rxkit
{

namespace
{
constexpr std::size_t kPanelWidth = 32;
}

Matrix sample_covariance(const Matrix & x, std::vector<double> & mean)
{
  const std::size_t n = x.rows();
  const std::size_t d = x.cols();
  if (n == 0 || d == 0) {
    throw std::invalid_argument("sample_covariance: empty sample matrix");
  }
  mean.assign(d, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = x.row(i);
    for (std::size_t b = 0; b < d; ++b) {
      mean[b] += r[b];
    }
  }
  for (auto & m : mean) {
    m /= static_cast<double>(n);
  }

  OuterProductAccumulator acc(d);
  std::vector<double> centred(d);
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = x.row(i);
    for (std::size_t b = 0; b < d; ++b) {
      centred[b] = r[b] - mean[b];
    }
    acc.add(centred);
  }
  Matrix cov = acc.finish();
  for (auto & v : cov.values()) {
    v /= static_cast<double>(n);
  }
  return cov;
}

RxModel rx_fit(const Matrix & x, double ridge, PhaseTimer * timer)
{
  if (x.rows() < 2) {
    throw std::invalid_argument("rx_fit: need at least two samples");
  }
  if (!(ridge >= 0.0)) {
    throw std::invalid_argument("rx_fit: ridge must be >= 0");
  }
  std::vector<double> mean;
  Matrix cov;
  {
    PhaseScope scope(timer, Phase::covariance);
    cov = sample_covariance(x, mean);
  }
  PhaseScope scope(timer, Phase::inversion);
  SpdFactor factor = spd_factorize(cov, ridge);
  const double used = factor.ridge();
  return RxModel{std::move(mean), std::move(factor), used, x.rows()};
}

std::vector<double> rx_score(const RxModel & model, const Matrix & x, PhaseTimer * timer)
{
  const std::size_t d = model.bands();
  if (x.cols() != d) {
    throw DimensionError(
      "rx_score: test pixels have " + std::to_string(x.cols()) + " bands, model has " +
      std::to_string(d));
  }
  PhaseScope scope(timer, Phase::detection);
  const std::size_t n = x.rows();
  std::vector<double> scores(n);
  const std::size_t blocks = (n + kPanelWidth - 1) / kPanelWidth;
  parallel_for(blocks, 8, [&](std::size_t b0, std::size_t b1) {
    for (std::size_t blk = b0; blk < b1; ++blk) {
      const std::size_t first = blk * kPanelWidth;
      const std::size_t width = std::min(kPanelWidth, n - first);
      Matrix panel(d, width);
      for (std::size_t c = 0; c < width; ++c) {
        const auto r = x.row(first + c);
        for (std::size_t b = 0; b < d; ++b) {
          panel(b, c) = r[b] - model.mean[b];
        }
      }
      const auto q = quadratic_forms(model.cov_factor, panel);
      std::copy(q.begin(), q.end(), scores.begin() + static_cast<std::ptrdiff_t>(first));
    }
  });
  return scores;
}

}  // namespace rxkit
