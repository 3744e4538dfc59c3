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

#include "rxkit/krx.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rxkit/error.hpp"
#include "rxkit/parallel.hpp"
#include "rxkit/simd/kernels.hpp"

namespace rxkit
{

namespace
{
constexpr std::size_t kPanelWidth = 32;
}

GaussianKernel::GaussianKernel(double sigma) : sigma_(sigma)
{
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw std::invalid_argument("GaussianKernel: sigma must be positive");
  }
}

void GaussianKernel::apply(std::span<double> sq_dists) const
{
  simd::active().exp_scaled(
    sq_dists.data(), -1.0 / (2.0 * sigma_ * sigma_), sq_dists.data(), sq_dists.size());
}

Matrix gauss_kernel(const Matrix & x, const Matrix & y, double sigma)
{
  const GaussianKernel kernel(sigma);
  Matrix k = pairwise_sq_dists(x, y);
  kernel.apply(k.values());
  return k;
}

KrxModel krx_fit(const Matrix & x, const KrxOptions & options, PhaseTimer * timer)
{
  const std::size_t n = x.rows();
  const std::size_t big_n = options.subsample;
  if (big_n < 2) {
    throw std::invalid_argument("krx_fit: subsample size must be at least 2");
  }
  if (big_n > n) {
    throw std::invalid_argument(
      "krx_fit: subsample size " + std::to_string(big_n) + " exceeds pixel count " +
      std::to_string(n));
  }
  if (!(options.ridge >= 0.0)) {
    throw std::invalid_argument("krx_fit: ridge must be >= 0");
  }
  if (options.ridge_mode == KrxRidge::feature_space && !(options.ridge > 0.0)) {
    throw std::invalid_argument("krx_fit: the feature-space form needs ridge > 0");
  }

  Matrix support;
  double sigma = 0.0;
  Matrix gram;
  std::shared_ptr<const RadialKernel> kernel;
  {
    PhaseScope scope(timer, Phase::transform);
    const auto picks =
      sample_without_replacement(n, big_n, options.rng.with_stream(streams::subsample));
    support = x.gather_rows(picks);
    sigma = options.sigma.resolve(support, options.rng.with_stream(streams::pairs));
    kernel = std::make_shared<GaussianKernel>(sigma);
    gram = pairwise_sq_dists(support, support);
    kernel->apply(gram.values());
  }
  if (options.ridge_mode == KrxRidge::squared_gram) {
    PhaseScope scope(timer, Phase::covariance);
    gram = row_gram(gram);  // K symmetric: K K = K K^T
  }
  PhaseScope scope(timer, Phase::inversion);
  SpdFactor factor = spd_factorize(gram, options.ridge);
  const double used = factor.ridge();
  return KrxModel{
    std::move(support), sigma,           std::move(kernel), std::move(factor),
    used,               options.ridge_mode, options.rng};
}

std::vector<double> krx_score(const KrxModel & model, const Matrix & x, PhaseTimer * timer)
{
  const std::size_t d = model.support.cols();
  if (x.cols() != d) {
    throw DimensionError(
      "krx_score: test pixels have " + std::to_string(x.cols()) + " bands, model has " +
      std::to_string(d));
  }
  PhaseScope scope(timer, Phase::detection);
  const std::size_t big_n = model.support.rows();
  const Matrix support_t = model.support.transposed();
  const auto & k = simd::active();
  const double self = model.kernel->at_zero();
  const std::size_t n = x.rows();
  std::vector<double> scores(n);
  const std::size_t blocks = (n + kPanelWidth - 1) / kPanelWidth;

  parallel_for(blocks, 1, [&](std::size_t b0, std::size_t b1) {
    std::vector<double> kstar(big_n);
    for (std::size_t blk = b0; blk < b1; ++blk) {
      const std::size_t first = blk * kPanelWidth;
      const std::size_t width = std::min(kPanelWidth, n - first);
      Matrix panel(big_n, width);
      for (std::size_t c = 0; c < width; ++c) {
        k.sq_dist_to_columns(support_t.data(), big_n, big_n, d, x.row(first + c).data(), kstar.data());
        model.kernel->apply(kstar);
        for (std::size_t j = 0; j < big_n; ++j) {
          panel(j, c) = kstar[j];
        }
      }
      const auto q = quadratic_forms(model.gram_factor, panel);
      for (std::size_t c = 0; c < width; ++c) {
        scores[first + c] = model.ridge_mode == KrxRidge::feature_space
                              ? std::max(0.0, (self - q[c]) / model.ridge)
                              : q[c];
      }
    }
  });
  return scores;
}

}  // namespace rxkit
