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

#ifndef RXKIT_RX_HPP_
#define RXKIT_RX_HPP_

#include <cstddef>
#include <vector>

#include "rxkit/matrix.hpp"
#include "rxkit/numerics.hpp"
#include "rxkit/timing.hpp"

namespace rxkit
{

inline constexpr double kDefaultRidge = 1e-2;

/// Background statistics of the global RX detector.
struct RxModel
{
  std::vector<double> mean;
  SpdFactor cov_factor;  // of Sigma + ridge*I
  double ridge;
  std::size_t n_fit;

  std::size_t bands() const noexcept { return mean.size(); }
};

/// Column mean and (1/n) X~^T X~ of the centred samples.
Matrix sample_covariance(const Matrix & x, std::vector<double> & mean);

/// Needs at least two samples.
RxModel rx_fit(const Matrix & x, double ridge = kDefaultRidge, PhaseTimer * timer = nullptr);

/// Mahalanobis distance (x - mu)^T (Sigma + ridge*I)^{-1} (x - mu) per row.
std::vector<double> rx_score(const RxModel & model, const Matrix & x, PhaseTimer * timer = nullptr);

}  // namespace rxkit

#endif  // RXKIT_RX_HPP_
