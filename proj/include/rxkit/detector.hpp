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


#ifndef RXKIT_DETECTOR_HPP_
#define RXKIT_DETECTOR_HPP_

#include <cstddef>
#include <string_view>
#include <vector>

#include "rxkit/krx.hpp"
#include "rxkit/matrix.hpp"
#include "rxkit/numerics.hpp"
#include "rxkit/rng.hpp"
#include "rxkit/rrx.hpp"
#include "rxkit/rx.hpp"
#include "rxkit/timing.hpp"

namespace rxkit
{

enum class Method { rx, krx, rrx };

std::string_view to_string(Method m);
Method parse_method(std::string_view s);

/// Parameters of any of the three detectors; fields that do not apply to
/// the chosen method are ignored.
struct DetectorParams
{
  Method method = Method::rrx;
  double ridge = kDefaultRidge;
  LengthscaleSpec sigma = LengthscaleSpec::median();
  std::size_t subsample = 3000;  // KRX N
  std::size_t features = 50;     // RRX D
  KrxRidge krx_ridge = KrxRidge::feature_space;
  bool center = false;  // RRX
  RngSpec rng{};

  /// N for KRX, D for RRX, 0 for RX.
  std::size_t size_param() const;
};

struct Detection
{
  std::vector<double> scores;
  double sigma = 0.0;       // 0 for RX
  double ridge_used = 0.0;  // after any factorization retry
  PhaseTimer timer;
};

/// Fits on `background` and scores `test`.
Detection detect(const Matrix & background, const Matrix & test, const DetectorParams & params);

}  // namespace rxkit

#endif  // RXKIT_DETECTOR_HPP_
