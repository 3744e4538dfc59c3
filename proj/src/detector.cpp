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

#include "rxkit/detector.hpp"

#include <stdexcept>
#include <string>

namespace rxkit
{

std::string_view to_string(Method m)
{
  switch (m) {
    case Method::rx:
      return "rx";
    case Method::krx:
      return "krx";
    case Method::rrx:
      return "rrx";
  }
  return "?";
}

Method parse_method(std::string_view s)
{
  if (s == "rx") {
    return Method::rx;
  }
  if (s == "krx") {
    return Method::krx;
  }
  if (s == "rrx") {
    return Method::rrx;
  }
  throw std::invalid_argument("unknown method '" + std::string(s) + "' (expected rx, krx or rrx)");
}

std::size_t DetectorParams::size_param() const
{
  switch (method) {
    case Method::krx:
      return subsample;
    case Method::rrx:
      return features;
    case Method::rx:
      break;
  }
  return 0;
}

Detection detect(const Matrix & background, const Matrix & test, const DetectorParams & params)
{
  Detection out;
  switch (params.method) {
    case Method::rx: {
      const RxModel model = rx_fit(background, params.ridge, &out.timer);
      out.scores = rx_score(model, test, &out.timer);
      out.ridge_used = model.ridge;
      break;
    }
    case Method::krx: {
      KrxOptions o;
      o.subsample = params.subsample;
      o.sigma = params.sigma;
      o.ridge = params.ridge;
      o.ridge_mode = params.krx_ridge;
      o.rng = params.rng;
      const KrxModel model = krx_fit(background, o, &out.timer);
      out.scores = krx_score(model, test, &out.timer);
      out.sigma = model.sigma;
      out.ridge_used = model.ridge;
      break;
    }
    case Method::rrx: {
      RrxOptions o;
      o.features = params.features;
      o.sigma = params.sigma;
      o.ridge = params.ridge;
      o.rng = params.rng;
      o.center = params.center;
      const RrxModel model = rrx_fit(background, o, &out.timer);
      out.scores = rrx_score(model, test, &out.timer);
      out.sigma = model.sigma;
      out.ridge_used = model.ridge;
      break;
    }
  }
  return out;
}

}  // namespace rxkit
