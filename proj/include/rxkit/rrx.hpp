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


#ifndef RXKIT_RRX_HPP_
#define RXKIT_RRX_HPP_

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "rxkit/matrix.hpp"
#include "rxkit/numerics.hpp"
#include "rxkit/rff.hpp"
#include "rxkit/rng.hpp"
#include "rxkit/rx.hpp"
#include "rxkit/timing.hpp"

namespace rxkit
{

struct RrxOptions
{
  std::size_t features = 50;
  LengthscaleSpec sigma = LengthscaleSpec::median();
  double ridge = kDefaultRidge;
  RngSpec rng{};
  /// Remove the feature-space mean before forming the quadratic form.
  bool center = false;
  /// Rows mapped per accumulation block during the fit.
  std::size_t block_rows = 256;
};

struct RrxModel
{
  RffBasis basis;  // real_cos_sin
  SpdFactor feat_factor;  // Z^T Z + ridge I, dim 2D
  double ridge = 0.0;
  std::size_t n_fit = 0;
  double sigma = 0.0;
  bool centered = false;
  std::vector<double> feature_mean;  // empty unless centered

  std::size_t bands() const noexcept { return basis.bands(); }

  friend bool operator==(const RrxModel &, const RrxModel &) = default;
};

/// Memory accounting of a fit, in doubles.
struct RrxFitStats
{
  std::size_t rows = 0;
  /// Largest simultaneous size of the matrices the fit keeps alive
  /// (feature block + Gram accumulator), excluding the input and the basis.
  std::size_t peak_resident_values = 0;
};

/// Resolves sigma on x (stream streams::pairs), samples the basis (stream
/// streams::basis), accumulates Z^T Z block by block and factorizes it.
RrxModel rrx_fit(
  const Matrix & x, const RrxOptions & options, PhaseTimer * timer = nullptr,
  RrxFitStats * stats = nullptr);

/// z*^T (Z^T Z + ridge I)^{-1} z* per row of x.
std::vector<double> rrx_score(const RrxModel & model, const Matrix & x, PhaseTimer * timer = nullptr);

/// Scores one pixel at a time with O(D^2) state. Results equal rrx_score
/// bit for bit.
class RrxStreamScorer
{
public:
  explicit RrxStreamScorer(const RrxModel & model);

  /// Throws DimensionError naming the stream position on a band mismatch.
  double score(std::span<const double> pixel);

  std::size_t position() const noexcept { return position_; }
  std::size_t resident_values() const noexcept { return features_.size(); }

private:
  const RrxModel * model_;
  RffRowMapper mapper_;
  std::vector<double> features_;
  std::size_t position_ = 0;
};

/// Pulls pixels from `source` until it returns false, pushing each score to
/// `sink`.
void rrx_score_streaming(
  const RrxModel & model, const std::function<bool(std::vector<double> &)> & source,
  const std::function<void(double)> & sink);

/// Container of ASCII-headed sections:
///   "rxkit-rrx-model 1\n"
///   "[basis]\n" + basis block (see write_basis)
///   "[meta]\nridge n_fit sigma centered\n"
///   "[factor] m\n" + m*m little-endian doubles (row-major lower factor)
///   "[mean] k\n" + k little-endian doubles
void write_rrx_model(std::ostream & os, const RrxModel & model);
RrxModel read_rrx_model(std::istream & is);

}  // namespace rxkit

#endif  // RXKIT_RRX_HPP_
