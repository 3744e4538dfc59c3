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

#ifndef RXKIT_KRX_HPP_
#define RXKIT_KRX_HPP_

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "rxkit/matrix.hpp"
#include "rxkit/numerics.hpp"
#include "rxkit/rng.hpp"
#include "rxkit/rx.hpp"
#include "rxkit/timing.hpp"

namespace rxkit
{

/// Shift-invariant kernel expressed through the squared distance.
class RadialKernel
{
public:
  virtual ~RadialKernel() = default;

  /// Replaces each squared distance by the kernel value, in place.
  virtual void apply(std::span<double> sq_dists) const = 0;
  /// k(x, x).
  virtual double at_zero() const = 0;
  virtual std::string name() const = 0;
};

/// exp(-|x - y|^2 / (2 sigma^2))
class GaussianKernel final : public RadialKernel
{
public:
  explicit GaussianKernel(double sigma);

  void apply(std::span<double> sq_dists) const override;
  double at_zero() const override { return 1.0; }
  std::string name() const override { return "gaussian"; }
  double sigma() const noexcept { return sigma_; }

private:
  double sigma_;
};

/// Gaussian Gram matrix between the rows of x and y.
Matrix gauss_kernel(const Matrix & x, const Matrix & y, double sigma);

/// Where the ridge enters the kernel RX quadratic form.
enum class KrxRidge
{
  /// phi*^T (Phi^T Phi + ridge I)^{-1} phi*
  ///   = (k(x*, x*) - k*^T (K + ridge I)^{-1} k*) / ridge.
  /// The limit of the randomized detector as the feature count grows.
  feature_space,
  /// k*^T (K K + ridge I)^{-1} k*, the squared-Gram form with the ridge
  /// added to the matrix being inverted.
  squared_gram,
};

struct KrxOptions
{
  std::size_t subsample = 3000;
  LengthscaleSpec sigma = LengthscaleSpec::median();
  double ridge = kDefaultRidge;
  KrxRidge ridge_mode = KrxRidge::feature_space;
  RngSpec rng{};
};

struct KrxModel
{
  Matrix support;  // N x d, in sampled order
  double sigma;
  std::shared_ptr<const RadialKernel> kernel;
  SpdFactor gram_factor;  // K + ridge I, or K K + ridge I
  double ridge;
  KrxRidge ridge_mode;
  RngSpec rng_used;
};

/// Subsamples `subsample` rows uniformly without replacement (stream
/// streams::subsample), resolves sigma on the support, and factorizes the
/// regularized Gram system. Throws std::invalid_argument if subsample < 2 or
/// subsample > n.
KrxModel krx_fit(const Matrix & x, const KrxOptions & options, PhaseTimer * timer = nullptr);

std::vector<double> krx_score(const KrxModel & model, const Matrix & x, PhaseTimer * timer = nullptr);

}  // namespace rxkit

#endif  // RXKIT_KRX_HPP_
