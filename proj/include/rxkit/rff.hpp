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


#ifndef RXKIT_RFF_HPP_
#define RXKIT_RFF_HPP_

#include <complex>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rxkit/matrix.hpp"
#include "rxkit/rng.hpp"

namespace rxkit
{

enum class FeatureRepresentation
{
  /// [cos(w_j^T x) ..., sin(w_j^T x) ...] / sqrt(D), width 2D.
  real_cos_sin,
  /// exp(i w_j^T x) / sqrt(D), width D.
  complex,
};

std::string_view to_string(FeatureRepresentation r);
/// Accepts "real-cos-sin" and "complex".
FeatureRepresentation parse_representation(std::string_view s);

/// Random Fourier frequencies for the Gaussian kernel of lengthscale sigma.
struct RffBasis
{
  Matrix frequencies;  // D x d, rows w_j
  double sigma = 0.0;
  RngSpec rng_used{};
  FeatureRepresentation representation = FeatureRepresentation::real_cos_sin;

  std::size_t features() const noexcept { return frequencies.rows(); }
  std::size_t bands() const noexcept { return frequencies.cols(); }
  /// Real columns of the mapped matrix: 2D for real_cos_sin, D for complex.
  std::size_t width() const noexcept
  {
    return representation == FeatureRepresentation::real_cos_sin ? 2 * features() : features();
  }

  friend bool operator==(const RffBasis &, const RffBasis &) = default;
};

/// W with i.i.d. N(0, sigma^-2) entries drawn from `rng`.
RffBasis rff_sample(
  std::size_t bands, std::size_t features, double sigma, RngSpec rng,
  FeatureRepresentation representation = FeatureRepresentation::real_cos_sin);

/// Mapped samples. Exactly one of `real` / `complex_values` is populated,
/// according to `representation`.
struct FeatureMatrix
{
  FeatureRepresentation representation = FeatureRepresentation::real_cos_sin;
  std::size_t rows = 0;
  std::size_t features = 0;
  Matrix real;                                       // rows x 2D
  std::vector<std::complex<double>> complex_values;  // rows x D, row-major

  std::complex<double> at(std::size_t i, std::size_t j) const
  {
    return complex_values[i * features + j];
  }
};

FeatureMatrix rff_map(const RffBasis & basis, const Matrix & x);

/// Maps single pixels to the real representation. The batch map and the
/// streaming scorer both go through this, so a pixel's features do not
/// depend on how it was delivered.
class RffRowMapper
{
public:
  explicit RffRowMapper(const RffBasis & basis);

  /// out.size() must be 2D; x.size() must equal the band count.
  void map(std::span<const double> x, std::span<double> out);

  std::size_t bands() const noexcept { return bands_; }
  std::size_t width() const noexcept { return 2 * features_; }

private:
  std::size_t bands_;
  std::size_t features_;
  double scale_;
  Matrix freq_t_;  // d x D
  std::vector<double> phase_;
};

/// Re(Z Z^H): the kernel estimate between every pair of rows of x.
Matrix approx_gram(const RffBasis & basis, const Matrix & x);

/// Header "D d sigma seed stream representation\n", then W as little-endian
/// doubles, row-major.
void write_basis(std::ostream & os, const RffBasis & basis);
RffBasis read_basis(std::istream & is);
void save_basis(const std::string & path, const RffBasis & basis);
RffBasis load_basis(const std::string & path);

}  // namespace rxkit

#endif  // RXKIT_RFF_HPP_
