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

#ifndef RXKIT_TESTS_ORACLES_HPP_
#define RXKIT_TESTS_ORACLES_HPP_

// Brute-force references. Nothing here calls library numerics; inverses are
// explicit Gauss-Jordan, sums are plain loops.

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "rxkit/matrix.hpp"

namespace oracle
{

using rxkit::Matrix;

/// Gauss-Jordan inverse with partial pivoting.
inline Matrix inverse(const Matrix & a)
{
  const std::size_t n = a.rows();
  Matrix w = a;
  Matrix inv = Matrix::identity(n);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    for (std::size_t r = c + 1; r < n; ++r) {
      if (std::abs(w(r, c)) > std::abs(w(p, c))) {
        p = r;
      }
    }
    if (w(p, c) == 0.0) {
      throw std::runtime_error("oracle::inverse: singular");
    }
    for (std::size_t j = 0; j < n; ++j) {
      std::swap(w(c, j), w(p, j));
      std::swap(inv(c, j), inv(p, j));
    }
    const double piv = w(c, c);
    for (std::size_t j = 0; j < n; ++j) {
      w(c, j) /= piv;
      inv(c, j) /= piv;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c) {
        continue;
      }
      const double f = w(r, c);
      for (std::size_t j = 0; j < n; ++j) {
        w(r, j) -= f * w(c, j);
        inv(r, j) -= f * inv(c, j);
      }
    }
  }
  return inv;
}

inline Matrix add_ridge(Matrix a, double ridge)
{
  for (std::size_t i = 0; i < a.rows(); ++i) {
    a(i, i) += ridge;
  }
  return a;
}

inline Matrix matmul(const Matrix & a, const Matrix & b)
{
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < b.cols(); ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < a.cols(); ++k) {
        s += a(i, k) * b(k, j);
      }
      c(i, j) = s;
    }
  }
  return c;
}

inline Matrix transpose(const Matrix & a)
{
  Matrix t(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      t(j, i) = a(i, j);
    }
  }
  return t;
}

/// v^T M v
inline double quad(const Matrix & m, std::span<const double> v)
{
  double s = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      s += v[i] * m(i, j) * v[j];
    }
  }
  return s;
}

inline std::vector<double> column_mean(const Matrix & x)
{
  std::vector<double> mu(x.cols(), 0.0);
  for (std::size_t i = 0; i < x.rows(); ++i) {
    for (std::size_t j = 0; j < x.cols(); ++j) {
      mu[j] += x(i, j);
    }
  }
  for (double & m : mu) {
    m /= static_cast<double>(x.rows());
  }
  return mu;
}

/// Two-pass (1/n) covariance.
inline Matrix covariance(const Matrix & x)
{
  const auto mu = column_mean(x);
  Matrix c(x.cols(), x.cols());
  for (std::size_t a = 0; a < x.cols(); ++a) {
    for (std::size_t b = 0; b < x.cols(); ++b) {
      double s = 0.0;
      for (std::size_t i = 0; i < x.rows(); ++i) {
        s += (x(i, a) - mu[a]) * (x(i, b) - mu[b]);
      }
      c(a, b) = s / static_cast<double>(x.rows());
    }
  }
  return c;
}

inline Matrix sq_dists(const Matrix & x, const Matrix & y)
{
  Matrix d(x.rows(), y.rows());
  for (std::size_t i = 0; i < x.rows(); ++i) {
    for (std::size_t j = 0; j < y.rows(); ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < x.cols(); ++k) {
        const double t = x(i, k) - y(j, k);
        s += t * t;
      }
      d(i, j) = s;
    }
  }
  return d;
}

inline double gauss(std::span<const double> x, std::span<const double> y, double sigma)
{
  double s = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    s += (x[k] - y[k]) * (x[k] - y[k]);
  }
  return std::exp(-s / (2.0 * sigma * sigma));
}

inline Matrix gauss_gram(const Matrix & x, const Matrix & y, double sigma)
{
  Matrix k(x.rows(), y.rows());
  for (std::size_t i = 0; i < x.rows(); ++i) {
    for (std::size_t j = 0; j < y.rows(); ++j) {
      k(i, j) = gauss(x.row(i), y.row(j), sigma);
    }
  }
  return k;
}

/// sum_i z_i z_i^T, one pixel at a time.
inline Matrix outer_sum(const Matrix & z)
{
  Matrix g(z.cols(), z.cols());
  for (std::size_t i = 0; i < z.rows(); ++i) {
    for (std::size_t a = 0; a < z.cols(); ++a) {
      for (std::size_t b = 0; b < z.cols(); ++b) {
        g(a, b) += z(i, a) * z(i, b);
      }
    }
  }
  return g;
}

/// Exhaustive pairwise AUC: (2 * #(pos > neg) + #(pos == neg)) / (2 P N).
inline double mann_whitney(std::span<const double> scores, std::span<const std::uint8_t> labels)
{
  std::uint64_t twice = 0;
  std::uint64_t p = 0;
  std::uint64_t n = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    (labels[i] != 0 ? p : n) += 1;
  }
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (labels[i] == 0) {
      continue;
    }
    for (std::size_t j = 0; j < scores.size(); ++j) {
      if (labels[j] != 0) {
        continue;
      }
      twice += scores[i] > scores[j] ? 2 : (scores[i] == scores[j] ? 1 : 0);
    }
  }
  return static_cast<double>(twice) / static_cast<double>(2 * p * n);
}

/// (x - mu)^T (C + ridge I)^{-1} (x - mu) with C the (1/n) covariance of fit.
inline std::vector<double> rx(const Matrix & fit, double ridge, const Matrix & test)
{
  const auto mu = column_mean(fit);
  const Matrix inv = inverse(add_ridge(covariance(fit), ridge));
  std::vector<double> out;
  for (std::size_t i = 0; i < test.rows(); ++i) {
    std::vector<double> v(test.cols());
    for (std::size_t j = 0; j < test.cols(); ++j) {
      v[j] = test(i, j) - mu[j];
    }
    out.push_back(quad(inv, v));
  }
  return out;
}

/// (1 - k*^T (K + ridge I)^{-1} k*) / ridge, clamped at 0.
inline std::vector<double> krx_feature_space(
  const Matrix & support, double sigma, double ridge, const Matrix & test)
{
  const Matrix inv = inverse(add_ridge(gauss_gram(support, support, sigma), ridge));
  const Matrix ks = gauss_gram(support, test, sigma);
  std::vector<double> out;
  for (std::size_t t = 0; t < test.rows(); ++t) {
    std::vector<double> k(support.rows());
    for (std::size_t i = 0; i < support.rows(); ++i) {
      k[i] = ks(i, t);
    }
    out.push_back(std::max(0.0, (1.0 - quad(inv, k)) / ridge));
  }
  return out;
}

/// k*^T (K K + ridge I)^{-1} k*
inline std::vector<double> krx_squared_gram(
  const Matrix & support, double sigma, double ridge, const Matrix & test)
{
  const Matrix k_mat = gauss_gram(support, support, sigma);
  const Matrix inv = inverse(add_ridge(matmul(k_mat, k_mat), ridge));
  const Matrix ks = gauss_gram(support, test, sigma);
  std::vector<double> out;
  for (std::size_t t = 0; t < test.rows(); ++t) {
    std::vector<double> k(support.rows());
    for (std::size_t i = 0; i < support.rows(); ++i) {
      k[i] = ks(i, t);
    }
    out.push_back(quad(inv, k));
  }
  return out;
}

/// Real cos/sin features, [cos | sin] / sqrt(D), with W given D x d.
inline Matrix cos_sin_features(const Matrix & w, const Matrix & x)
{
  const std::size_t d_feat = w.rows();
  const double s = 1.0 / std::sqrt(static_cast<double>(d_feat));
  Matrix z(x.rows(), 2 * d_feat);
  for (std::size_t i = 0; i < x.rows(); ++i) {
    for (std::size_t j = 0; j < d_feat; ++j) {
      double ph = 0.0;
      for (std::size_t k = 0; k < x.cols(); ++k) {
        ph += w(j, k) * x(i, k);
      }
      z(i, j) = s * std::cos(ph);
      z(i, d_feat + j) = s * std::sin(ph);
    }
  }
  return z;
}

/// z*^T (Z^T Z + ridge I)^{-1} z*, explicit inverse.
inline std::vector<double> rrx(const Matrix & z_fit, double ridge, const Matrix & z_test)
{
  const Matrix inv = inverse(add_ridge(outer_sum(z_fit), ridge));
  std::vector<double> out;
  for (std::size_t i = 0; i < z_test.rows(); ++i) {
    out.push_back(quad(inv, z_test.row(i)));
  }
  return out;
}

/// exp(i W x) / sqrt(D), row-major n x D.
inline std::vector<std::complex<double>> complex_features(const Matrix & w, const Matrix & x)
{
  const double s = 1.0 / std::sqrt(static_cast<double>(w.rows()));
  std::vector<std::complex<double>> z(x.rows() * w.rows());
  for (std::size_t i = 0; i < x.rows(); ++i) {
    for (std::size_t j = 0; j < w.rows(); ++j) {
      double ph = 0.0;
      for (std::size_t k = 0; k < x.cols(); ++k) {
        ph += w(j, k) * x(i, k);
      }
      z[i * w.rows() + j] = s * std::polar(1.0, ph);
    }
  }
  return z;
}

/// Re sum_j a_j conj(b_j)
inline double re_inner(const std::complex<double> * a, const std::complex<double> * b, std::size_t n)
{
  std::complex<double> s = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    s += a[j] * std::conj(b[j]);
  }
  return s.real();
}

/// The randomized detector through the sample-space identity
/// (k** - k*^T (Khat + ridge I)^{-1} k*) / ridge, where every kernel value is
/// Re<z(x), z(y)> of complex exponential features.
inline std::vector<double> rrx_complex_pushthrough(
  const Matrix & w, const Matrix & fit, double ridge, const Matrix & test)
{
  const std::size_t d_feat = w.rows();
  const auto zf = complex_features(w, fit);
  const auto zt = complex_features(w, test);
  Matrix khat(fit.rows(), fit.rows());
  for (std::size_t i = 0; i < fit.rows(); ++i) {
    for (std::size_t j = 0; j < fit.rows(); ++j) {
      khat(i, j) = re_inner(&zf[i * d_feat], &zf[j * d_feat], d_feat);
    }
  }
  const Matrix inv = inverse(add_ridge(khat, ridge));
  std::vector<double> out;
  for (std::size_t t = 0; t < test.rows(); ++t) {
    std::vector<double> k(fit.rows());
    for (std::size_t i = 0; i < fit.rows(); ++i) {
      k[i] = re_inner(&zf[i * d_feat], &zt[t * d_feat], d_feat);
    }
    const double kss = re_inner(&zt[t * d_feat], &zt[t * d_feat], d_feat);
    out.push_back((kss - quad(inv, k)) / ridge);
  }
  return out;
}

}  // namespace oracle

#endif  // RXKIT_TESTS_ORACLES_HPP_
