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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "rxkit/error.hpp"
#include "rxkit/krx.hpp"
#include "rxkit/parallel.hpp"
#include "test_util.hpp"

using namespace rxkit;

namespace
{

KrxOptions opts(std::size_t n, double sigma, double ridge, KrxRidge mode = KrxRidge::feature_space)
{
  KrxOptions o;
  o.subsample = n;
  o.sigma = LengthscaleSpec::fixed(sigma);
  o.ridge = ridge;
  o.ridge_mode = mode;
  return o;
}

}  // namespace

TEST_CASE("gauss_kernel: analytic values")
{
  const double sigma = 1.3;
  CHECK(gauss_kernel(Matrix{{0.4, -2}}, Matrix{{0.4, -2}}, sigma)(0, 0) == 1.0);
  // |x - y|^2 = 2 sigma^2
  const Matrix x{{0, 0}};
  const Matrix y{{sigma, sigma}};
  CHECK(gauss_kernel(x, y, sigma)(0, 0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
  const Matrix h{{sigma * std::sqrt(2.0 * std::log(2.0))}};
  CHECK(gauss_kernel(Matrix{{0}}, h, sigma)(0, 0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK_THROWS_AS(gauss_kernel(x, Matrix{{1}}, sigma), DimensionError);
  CHECK_THROWS_AS(gauss_kernel(x, y, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(GaussianKernel(-1.0), std::invalid_argument);
}

TEST_CASE("gauss_kernel: entries in (0, 1], unit diagonal, matches oracle")
{
  const Matrix x = testutil::random_matrix(1, 30, 3);
  const Matrix k = gauss_kernel(x, x, 0.8);
  const Matrix o = oracle::gauss_gram(x, x, 0.8);
  CHECK(testutil::max_abs_diff(k.values(), o.values()) < 1e-14);
  for (std::size_t i = 0; i < 30; ++i) {
    CHECK(k(i, i) == 1.0);
    for (std::size_t j = 0; j < 30; ++j) {
      CHECK(k(i, j) > 0.0);
      CHECK(k(i, j) <= 1.0);
    }
  }
  const GaussianKernel g(2.0);
  CHECK(g.at_zero() == 1.0);
  CHECK(g.name() == "gaussian");
}

TEST_CASE("krx_fit: N = n keeps every point")
{
  const Matrix x = testutil::random_matrix(2, 25, 2);
  const KrxModel m = krx_fit(x, opts(25, 1.0, 1e-2));
  REQUIRE(m.support.rows() == 25);
  std::vector<std::vector<double>> a;
  std::vector<std::vector<double>> b;
  for (std::size_t i = 0; i < 25; ++i) {
    a.emplace_back(x.row(i).begin(), x.row(i).end());
    b.emplace_back(m.support.row(i).begin(), m.support.row(i).end());
  }
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  CHECK(a == b);
}

TEST_CASE("krx_fit: identical support points need an explicit sigma")
{
  const Matrix x{{1, 1}, {1, 1}, {1, 1}};
  KrxOptions o;
  o.subsample = 3;
  CHECK_THROWS_AS(krx_fit(x, o), DataError);
  CHECK_NOTHROW(krx_fit(x, opts(3, 1.0, 1.0)));
}

TEST_CASE("krx_fit: factor reconstructs the regularized system")
{
  const Matrix x = gaussian_sample({50, 0}, 50, 2, 1.0);
  const KrxModel sq = krx_fit(x, opts(50, 1.0, 1e-2, KrxRidge::squared_gram));
  // Reconstruct against the support order.
  const Matrix ks = oracle::gauss_gram(sq.support, sq.support, 1.0);
  const Matrix expect_sq = oracle::add_ridge(oracle::matmul(ks, ks), 1e-2);
  CHECK(testutil::max_abs_diff(sq.gram_factor.reconstruct().values(), expect_sq.values()) < 1e-8);
  const KrxModel fs = krx_fit(x, opts(50, 1.0, 1e-2));
  const Matrix expect_fs = oracle::add_ridge(oracle::gauss_gram(fs.support, fs.support, 1.0), 1e-2);
  CHECK(testutil::max_abs_diff(fs.gram_factor.reconstruct().values(), expect_fs.values()) < 1e-8);
}

TEST_CASE("krx_fit: argument checks")
{
  const Matrix x = testutil::random_matrix(3, 10, 2);
  CHECK_THROWS_AS(krx_fit(x, opts(11, 1.0, 1e-2)), std::invalid_argument);
  CHECK_THROWS_AS(krx_fit(x, opts(1, 1.0, 1e-2)), std::invalid_argument);
  CHECK_THROWS_AS(krx_fit(x, opts(5, 1.0, -1.0)), std::invalid_argument);
  CHECK_THROWS_AS(krx_fit(x, opts(5, 1.0, 0.0)), std::invalid_argument);
  CHECK_NOTHROW(krx_fit(x, opts(5, 1.0, 0.0, KrxRidge::squared_gram)));
}

TEST_CASE("krx_score: single support point gives 1 / (1 + ridge)")
{
  // Two identical rows so N = 2 is allowed; both modes reduce to one point.
  const Matrix s{{0.3, -0.7}};
  for (const double ridge : {0.5, 1e-2}) {
    // squared_gram on one point: 1 / (1 + ridge).
    KrxModel m{
      s, 1.0, std::make_shared<GaussianKernel>(1.0), spd_factorize(Matrix{{1.0}}, ridge), ridge,
      KrxRidge::squared_gram, {}};
    CHECK(krx_score(m, s)[0] == doctest::Approx(1.0 / (1.0 + ridge)).epsilon(1e-14));
    // feature_space on one point: (1 - 1/(1+ridge)) / ridge = 1 / (1 + ridge).
    m.ridge_mode = KrxRidge::feature_space;
    CHECK(krx_score(m, s)[0] == doctest::Approx(1.0 / (1.0 + ridge)).epsilon(1e-12));
  }
}

TEST_CASE("krx_score: a far point has vanishing k*")
{
  const Matrix x = testutil::random_matrix(4, 20, 2);
  const Matrix far{{1e4, -1e4}};
  const KrxModel sq = krx_fit(x, opts(20, 1.0, 1e-2, KrxRidge::squared_gram));
  CHECK(krx_score(sq, far)[0] == 0.0);
  // Feature-space form: k* = 0 leaves k(x, x) / ridge.
  const KrxModel fs = krx_fit(x, opts(20, 1.0, 1e-2));
  CHECK(krx_score(fs, far)[0] == doctest::Approx(1.0 / 1e-2));
}

TEST_CASE("krx_score matches the explicit-inverse oracles")
{
  for (std::size_t d = 1; d <= 3; ++d) {
    for (const std::size_t n : {5, 12, 20}) {
      const auto seed = static_cast<std::uint32_t>(10 * d + n);
      const Matrix x = testutil::random_matrix(seed, n, d);
      const Matrix t = testutil::random_matrix(seed + 1, 33, d, 1.5);
      for (const double ridge : {1e-2, 0.3}) {
        const KrxModel sq = krx_fit(x, opts(n, 0.9, ridge, KrxRidge::squared_gram));
        const auto o_sq = oracle::krx_squared_gram(sq.support, 0.9, ridge, t);
        CHECK(testutil::max_rel_diff(krx_score(sq, t), o_sq) < 1e-8);
        const KrxModel fs = krx_fit(x, opts(n, 0.9, ridge));
        const auto o_fs = oracle::krx_feature_space(fs.support, 0.9, ridge, t);
        CHECK(testutil::max_rel_diff(krx_score(fs, t), o_fs) < 1e-8);
      }
    }
  }
}

TEST_CASE("krx_score: non-negative, translation and permutation invariant")
{
  const Matrix x = testutil::random_matrix(5, 40, 3);
  const Matrix t = testutil::random_matrix(6, 60, 3, 2.0);
  for (const auto mode : {KrxRidge::feature_space, KrxRidge::squared_gram}) {
    const KrxModel m = krx_fit(x, opts(40, 1.1, 1e-2, mode));
    const auto s = krx_score(m, t);
    for (const double v : s) {
      CHECK(v >= 0.0);
      CHECK(std::isfinite(v));
    }

    Matrix xs = x;
    Matrix ts = t;
    for (auto * mat : {&xs, &ts}) {
      for (std::size_t i = 0; i < mat->rows(); ++i) {
        (*mat)(i, 0) += 3.0;
        (*mat)(i, 1) -= 1.5;
      }
    }
    const auto shifted = krx_score(krx_fit(xs, opts(40, 1.1, 1e-2, mode)), ts);
    CHECK(testutil::max_abs_diff(shifted, s) <= 1e-10 * std::max(1.0, *std::max_element(s.begin(), s.end())));

    KrxModel perm = m;
    std::vector<std::size_t> idx(40);
    std::iota(idx.begin(), idx.end(), 0);
    std::rotate(idx.begin(), idx.begin() + 13, idx.end());
    perm.support = m.support.gather_rows(idx);
    const Matrix kp = oracle::gauss_gram(perm.support, perm.support, 1.1);
    const Matrix sys = mode == KrxRidge::squared_gram ? oracle::matmul(kp, kp) : kp;
    perm.gram_factor = spd_factorize(sys, 1e-2);
    CHECK(testutil::max_rel_diff(krx_score(perm, t), s) < 1e-8);
  }
}

TEST_CASE("krx_score: zero ridge squared-Gram form checked only against the oracle")
{
  const Matrix x = testutil::random_matrix(7, 6, 2, 2.0);
  const KrxModel m = krx_fit(x, opts(6, 1.0, 0.0, KrxRidge::squared_gram));
  const auto s = krx_score(m, m.support);
  const auto o = oracle::krx_squared_gram(m.support, 1.0, 0.0, m.support);
  CHECK(testutil::max_rel_diff(s, o) < 1e-6);
}

TEST_CASE("krx: seeded subsample, thread invariance, dimension checks")
{
  const Matrix x = testutil::random_matrix(8, 300, 2);
  KrxOptions o = opts(60, 1.0, 1e-2);
  o.rng = {3, 0};
  const KrxModel a = krx_fit(x, o);
  const KrxModel b = krx_fit(x, o);
  CHECK(a.support == b.support);
  CHECK(a.rng_used == RngSpec{3, 0});
  o.rng = {4, 0};
  CHECK_FALSE(krx_fit(x, o).support == a.support);
  std::vector<double> s1;
  std::vector<double> s4;
  {
    ScopedThreadCount tc(1);
    s1 = krx_score(a, x);
  }
  {
    ScopedThreadCount tc(4);
    s4 = krx_score(a, x);
  }
  CHECK(s1 == s4);
  CHECK_THROWS_AS(krx_score(a, Matrix(2, 3)), DimensionError);
}

TEST_CASE("krx: median sigma resolved on the support, phases timed")
{
  const Matrix x = testutil::random_matrix(9, 100, 2);
  KrxOptions o;
  o.subsample = 30;
  o.rng = {1, 0};
  PhaseTimer t;
  const KrxModel m = krx_fit(x, o, &t);
  CHECK(m.sigma == median_lengthscale(m.support, kDefaultMaxPairs, {1, streams::pairs}));
  krx_score(m, x, &t);
  CHECK(t.recorded(Phase::transform));
  CHECK(t.recorded(Phase::inversion));
  CHECK(t.recorded(Phase::detection));
  CHECK_FALSE(t.recorded(Phase::covariance));
  o.ridge_mode = KrxRidge::squared_gram;
  PhaseTimer t2;
  krx_fit(x, o, &t2);
  CHECK(t2.recorded(Phase::covariance));
}
