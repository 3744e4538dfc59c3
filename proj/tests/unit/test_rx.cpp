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

#include <cmath>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "rxkit/error.hpp"
#include "rxkit/parallel.hpp"
#include "rxkit/rx.hpp"
#include "test_util.hpp"

using namespace rxkit;

namespace
{

const Matrix kFourPoints{{1, 0}, {-1, 0}, {0, 1}, {0, -1}};

}  // namespace

TEST_CASE("rx_fit: four-point example")
{
  std::vector<double> mean;
  const Matrix cov = sample_covariance(kFourPoints, mean);
  CHECK(mean == std::vector<double>{0, 0});
  CHECK(cov == Matrix{{0.5, 0}, {0, 0.5}});
  const RxModel m = rx_fit(kFourPoints, 0.0);
  CHECK(m.mean == std::vector<double>{0, 0});
  CHECK(m.cov_factor.reconstruct()(0, 0) == doctest::Approx(0.5));
  CHECK(m.cov_factor.reconstruct()(0, 1) == 0.0);
  CHECK(m.n_fit == 4);
  CHECK(m.bands() == 2);
}

TEST_CASE("rx_fit: zero variance is rescued by the ridge")
{
  const RxModel m = rx_fit(Matrix{{3, 7}, {3, 7}}, 0.1);
  CHECK(m.mean == std::vector<double>{3, 7});
  const Matrix r = m.cov_factor.reconstruct();
  CHECK(r(0, 0) == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(r(1, 1) == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(r(0, 1) == 0.0);
  CHECK(m.ridge == 0.1);
  CHECK_THROWS_AS(rx_fit(Matrix{{3, 7}, {3, 7}}, 0.0), NumericError);
}

TEST_CASE("rx_fit: covariance matches the two-pass oracle")
{
  const Matrix x = testutil::random_matrix(1, 500, 3, 2.0);
  std::vector<double> mean;
  const Matrix cov = sample_covariance(x, mean);
  CHECK(testutil::max_abs_diff(cov.values(), oracle::covariance(x).values()) < 1e-10);
  CHECK(testutil::max_abs_diff(mean, oracle::column_mean(x)) < 1e-12);
}

TEST_CASE("rx_fit: argument checks")
{
  CHECK_THROWS_AS(rx_fit(Matrix{{1, 2}}, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(rx_fit(kFourPoints, -1.0), std::invalid_argument);
}

TEST_CASE("rx_score: examples")
{
  const RxModel m = rx_fit(kFourPoints, 0.0);
  const auto s = rx_score(m, Matrix{{0, 0}, {1, 1}});
  CHECK(s[0] == 0.0);
  CHECK(s[1] == doctest::Approx(4.0).epsilon(1e-14));
  CHECK_THROWS_AS(rx_score(m, Matrix{{1, 2, 3}}), DimensionError);
  CHECK(rx_score(m, Matrix(0, 2)).empty());
}

TEST_CASE("rx_score: whitened data gives squared distance to the mean")
{
  // Unit covariance: +-e_i scaled so (1/n) sum = I.
  const double r = std::sqrt(3.0);
  const Matrix x{{r, 0, 0}, {-r, 0, 0}, {0, r, 0}, {0, -r, 0}, {0, 0, r}, {0, 0, -r}};
  const RxModel m = rx_fit(x, 0.0);
  const Matrix t = testutil::random_matrix(2, 50, 3);
  const auto s = rx_score(m, t);
  for (std::size_t i = 0; i < t.rows(); ++i) {
    const double d2 = t(i, 0) * t(i, 0) + t(i, 1) * t(i, 1) + t(i, 2) * t(i, 2);
    CHECK(s[i] == doctest::Approx(d2).epsilon(1e-12));
  }
}

TEST_CASE("rx_score matches the explicit-inverse oracle")
{
  for (std::size_t d = 1; d <= 5; ++d) {
    const Matrix x = testutil::random_matrix(static_cast<std::uint32_t>(d), 40, d);
    const Matrix t = testutil::random_matrix(static_cast<std::uint32_t>(10 + d), 77, d, 2.0);
    for (const double ridge : {0.0, 1e-2, 1.0}) {
      const auto s = rx_score(rx_fit(x, ridge), t);
      const auto o = oracle::rx(x, ridge, t);
      CHECK(testutil::max_rel_diff(s, o) < 1e-10);
    }
  }
}

TEST_CASE("rx_score: non-negative, zero at the mean, growing along a ray")
{
  const Matrix x = testutil::random_matrix(3, 100, 4);
  const RxModel m = rx_fit(x, 1e-2);
  for (const double v : rx_score(m, testutil::random_matrix(4, 200, 4, 3.0))) {
    CHECK(v >= 0.0);
  }
  Matrix mu(1, 4);
  for (std::size_t j = 0; j < 4; ++j) {
    mu(0, j) = m.mean[j];
  }
  CHECK(rx_score(m, mu)[0] == doctest::Approx(0.0).epsilon(1e-15));
  const std::vector<double> u{0.3, -1.0, 0.5, 0.2};
  double prev = -1.0;
  for (double t = 0.0; t <= 5.0; t += 0.25) {
    Matrix p(1, 4);
    for (std::size_t j = 0; j < 4; ++j) {
      p(0, j) = m.mean[j] - t * u[j];
    }
    const double s = rx_score(m, p)[0];
    CHECK(s > prev);
    prev = s;
  }
}

TEST_CASE("rx_score is affine invariant without a ridge")
{
  const Matrix x = testutil::random_matrix(5, 80, 3);
  const Matrix t = testutil::random_matrix(6, 30, 3, 2.0);
  const Matrix a{{2, 0.5, 0}, {-1, 1, 0.3}, {0.2, 0, 3}};
  const std::vector<double> b{5, -2, 0.5};
  auto transform = [&](const Matrix & m) {
    Matrix out(m.rows(), 3);
    for (std::size_t i = 0; i < m.rows(); ++i) {
      for (std::size_t r = 0; r < 3; ++r) {
        double s = b[r];
        for (std::size_t c = 0; c < 3; ++c) {
          s += a(r, c) * m(i, c);
        }
        out(i, r) = s;
      }
    }
    return out;
  };
  const auto s1 = rx_score(rx_fit(x, 0.0), t);
  const auto s2 = rx_score(rx_fit(transform(x), 0.0), transform(t));
  CHECK(testutil::max_rel_diff(s2, s1) < 1e-8);
}

TEST_CASE("rx_score is thread-count invariant")
{
  const Matrix x = testutil::random_matrix(7, 300, 5);
  const RxModel m = rx_fit(x, 1e-2);
  std::vector<double> s1;
  std::vector<double> s4;
  {
    ScopedThreadCount tc(1);
    s1 = rx_score(m, x);
  }
  {
    ScopedThreadCount tc(4);
    s4 = rx_score(m, x);
  }
  CHECK(s1 == s4);
}

TEST_CASE("rx phases are timed")
{
  PhaseTimer t;
  const RxModel m = rx_fit(kFourPoints, 1e-2, &t);
  rx_score(m, kFourPoints, &t);
  CHECK(t.recorded(Phase::covariance));
  CHECK(t.recorded(Phase::inversion));
  CHECK(t.recorded(Phase::detection));
  CHECK_FALSE(t.recorded(Phase::transform));
}
