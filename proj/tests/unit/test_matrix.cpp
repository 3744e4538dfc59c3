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

#include <atomic>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "rxkit/error.hpp"
#include "rxkit/matrix.hpp"
#include "rxkit/parallel.hpp"
#include "rxkit/timing.hpp"

using rxkit::Matrix;

TEST_CASE("matrix construction and access")
{
  const Matrix m{{1, 2, 3}, {4, 5, 6}};
  CHECK(m.rows() == 2);
  CHECK(m.cols() == 3);
  CHECK(m(1, 2) == 6);
  CHECK(m.row(1)[0] == 4);
  CHECK(m.transposed() == Matrix{{1, 4}, {2, 5}, {3, 6}});
  CHECK(Matrix::identity(2) == Matrix{{1, 0}, {0, 1}});
  const std::vector<std::size_t> idx{1, 0, 1};
  CHECK(m.gather_rows(idx) == Matrix{{4, 5, 6}, {1, 2, 3}, {4, 5, 6}});
  CHECK_THROWS(Matrix(2, 2, std::vector<double>{1, 2, 3}));
}

TEST_CASE("multiply")
{
  const Matrix a{{1, 2}, {3, 4}};
  const Matrix b{{5}, {6}};
  CHECK(rxkit::multiply(a, b) == Matrix{{17}, {39}});
  CHECK_THROWS_AS(rxkit::multiply(b, b), rxkit::DimensionError);
}

TEST_CASE("parallel_for covers every index exactly once")
{
  for (const std::size_t threads : {1, 2, 5}) {
    rxkit::ScopedThreadCount tc(threads);
    std::vector<std::atomic<int>> hits(1003);
    rxkit::parallel_for(hits.size(), 17, [&](std::size_t b, std::size_t e) {
      for (std::size_t i = b; i < e; ++i) {
        hits[i].fetch_add(1);
      }
    });
    for (const auto & h : hits) {
      CHECK(h.load() == 1);
    }
  }
}

TEST_CASE("parallel_for propagates exceptions")
{
  rxkit::ScopedThreadCount tc(3);
  CHECK_THROWS_AS(
    rxkit::parallel_for(100, 1, [](std::size_t b, std::size_t) {
      if (b == 42) {
        throw std::runtime_error("boom");
      }
    }),
    std::runtime_error);
}

TEST_CASE("thread count is at least one and scoped")
{
  const std::size_t before = rxkit::thread_count();
  {
    rxkit::ScopedThreadCount tc(0);
    CHECK(rxkit::thread_count() == 1);
  }
  CHECK(rxkit::thread_count() == before);
}

TEST_CASE("phase timer records only touched phases")
{
  rxkit::PhaseTimer t;
  {
    rxkit::PhaseScope s(&t, rxkit::Phase::inversion);
  }
  CHECK(t.recorded(rxkit::Phase::inversion));
  CHECK_FALSE(t.recorded(rxkit::Phase::transform));
  CHECK(t.seconds(rxkit::Phase::inversion) >= 0.0);
  CHECK(rxkit::to_string(rxkit::Phase::covariance) == "covariance");
  rxkit::PhaseScope null_scope(nullptr, rxkit::Phase::detection);
}
