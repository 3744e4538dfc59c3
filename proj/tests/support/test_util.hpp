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

#ifndef RXKIT_TESTS_TEST_UTIL_HPP_
#define RXKIT_TESTS_TEST_UTIL_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "rxkit/matrix.hpp"

namespace testutil
{

/// Test-only random data; independent of the library generator.
inline rxkit::Matrix random_matrix(std::uint32_t seed, std::size_t rows, std::size_t cols, double sd = 1.0)
{
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> dist(0.0, sd);
  rxkit::Matrix m(rows, cols);
  for (double & v : m.values()) {
    v = dist(gen);
  }
  return m;
}

inline double max_abs_diff(std::span<const double> a, std::span<const double> b)
{
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    m = std::max(m, std::abs(a[i] - b[i]));
  }
  return m;
}

inline double max_rel_diff(std::span<const double> a, std::span<const double> b)
{
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    m = std::max(m, std::abs(a[i] - b[i]) / std::max(1.0, std::abs(b[i])));
  }
  return m;
}

inline double median(std::vector<double> v)
{
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 == 1 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir
{
public:
  explicit TempDir(const std::string & tag)
  {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("rxkit-test-" + tag + "-" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir()
  {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir &) = delete;
  TempDir & operator=(const TempDir &) = delete;

  const std::filesystem::path & path() const { return path_; }
  std::filesystem::path operator/(const std::string & name) const { return path_ / name; }

private:
  std::filesystem::path path_;
};

inline std::string slurp(const std::filesystem::path & p)
{
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void spit(const std::filesystem::path & p, const std::string & text)
{
  std::ofstream out(p, std::ios::binary);
  out << text;
}

}  // namespace testutil

#endif  // RXKIT_TESTS_TEST_UTIL_HPP_
