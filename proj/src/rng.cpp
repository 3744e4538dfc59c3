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

#include "rxkit/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace rxkit
{

std::array<std::uint32_t, 4> philox4x32(
  std::array<std::uint32_t, 4> ctr, std::array<std::uint32_t, 2> key)
{
  constexpr std::uint64_t kMul0 = 0xD2511F53;
  constexpr std::uint64_t kMul1 = 0xCD9E8D57;
  constexpr std::uint32_t kWeyl0 = 0x9E3779B9;
  constexpr std::uint32_t kWeyl1 = 0xBB67AE85;
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = kMul0 * ctr[0];
    const std::uint64_t p1 = kMul1 * ctr[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const auto lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const auto lo1 = static_cast<std::uint32_t>(p1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kWeyl0;
    key[1] += kWeyl1;
  }
  return ctr;
}

std::array<std::uint64_t, 2> Rng::block(RngSpec spec, std::uint64_t index)
{
  const auto out = philox4x32(
    {static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32), spec.stream, 0},
    {static_cast<std::uint32_t>(spec.seed), static_cast<std::uint32_t>(spec.seed >> 32)});
  return {
    (static_cast<std::uint64_t>(out[1]) << 32) | out[0],
    (static_cast<std::uint64_t>(out[3]) << 32) | out[2]};
}

std::uint64_t Rng::next_u64()
{
  if (used_ == 2) {
    buffer_ = block(spec_, block_++);
    used_ = 0;
  }
  return buffer_[used_++];
}

namespace
{

double to_unit(std::uint64_t bits) { return static_cast<double>(bits >> 11) * 0x1.0p-53; }

// Box-Muller on one pair of 64-bit words; u1 is shifted into (0, 1].
std::array<double, 2> box_muller(std::uint64_t a, std::uint64_t b)
{
  const double u1 = to_unit(a) + 0x1.0p-53;
  const double u2 = to_unit(b);
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  return {radius * std::cos(angle), radius * std::sin(angle)};
}

}  // namespace

double Rng::uniform() { return to_unit(next_u64()); }

std::uint64_t Rng::uniform_index(std::uint64_t bound)
{
  if (bound == 0) {
    throw std::invalid_argument("uniform_index: bound must be positive");
  }
  // Lemire's multiply-shift with rejection of the biased low range.
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    const unsigned __int128 m = static_cast<unsigned __int128>(next_u64()) * bound;
    if (static_cast<std::uint64_t>(m) >= threshold) {
      return static_cast<std::uint64_t>(m >> 64);
    }
  }
}

double Rng::normal()
{
  if (has_spare_normal_) {
    has_spare_normal_ = false;
    return spare_normal_;
  }
  const std::uint64_t a = next_u64();
  const std::uint64_t b = next_u64();
  const auto pair = box_muller(a, b);
  spare_normal_ = pair[1];
  has_spare_normal_ = true;
  return pair[0];
}

double normal_at(RngSpec spec, std::uint64_t index)
{
  const auto words = Rng::block(spec, index / 2);
  return box_muller(words[0], words[1])[index % 2];
}

std::vector<std::size_t> sample_without_replacement(
  std::size_t n, std::size_t count, RngSpec spec)
{
  if (count > n) {
    throw std::invalid_argument("sample_without_replacement: count exceeds population");
  }
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) {
    perm[i] = i;
  }
  Rng rng(spec);
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.uniform_index(n - i));
    std::swap(perm[i], perm[j]);
  }
  perm.resize(count);
  return perm;
}

}  // namespace rxkit
