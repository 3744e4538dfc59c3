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

#ifndef RXKIT_RNG_HPP_
#define RXKIT_RNG_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace rxkit
{

/// Seed plus stream id. Identical specs produce identical sequences; distinct
/// stream ids under one seed address disjoint counter ranges.
struct RngSpec
{
  std::uint64_t seed = 0;
  std::uint32_t stream = 0;

  RngSpec with_stream(std::uint32_t s) const { return {seed, s}; }
  friend bool operator==(const RngSpec &, const RngSpec &) = default;
};

/// Stream ids used by the library.
namespace streams
{
inline constexpr std::uint32_t basis = 1;
inline constexpr std::uint32_t subsample = 2;
inline constexpr std::uint32_t pairs = 3;
inline constexpr std::uint32_t scene = 4;
inline constexpr std::uint32_t scene_layout = 5;
inline constexpr std::uint32_t grid_cells = 0x100;  // + cell index
}  // namespace streams

/// Philox4x32-10 block function. Counter words 0-1 hold a 64-bit block
/// index, word 2 the stream id.
std::array<std::uint32_t, 4> philox4x32(
  std::array<std::uint32_t, 4> counter, std::array<std::uint32_t, 2> key);

/// Sequential view over one (seed, stream) sequence.
class Rng
{
public:
  explicit Rng(RngSpec spec) : spec_(spec) {}

  std::uint64_t next_u64();
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Uniform integer on [0, bound). bound must be > 0.
  std::uint64_t uniform_index(std::uint64_t bound);
  /// Standard normal draw.
  double normal();

  /// Random access to the two 64-bit words of block `index`.
  static std::array<std::uint64_t, 2> block(RngSpec spec, std::uint64_t index);

  const RngSpec & spec() const noexcept { return spec_; }

private:
  RngSpec spec_;
  std::uint64_t block_ = 0;
  std::array<std::uint64_t, 2> buffer_{};
  int used_ = 2;
  bool has_spare_normal_ = false;
  double spare_normal_ = 0.0;
};

/// Standard normal value number `index` of the (seed, stream) sequence.
/// Entry 2k and 2k+1 share Philox block k (Box-Muller pair).
double normal_at(RngSpec spec, std::uint64_t index);

/// First `count` items of a seeded uniform permutation of [0, n)
/// (partial Fisher-Yates).
std::vector<std::size_t> sample_without_replacement(
  std::size_t n, std::size_t count, RngSpec spec);

}  // namespace rxkit

#endif  // RXKIT_RNG_HPP_
