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

#ifndef RXKIT_SRC_BINARY_IO_HPP_
#define RXKIT_SRC_BINARY_IO_HPP_

#include <bit>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "rxkit/error.hpp"

namespace rxkit::detail
{

inline std::uint64_t to_little_endian(std::uint64_t v)
{
  if constexpr (std::endian::native == std::endian::little) {
    return v;
  } else {
    std::uint64_t out = 0;
    for (int i = 0; i < 8; ++i) {
      out = (out << 8) | ((v >> (8 * i)) & 0xFF);
    }
    return out;
  }
}

inline void write_le_doubles(std::ostream & os, std::span<const double> values)
{
  std::vector<char> buf(values.size() * 8);
  for (std::size_t i = 0; i < values.size(); ++i) {
    const std::uint64_t bits = to_little_endian(std::bit_cast<std::uint64_t>(values[i]));
    std::memcpy(buf.data() + 8 * i, &bits, 8);
  }
  os.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

inline std::vector<double> read_le_doubles(std::istream & is, std::size_t count, const std::string & what)
{
  std::vector<char> buf(count * 8);
  is.read(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (static_cast<std::size_t>(is.gcount()) != buf.size()) {
    throw DataError(
      what + ": expected " + std::to_string(count) + " values, found " +
      std::to_string(static_cast<std::size_t>(is.gcount()) / 8));
  }
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::uint64_t bits = 0;
    std::memcpy(&bits, buf.data() + 8 * i, 8);
    out[i] = std::bit_cast<double>(to_little_endian(bits));
  }
  return out;
}

/// True if nothing but end-of-file remains.
inline bool at_end(std::istream & is) { return is.peek() == std::char_traits<char>::eof(); }

}  // namespace rxkit::detail

#endif  // RXKIT_SRC_BINARY_IO_HPP_
