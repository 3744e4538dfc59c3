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
#include <cstdlib>
#include <stdexcept>
#include <string_view>

#include "rxkit/simd/kernels.hpp"

namespace rxkit::simd
{

#if !defined(RXKIT_HAVE_AVX2)
const KernelTable * avx2_kernels() { return nullptr; }
#endif

bool isa_supported(Isa isa)
{
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
#if defined(RXKIT_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
      return avx2_kernels() != nullptr && __builtin_cpu_supports("avx2") &&
             __builtin_cpu_supports("fma");
#else
      return false;
#endif
  }
  return false;
}

namespace
{

const KernelTable * table_for(Isa isa)
{
  return isa == Isa::avx2 ? avx2_kernels() : &scalar_kernels();
}

const KernelTable * detect()
{
  if (const char * env = std::getenv("RXKIT_SIMD")) {
    const std::string_view requested(env);
    if (requested == "scalar") {
      return &scalar_kernels();
    }
    if (requested == "avx2" && isa_supported(Isa::avx2)) {
      return avx2_kernels();
    }
  }
  return isa_supported(Isa::avx2) ? avx2_kernels() : &scalar_kernels();
}

std::atomic<const KernelTable *> & current()
{
  static std::atomic<const KernelTable *> table{detect()};
  return table;
}

}  // namespace

const KernelTable & active() { return *current().load(std::memory_order_acquire); }

void select(Isa isa)
{
  if (!isa_supported(isa)) {
    throw std::invalid_argument("instruction set not supported on this machine");
  }
  current().store(table_for(isa), std::memory_order_release);
}

ScopedIsa::ScopedIsa(Isa isa) : previous_(&active()) { select(isa); }

ScopedIsa::~ScopedIsa() { current().store(previous_, std::memory_order_release); }

}  // namespace rxkit::simd
