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

#ifndef RXKIT_PARALLEL_HPP_
#define RXKIT_PARALLEL_HPP_

#include <cstddef>
#include <functional>

namespace rxkit
{

/// Worker count used by parallel_for. Defaults to the hardware concurrency.
std::size_t thread_count();
void set_thread_count(std::size_t n);

/// Runs body(begin, end) over a static partition of [0, count) into chunks
/// of `grain` items. Every chunk is processed by exactly one worker, so
/// callers that write disjoint outputs per item get results independent of
/// the thread count.
void parallel_for(
  std::size_t count, std::size_t grain,
  const std::function<void(std::size_t, std::size_t)> & body);

/// Restores the previous thread count on scope exit.
class ScopedThreadCount
{
public:
  explicit ScopedThreadCount(std::size_t n) : previous_(thread_count()) { set_thread_count(n); }
  ~ScopedThreadCount() { set_thread_count(previous_); }
  ScopedThreadCount(const ScopedThreadCount &) = delete;
  ScopedThreadCount & operator=(const ScopedThreadCount &) = delete;

private:
  std::size_t previous_;
};

}  // namespace rxkit

#endif  // RXKIT_PARALLEL_HPP_
