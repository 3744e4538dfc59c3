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

#include "rxkit/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace rxkit
{
namespace
{

std::atomic<std::size_t> & workers()
{
  static std::atomic<std::size_t> n{std::max<std::size_t>(1, std::thread::hardware_concurrency())};
  return n;
}

}  // namespace

std::size_t thread_count() { return workers().load(); }

void set_thread_count(std::size_t n) { workers().store(std::max<std::size_t>(1, n)); }

void parallel_for(
  std::size_t count, std::size_t grain,
  const std::function<void(std::size_t, std::size_t)> & body)
{
  if (count == 0) {
    return;
  }
  grain = std::max<std::size_t>(1, grain);
  const std::size_t chunks = (count + grain - 1) / grain;
  const std::size_t n_threads = std::min(thread_count(), chunks);
  if (n_threads <= 1) {
    body(0, count);
    return;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&]() {
    for (;;) {
      const std::size_t c = next.fetch_add(1);
      if (c >= chunks) {
        return;
      }
      try {
        body(c * grain, std::min(count, (c + 1) * grain));
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) {
          failure = std::current_exception();
        }
        next.store(chunks);
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(n_threads - 1);
  for (std::size_t t = 1; t < n_threads; ++t) {
    pool.emplace_back(worker);
  }
  worker();
  for (auto & t : pool) {
    t.join();
  }
  if (failure) {
    std::rethrow_exception(failure);
  }
}

}  // namespace rxkit
