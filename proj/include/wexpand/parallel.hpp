/**
 * Copyright 2026 The wexpand Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace wexpand {

/// Worker cap: hardware concurrency, clamped by the W_EXPANDER_THREADS
/// environment variable when set to a smaller positive value.
inline int worker_count() {
  const unsigned hw = std::thread::hardware_concurrency();
  int cap = hw > 0 ? static_cast<int>(hw) : 1;
  if (const char* s = std::getenv("W_EXPANDER_THREADS")) {
    const int v = std::atoi(s);
    if (v >= 1 && v < cap) cap = v;
  }
  return cap;
}

/// Runs fn(i) for i in [0, count).  Each index must write only its own output
/// slot, which keeps results independent of the thread schedule.
template <typename Fn>
void parallel_for(std::size_t count, Fn&& fn) {
  const int workers = worker_count();
  if (workers <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  const std::size_t pool_size =
      std::min<std::size_t>(static_cast<std::size_t>(workers), count);
  pool.reserve(pool_size);
  for (std::size_t w = 0; w < pool_size; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1))
        fn(i);
    });
  for (auto& t : pool) t.join();
}

}  // namespace wexpand
