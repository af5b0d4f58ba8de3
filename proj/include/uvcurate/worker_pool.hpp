// Copyright 2026 The uvcurate Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Bounded pool that runs independent tasks concurrently but hands their
// results over strictly in task order.

#pragma once

#include <algorithm>
#include <condition_variable>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

namespace uvcurate {

/// Runs work(i) for i in [0, n) on up to `workers` threads and calls
/// commit(i, result) for i = 0, 1, ... in order. Commits never overlap. At
/// most `window` results wait for commit at any time, so memory stays
/// bounded even when an early task is slow. The first exception thrown by a
/// task or a commit stops new tasks and is rethrown once all threads finish.
template <typename R>
void OrderedParallel(int workers, size_t n, const std::function<R(size_t)>& work,
                     const std::function<void(size_t, R&&)>& commit, size_t window = 0) {
  if (n == 0) return;
  const size_t threads = std::min<size_t>(static_cast<size_t>(std::max(1, workers)), n);
  if (window == 0) window = 4 * threads;

  std::mutex mu;
  std::condition_variable cv;
  std::vector<std::optional<R>> ready(n);
  size_t next = 0;       // next task to claim
  size_t committed = 0;  // tasks [0, committed) are committed
  std::exception_ptr failure;

  auto run = [&] {
    while (true) {
      size_t i;
      {
        std::unique_lock lock(mu);
        cv.wait(lock, [&] { return failure || next >= n || next < committed + window; });
        if (failure || next >= n) return;
        i = next++;
      }
      try {
        R result = work(i);
        std::lock_guard lock(mu);
        if (failure) return;
        ready[i].emplace(std::move(result));
        while (committed < n && ready[committed]) {
          commit(committed, std::move(*ready[committed]));
          ready[committed].reset();
          ++committed;
        }
      } catch (...) {
        std::lock_guard lock(mu);
        if (!failure) failure = std::current_exception();
      }
      cv.notify_all();
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(threads - 1);
  for (size_t t = 1; t < threads; ++t) pool.emplace_back(run);
  run();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace uvcurate
