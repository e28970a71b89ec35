// Copyright 2026 The veil Authors
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

#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace veil {

// Fork-join helper: workers claim items from a shared queue (the CPU
// analogue of persistent GPU threads). Callers must make all writes land in
// item-indexed slots so results do not depend on the worker count.
class ThreadPool {
 public:
  explicit ThreadPool(int worker_count) {
    if (worker_count <= 0) worker_count = int(std::thread::hardware_concurrency());
    workers_ = worker_count > 0 ? worker_count : 1;
  }

  int worker_count() const { return workers_; }

  // fn(item_index, worker_index); worker_index < worker_count().
  template <typename Fn>
  void parallel_for(size_t item_count, Fn&& fn) {
    if (item_count == 0) return;
    if (workers_ == 1 || item_count == 1) {
      for (size_t i = 0; i < item_count; ++i) fn(i, 0);
      return;
    }
    std::atomic<size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto body = [&](int worker) {
      try {
        for (size_t i; (i = next.fetch_add(1, std::memory_order_relaxed)) < item_count;)
          fn(i, worker);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        // Drain the queue so other workers stop quickly.
        next.store(item_count, std::memory_order_relaxed);
      }
    };
    std::vector<std::thread> threads;
    int spawn = int(std::min<size_t>(size_t(workers_), item_count)) - 1;
    threads.reserve(spawn);
    for (int w = 1; w <= spawn; ++w) threads.emplace_back(body, w);
    body(0);
    for (auto& t : threads) t.join();
    if (error) std::rethrow_exception(error);
  }

 private:
  int workers_ = 1;
};

}  // namespace veil
