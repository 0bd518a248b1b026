// Copyright 2026 The ffslab Authors.
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

// Block-parallel loops whose results never depend on the worker count.
//
// A range [0, n) is cut into fixed-size blocks; workers claim blocks from a
// shared counter and write one result per block. Callers merge the per-block
// results in block order, so any reduction is performed in the same order
// whatever the number of threads.

#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace ffslab {

namespace detail {
inline std::atomic<unsigned>& thread_setting() {
  static std::atomic<unsigned> n{1};
  return n;
}
}  // namespace detail

/// Worker cap used by every parallel loop in the library (default 1).
inline unsigned thread_count() { return detail::thread_setting().load(); }
inline void set_thread_count(unsigned n) { detail::thread_setting().store(std::max(1u, n)); }

inline constexpr std::uint64_t kDefaultBlock = 4096;

/// Calls fn(begin, end) on each block of [0, n) and returns the results in
/// block order.
template <class T, class Fn>
std::vector<T> map_blocks(std::uint64_t n, Fn&& fn, std::uint64_t block = kDefaultBlock) {
  const std::uint64_t blocks = n == 0 ? 0 : (n + block - 1) / block;
  std::vector<T> out(blocks);
  const unsigned workers = static_cast<unsigned>(std::min<std::uint64_t>(thread_count(), blocks));
  if (workers <= 1) {
    for (std::uint64_t b = 0; b < blocks; ++b) out[b] = fn(b * block, std::min(n, (b + 1) * block));
    return out;
  }
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  auto work = [&] {
    for (;;) {
      const std::uint64_t b = next.fetch_add(1);
      if (b >= blocks) return;
      try {
        out[b] = fn(b * block, std::min(n, (b + 1) * block));
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!error) error = std::current_exception();
        next.store(blocks);
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (unsigned i = 1; i < workers; ++i) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
  return out;
}

}  // namespace ffslab
