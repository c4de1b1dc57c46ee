// Copyright 2026 The fairprice Authors
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

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace fairprice {

/// Worker count: hardware concurrency capped by FAIRPRICE_THREADS.
inline std::size_t worker_count() {
  std::size_t n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("FAIRPRICE_THREADS")) {
    try {
      const long cap = std::stol(env);
      if (cap >= 1) n = std::min<std::size_t>(n, static_cast<std::size_t>(cap));
    } catch (...) {
    }
  }
  return n;
}

/// Runs body(begin, end, chunk) over contiguous chunks of [0, n) and returns the
/// per-chunk results in chunk order, so reductions are order-deterministic
/// regardless of the number of workers.
template <typename T, typename Body>
std::vector<T> parallel_chunks(std::size_t n, Body body, std::size_t chunks = 0) {
  if (chunks == 0) chunks = std::max<std::size_t>(1, std::min<std::size_t>(64, n));
  chunks = std::max<std::size_t>(1, std::min(chunks, std::max<std::size_t>(n, 1)));
  std::vector<T> out(chunks);
  std::vector<std::exception_ptr> errors(chunks);
  const std::size_t workers = std::min(worker_count(), chunks);
  auto run = [&](std::size_t c) {
    const std::size_t lo = n * c / chunks;
    const std::size_t hi = n * (c + 1) / chunks;
    try {
      out[c] = body(lo, hi);
    } catch (...) {
      errors[c] = std::current_exception();
    }
  };
  auto rethrow = [&] {
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  };
  if (workers <= 1) {
    for (std::size_t c = 0; c < chunks; ++c) run(c);
    rethrow();
    return out;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t c = w; c < chunks; c += workers) run(c);
    });
  }
  for (auto& t : pool) t.join();
  rethrow();
  return out;
}

}  // namespace fairprice
