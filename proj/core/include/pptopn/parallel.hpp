//
// Copyright 2026 The pptopn Authors
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
//

#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace pptopn {

/// Splits [0, n) into contiguous chunks, one per worker. Workers receive
/// (begin, end, worker_index); worker 0 runs inline when threads <= 1.
/// Callers are responsible for making the merged result order-insensitive.
inline void run_partitioned(std::size_t n, unsigned threads,
                            const std::function<void(std::size_t, std::size_t, unsigned)>& body) {
    if (threads <= 1 || n < 2) {
        body(0, n, 0);
        return;
    }
    const auto t = static_cast<unsigned>(std::min<std::size_t>(threads, n));
    std::vector<std::thread> pool;
    pool.reserve(t);
    const std::size_t chunk = (n + t - 1) / t;
    for (unsigned w = 0; w < t; ++w) {
        const std::size_t begin = w * chunk;
        const std::size_t end = std::min(n, begin + chunk);
        pool.emplace_back([&body, begin, end, w] { body(begin, end, w); });
    }
    for (auto& th : pool) th.join();
}

}  // namespace pptopn
