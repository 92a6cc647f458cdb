// Copyright 2026 The spinreg Authors
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

#ifndef SPINREG_PARALLEL_HPP
#define SPINREG_PARALLEL_HPP

#include <algorithm>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace spinreg {

/// Runs body(i) for i in [0, n) on up to `threads` workers with a static
/// block split. Results must be written to per-index slots so the outcome
/// does not depend on the thread count.
template <class Body>
void parallel_for(std::uint64_t n, int threads, Body &&body) {
    std::uint64_t workers = std::clamp<std::uint64_t>(threads < 1 ? 1 : threads, 1, std::max<std::uint64_t>(n, 1));
    if (workers == 1) {
        for (std::uint64_t i = 0; i < n; ++i) {
            body(i);
        }
        return;
    }
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    for (std::uint64_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            std::uint64_t begin = n * w / workers;
            std::uint64_t end = n * (w + 1) / workers;
            try {
                for (std::uint64_t i = begin; i < end; ++i) {
                    body(i);
                }
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) {
                    failure = std::current_exception();
                }
            }
        });
    }
    for (auto &t : pool) {
        t.join();
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

}  // namespace spinreg

#endif
