//
// Copyright 2026 The ldikit Authors
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
//

#include "ldikit/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <thread>
#include <vector>

namespace ldikit {

namespace {
std::atomic<int> g_max_threads{0};

int effective_threads() {
    int n = g_max_threads.load(std::memory_order_relaxed);
    if (n <= 0) n = static_cast<int>(std::thread::hardware_concurrency());
    return std::max(1, n);
}
} // namespace

void set_max_threads(int n) { g_max_threads.store(n, std::memory_order_relaxed); }

int max_threads() { return effective_threads(); }

void parallel_rows(int height, const std::function<void(int)>& fn) {
    const int threads = std::min(effective_threads(), height);
    if (threads <= 1 || height < 16) {
        for (int y = 0; y < height; ++y) fn(y);
        return;
    }
    std::vector<std::thread> workers;
    workers.reserve(static_cast<size_t>(threads));
    const int rows_per = (height + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
        const int y0 = t * rows_per;
        const int y1 = std::min(height, y0 + rows_per);
        if (y0 >= y1) break;
        workers.emplace_back([&fn, y0, y1] {
            for (int y = y0; y < y1; ++y) fn(y);
        });
    }
    for (auto& w : workers) w.join();
}

} // namespace ldikit
