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

#pragma once

#include <functional>

namespace ldikit {

/// Caps the number of worker threads used by parallel_rows. 0 restores the
/// hardware default. Thread count must never affect results: parallel
/// sections write disjoint rows and reductions combine per-row partials in
/// row order.
void set_max_threads(int n);
int max_threads();

/// Runs fn(y) for y in [0, height), split into contiguous row blocks across
/// the worker threads. Falls back to a plain loop when height is small or a
/// single thread is configured.
void parallel_rows(int height, const std::function<void(int)>& fn);

} // namespace ldikit
