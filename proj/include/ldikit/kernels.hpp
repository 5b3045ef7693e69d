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

#include <cstddef>
#include <cstdint>
#include <string>

namespace ldikit::kernels {

// Data-parallel inner loops shared by the compose/loss/metric operators.
// Every kernel has a scalar reference implementation and, where the host
// CPU supports it, an AVX2 variant selected at runtime. Selection rules:
//
//  - argmin_depth_row and conv3x3_abs_row are bit-exact across backends
//    (comparisons and fixed-order float arithmetic only).
//  - The sum_* reductions accumulate in compensated double precision; the
//    vector variants reassociate lanes, so backends agree to ~1e-15
//    relative, not bitwise. Within one backend results are deterministic.

enum class Backend {
    kScalar,
    kAvx2,
};

struct KernelTable {
    // Sum of |a[i] - b[i]|.
    double (*sum_abs_diff)(const float* a, const float* b, size_t n);
    // Sum of w[i] * |a[i] - b[i]|.
    double (*sum_abs_diff_weighted)(const float* a, const float* b, const float* w,
                                    size_t n);
    // Sum of (a[i] - b[i])^2.
    double (*sum_sq_diff)(const float* a, const float* b, size_t n);
    // Masked variants; mask entries are 0/nonzero bytes.
    double (*sum_abs_diff_masked)(const float* a, const float* b, const std::uint8_t* m,
                                  size_t n);
    double (*sum_sq_diff_masked)(const float* a, const float* b, const std::uint8_t* m,
                                 size_t n);
    // Sum of v[i] over mask.
    double (*sum_masked)(const float* v, const std::uint8_t* m, size_t n);
    // Per-pixel argmin of depth across layers. A layer is a candidate at
    // pixel i when valids[l][i] != 0 and alphas[l][i] >= alpha_min; among
    // candidates the smallest depth wins and ties keep the lowest layer
    // index. out[i] = winning layer index or -1.
    void (*argmin_depth_row)(const float* const* depths, const float* const* alphas,
                             const std::uint8_t* const* valids, int layer_count,
                             float alpha_min, int n, std::int16_t* out);
    // out[i] = |sum_{r,c} k[3r+c] * row_r[i+c]| for r,c in 0..2, accumulated
    // left to right in float. row pointers are pre-padded: row_r[0] maps to
    // source column i-1.
    void (*conv3x3_abs_row)(const float* row0, const float* row1, const float* row2,
                            const float* k, int n, float* out);
};

bool backend_supported(Backend backend);

/// Forces a backend; throws ConfigError when the CPU lacks it.
void set_backend(Backend backend);

Backend active_backend();
std::string backend_name(Backend backend);

const KernelTable& table();
const KernelTable& table_for(Backend backend);

// Convenience forwarders through the active table.
inline double sum_abs_diff(const float* a, const float* b, size_t n) {
    return table().sum_abs_diff(a, b, n);
}
inline double sum_abs_diff_weighted(const float* a, const float* b, const float* w,
                                    size_t n) {
    return table().sum_abs_diff_weighted(a, b, w, n);
}
inline double sum_sq_diff(const float* a, const float* b, size_t n) {
    return table().sum_sq_diff(a, b, n);
}
inline double sum_abs_diff_masked(const float* a, const float* b, const std::uint8_t* m,
                                  size_t n) {
    return table().sum_abs_diff_masked(a, b, m, n);
}
inline double sum_sq_diff_masked(const float* a, const float* b, const std::uint8_t* m,
                                 size_t n) {
    return table().sum_sq_diff_masked(a, b, m, n);
}
inline double sum_masked(const float* v, const std::uint8_t* m, size_t n) {
    return table().sum_masked(v, m, n);
}

} // namespace ldikit::kernels
