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

// Scalar reference kernels. These define the semantics the SIMD variants
// are tested against.

#include "kernels_internal.hpp"

#include <cmath>

namespace ldikit::kernels {

namespace {

// Neumaier-compensated accumulator: summation error stays O(eps)
// independent of element count, which the closed-form displacement and
// loss identities rely on.
struct CompensatedSum {
    double sum = 0.0;
    double comp = 0.0;

    void add(double v) {
        const double t = sum + v;
        if (std::abs(sum) >= std::abs(v)) {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }

    double value() const { return sum + comp; }
};

double sum_abs_diff_scalar(const float* a, const float* b, size_t n) {
    CompensatedSum acc;
    for (size_t i = 0; i < n; ++i) {
        acc.add(std::abs(static_cast<double>(a[i]) - static_cast<double>(b[i])));
    }
    return acc.value();
}

double sum_abs_diff_weighted_scalar(const float* a, const float* b, const float* w,
                                    size_t n) {
    CompensatedSum acc;
    for (size_t i = 0; i < n; ++i) {
        acc.add(static_cast<double>(w[i]) *
                std::abs(static_cast<double>(a[i]) - static_cast<double>(b[i])));
    }
    return acc.value();
}

double sum_sq_diff_scalar(const float* a, const float* b, size_t n) {
    CompensatedSum acc;
    for (size_t i = 0; i < n; ++i) {
        const double d = static_cast<double>(a[i]) - static_cast<double>(b[i]);
        acc.add(d * d);
    }
    return acc.value();
}

double sum_abs_diff_masked_scalar(const float* a, const float* b, const std::uint8_t* m,
                                  size_t n) {
    CompensatedSum acc;
    for (size_t i = 0; i < n; ++i) {
        if (m[i])
            acc.add(std::abs(static_cast<double>(a[i]) - static_cast<double>(b[i])));
    }
    return acc.value();
}

double sum_sq_diff_masked_scalar(const float* a, const float* b, const std::uint8_t* m,
                                 size_t n) {
    CompensatedSum acc;
    for (size_t i = 0; i < n; ++i) {
        if (m[i]) {
            const double d = static_cast<double>(a[i]) - static_cast<double>(b[i]);
            acc.add(d * d);
        }
    }
    return acc.value();
}

double sum_masked_scalar(const float* v, const std::uint8_t* m, size_t n) {
    CompensatedSum acc;
    for (size_t i = 0; i < n; ++i) {
        if (m[i]) acc.add(static_cast<double>(v[i]));
    }
    return acc.value();
}

void argmin_depth_row_scalar(const float* const* depths, const float* const* alphas,
                             const std::uint8_t* const* valids, int layer_count,
                             float alpha_min, int n, std::int16_t* out) {
    for (int i = 0; i < n; ++i) {
        std::int16_t best = -1;
        float best_depth = 0.f;
        for (int l = 0; l < layer_count; ++l) {
            if (!valids[l][i]) continue;
            if (alphas[l][i] < alpha_min) continue;
            const float d = depths[l][i];
            // Strict comparison: equal depths keep the earlier layer.
            if (best < 0 || d < best_depth) {
                best = static_cast<std::int16_t>(l);
                best_depth = d;
            }
        }
        out[i] = best;
    }
}

void conv3x3_abs_row_scalar(const float* row0, const float* row1, const float* row2,
                            const float* k, int n, float* out) {
    for (int i = 0; i < n; ++i) {
        // Fixed left-to-right order; the vector variant evaluates the same
        // expression lanewise, so the two backends agree bitwise.
        float acc = k[0] * row0[i];
        acc += k[1] * row0[i + 1];
        acc += k[2] * row0[i + 2];
        acc += k[3] * row1[i];
        acc += k[4] * row1[i + 1];
        acc += k[5] * row1[i + 2];
        acc += k[6] * row2[i];
        acc += k[7] * row2[i + 1];
        acc += k[8] * row2[i + 2];
        out[i] = std::abs(acc);
    }
}

} // namespace

const KernelTable& scalar_table() {
    static const KernelTable t{
        sum_abs_diff_scalar,
        sum_abs_diff_weighted_scalar,
        sum_sq_diff_scalar,
        sum_abs_diff_masked_scalar,
        sum_sq_diff_masked_scalar,
        sum_masked_scalar,
        argmin_depth_row_scalar,
        conv3x3_abs_row_scalar,
    };
    return t;
}

} // namespace ldikit::kernels
