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

// AVX2 kernel variants. This translation unit is compiled with -mavx2 (and
// nothing more); callers must check cpu_has_avx2() before dispatching here.
// FMA contraction is disabled for the whole project so the fixed-order
// float kernels match the scalar reference bitwise.

#include "kernels_internal.hpp"

#if LDIKIT_HAVE_AVX2_BUILD

#include <immintrin.h>

#include <cmath>
#include <limits>

namespace ldikit::kernels {

namespace {

const __m256d kSignMaskPd = _mm256_set1_pd(-0.0);

inline __m256d abs_pd(__m256d v) { return _mm256_andnot_pd(kSignMaskPd, v); }

// Four Neumaier-compensated double lanes. Lane sums are reduced with a
// scalar compensated pass in fixed lane order, so results are deterministic
// for a given input (they differ from the scalar backend only by lane
// reassociation, ~1e-15 relative).
struct CompensatedSum4 {
    __m256d sum = _mm256_setzero_pd();
    __m256d comp = _mm256_setzero_pd();

    inline void add(__m256d v) {
        const __m256d t = _mm256_add_pd(sum, v);
        const __m256d ge = _mm256_cmp_pd(abs_pd(sum), abs_pd(v), _CMP_GE_OQ);
        const __m256d ca = _mm256_add_pd(_mm256_sub_pd(sum, t), v);
        const __m256d cb = _mm256_add_pd(_mm256_sub_pd(v, t), sum);
        comp = _mm256_add_pd(comp, _mm256_blendv_pd(cb, ca, ge));
        sum = t;
    }

    double reduce(double scalar_tail_sum, double scalar_tail_comp) const {
        alignas(32) double s[4];
        alignas(32) double c[4];
        _mm256_store_pd(s, sum);
        _mm256_store_pd(c, comp);
        double total = scalar_tail_sum;
        double totalc = scalar_tail_comp;
        for (int lane = 0; lane < 4; ++lane) {
            const double v = s[lane];
            const double t = total + v;
            if (std::abs(total) >= std::abs(v))
                totalc += (total - t) + v;
            else
                totalc += (v - t) + total;
            total = t;
            totalc += c[lane];
        }
        return total + totalc;
    }
};

struct ScalarComp {
    double sum = 0.0;
    double comp = 0.0;
    inline void add(double v) {
        const double t = sum + v;
        if (std::abs(sum) >= std::abs(v))
            comp += (sum - t) + v;
        else
            comp += (v - t) + sum;
        sum = t;
    }
};

// 4 mask bytes -> 4 all-ones/all-zeros double lanes.
inline __m256d mask4_pd(const std::uint8_t* m) {
    std::uint32_t word;
    __builtin_memcpy(&word, m, 4);
    const __m128i bytes = _mm_cvtsi32_si128(static_cast<int>(word));
    const __m128i m32 = _mm_cvtepu8_epi32(bytes);
    const __m128i nz = _mm_cmpgt_epi32(m32, _mm_setzero_si128());
    return _mm256_castsi256_pd(_mm256_cvtepi32_epi64(nz));
}

inline __m256d load4_pd(const float* p) { return _mm256_cvtps_pd(_mm_loadu_ps(p)); }

double sum_abs_diff_avx2(const float* a, const float* b, size_t n) {
    CompensatedSum4 acc;
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        acc.add(abs_pd(_mm256_sub_pd(load4_pd(a + i), load4_pd(b + i))));
    }
    ScalarComp tail;
    for (; i < n; ++i)
        tail.add(std::abs(static_cast<double>(a[i]) - static_cast<double>(b[i])));
    return acc.reduce(tail.sum, tail.comp);
}

double sum_abs_diff_weighted_avx2(const float* a, const float* b, const float* w,
                                  size_t n) {
    CompensatedSum4 acc;
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d d = abs_pd(_mm256_sub_pd(load4_pd(a + i), load4_pd(b + i)));
        acc.add(_mm256_mul_pd(load4_pd(w + i), d));
    }
    ScalarComp tail;
    for (; i < n; ++i)
        tail.add(static_cast<double>(w[i]) *
                 std::abs(static_cast<double>(a[i]) - static_cast<double>(b[i])));
    return acc.reduce(tail.sum, tail.comp);
}

double sum_sq_diff_avx2(const float* a, const float* b, size_t n) {
    CompensatedSum4 acc;
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d d = _mm256_sub_pd(load4_pd(a + i), load4_pd(b + i));
        acc.add(_mm256_mul_pd(d, d));
    }
    ScalarComp tail;
    for (; i < n; ++i) {
        const double d = static_cast<double>(a[i]) - static_cast<double>(b[i]);
        tail.add(d * d);
    }
    return acc.reduce(tail.sum, tail.comp);
}

double sum_abs_diff_masked_avx2(const float* a, const float* b, const std::uint8_t* m,
                                size_t n) {
    CompensatedSum4 acc;
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d d = abs_pd(_mm256_sub_pd(load4_pd(a + i), load4_pd(b + i)));
        acc.add(_mm256_and_pd(d, mask4_pd(m + i)));
    }
    ScalarComp tail;
    for (; i < n; ++i) {
        if (m[i])
            tail.add(std::abs(static_cast<double>(a[i]) - static_cast<double>(b[i])));
    }
    return acc.reduce(tail.sum, tail.comp);
}

double sum_sq_diff_masked_avx2(const float* a, const float* b, const std::uint8_t* m,
                               size_t n) {
    CompensatedSum4 acc;
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d d = _mm256_sub_pd(load4_pd(a + i), load4_pd(b + i));
        acc.add(_mm256_and_pd(_mm256_mul_pd(d, d), mask4_pd(m + i)));
    }
    ScalarComp tail;
    for (; i < n; ++i) {
        if (m[i]) {
            const double d = static_cast<double>(a[i]) - static_cast<double>(b[i]);
            tail.add(d * d);
        }
    }
    return acc.reduce(tail.sum, tail.comp);
}

double sum_masked_avx2(const float* v, const std::uint8_t* m, size_t n) {
    CompensatedSum4 acc;
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        acc.add(_mm256_and_pd(load4_pd(v + i), mask4_pd(m + i)));
    }
    ScalarComp tail;
    for (; i < n; ++i) {
        if (m[i]) tail.add(static_cast<double>(v[i]));
    }
    return acc.reduce(tail.sum, tail.comp);
}

void argmin_depth_row_avx2(const float* const* depths, const float* const* alphas,
                           const std::uint8_t* const* valids, int layer_count,
                           float alpha_min, int n, std::int16_t* out) {
    const __m256 amin = _mm256_set1_ps(alpha_min);
    const __m256 inf = _mm256_set1_ps(std::numeric_limits<float>::infinity());
    int i = 0;
    for (; i + 8 <= n; i += 8) {
        __m256 best_depth = inf;
        __m256i best_index = _mm256_set1_epi32(-1);
        for (int l = 0; l < layer_count; ++l) {
            const __m256 d = _mm256_loadu_ps(depths[l] + i);
            const __m256 al = _mm256_loadu_ps(alphas[l] + i);
            const __m128i vb =
                _mm_loadl_epi64(reinterpret_cast<const __m128i*>(valids[l] + i));
            const __m256i v32 = _mm256_cvtepu8_epi32(vb);
            const __m256 valid_mask = _mm256_castsi256_ps(
                _mm256_cmpgt_epi32(v32, _mm256_setzero_si256()));
            const __m256 alpha_ok = _mm256_cmp_ps(al, amin, _CMP_GE_OQ);
            const __m256 lt = _mm256_cmp_ps(d, best_depth, _CMP_LT_OQ);
            const __m256 take = _mm256_and_ps(_mm256_and_ps(valid_mask, alpha_ok), lt);
            best_depth = _mm256_blendv_ps(best_depth, d, take);
            best_index = _mm256_blendv_epi8(best_index, _mm256_set1_epi32(l),
                                            _mm256_castps_si256(take));
        }
        const __m128i lo = _mm256_castsi256_si128(best_index);
        const __m128i hi = _mm256_extracti128_si256(best_index, 1);
        _mm_storeu_si128(reinterpret_cast<__m128i*>(out + i), _mm_packs_epi32(lo, hi));
    }
    for (; i < n; ++i) {
        std::int16_t best = -1;
        float best_depth = 0.f;
        for (int l = 0; l < layer_count; ++l) {
            if (!valids[l][i]) continue;
            if (alphas[l][i] < alpha_min) continue;
            const float d = depths[l][i];
            if (best < 0 || d < best_depth) {
                best = static_cast<std::int16_t>(l);
                best_depth = d;
            }
        }
        out[i] = best;
    }
}

void conv3x3_abs_row_avx2(const float* row0, const float* row1, const float* row2,
                          const float* k, int n, float* out) {
    const __m256 sign_mask = _mm256_set1_ps(-0.f);
    __m256 kv[9];
    for (int j = 0; j < 9; ++j) kv[j] = _mm256_set1_ps(k[j]);
    int i = 0;
    for (; i + 8 <= n; i += 8) {
        __m256 acc = _mm256_mul_ps(kv[0], _mm256_loadu_ps(row0 + i));
        acc = _mm256_add_ps(acc, _mm256_mul_ps(kv[1], _mm256_loadu_ps(row0 + i + 1)));
        acc = _mm256_add_ps(acc, _mm256_mul_ps(kv[2], _mm256_loadu_ps(row0 + i + 2)));
        acc = _mm256_add_ps(acc, _mm256_mul_ps(kv[3], _mm256_loadu_ps(row1 + i)));
        acc = _mm256_add_ps(acc, _mm256_mul_ps(kv[4], _mm256_loadu_ps(row1 + i + 1)));
        acc = _mm256_add_ps(acc, _mm256_mul_ps(kv[5], _mm256_loadu_ps(row1 + i + 2)));
        acc = _mm256_add_ps(acc, _mm256_mul_ps(kv[6], _mm256_loadu_ps(row2 + i)));
        acc = _mm256_add_ps(acc, _mm256_mul_ps(kv[7], _mm256_loadu_ps(row2 + i + 1)));
        acc = _mm256_add_ps(acc, _mm256_mul_ps(kv[8], _mm256_loadu_ps(row2 + i + 2)));
        _mm256_storeu_ps(out + i, _mm256_andnot_ps(sign_mask, acc));
    }
    for (; i < n; ++i) {
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

const KernelTable& avx2_table() {
    static const KernelTable t{
        sum_abs_diff_avx2,
        sum_abs_diff_weighted_avx2,
        sum_sq_diff_avx2,
        sum_abs_diff_masked_avx2,
        sum_sq_diff_masked_avx2,
        sum_masked_avx2,
        argmin_depth_row_avx2,
        conv3x3_abs_row_avx2,
    };
    return t;
}

bool cpu_has_avx2() { return __builtin_cpu_supports("avx2"); }

} // namespace ldikit::kernels

#endif // LDIKIT_HAVE_AVX2_BUILD
