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

#include <cmath>
#include <cstdint>

#include "ldikit/layers.hpp"

namespace ldikit {

/// Output of minimum depth pooling: the recomposed front image plus the
/// per-pixel argmin layer index (kNone where no layer qualifies).
struct ComposeResult {
    static constexpr std::int16_t kNone = -1;

    RgbadImage image;
    Plane<std::int16_t> index_map;
};

/// Per pixel, among layers that are valid and whose alpha passes
/// alpha_min, selects the one with minimal depth and copies its RGBA-D.
/// Ties keep the smaller instance index; the layout (ordered last) loses
/// ties to instances.
ComposeResult min_depth_pool(const LayerStack& stack, float alpha_min = 0.5f);

/// m_l(p) = (index_map(p) == layer_index).
Mask front_mask(const ComposeResult& result, int layer_index);

/// Depth map prior (e.g. a degraded first-layer depth) used as the
/// alignment target for per-layer displacement.
struct DepthPrior {
    Plane<float> depth;
    Mask valid;

    void check() const;
};

namespace detail {

template <typename T>
inline void masked_mean_accum(const Mask& m, const Plane<T>& v, double& sum,
                              double& comp, long& count) {
    // Neumaier-compensated, row-major order.
    for (size_t i = 0; i < m.size(); ++i) {
        if (!m.data()[i]) continue;
        ++count;
        const double x = static_cast<double>(v.data()[i]);
        const double t = sum + x;
        if (std::abs(sum) >= std::abs(x))
            comp += (sum - t) + x;
        else
            comp += (x - t) + sum;
        sum = t;
    }
}

} // namespace detail

/// Masked-mean depth offset: mean of gt over m minus mean of pred over m.
/// Throws EmptyMaskError when m selects no pixel.
template <typename TA, typename TB>
double depth_displacement(const Mask& m, const Plane<TA>& gt, const Plane<TB>& pred) {
    require_same_size(m, gt, "depth_displacement");
    require_same_size(m, pred, "depth_displacement");
    double sg = 0.0, cg = 0.0, sp = 0.0, cp = 0.0;
    long ng = 0, np = 0;
    detail::masked_mean_accum(m, gt, sg, cg, ng);
    detail::masked_mean_accum(m, pred, sp, cp, np);
    if (ng == 0) throw EmptyMaskError("depth_displacement: empty mask");
    return (sg + cg) / static_cast<double>(ng) - (sp + cp) / static_cast<double>(np);
}

/// Layer depth shifted by delta on valid pixels. Results driven below zero
/// are clamped to zero and counted. Kept in double so that the
/// displacement closure (apply then measure gives zero) holds to machine
/// precision.
struct DisplacedDepth {
    Plane<double> depth;
    long clamped_count = 0;
};

template <typename T>
DisplacedDepth apply_displacement(const Plane<T>& depth, const Mask& valid,
                                  double delta) {
    require_same_size(valid, depth, "apply_displacement");
    DisplacedDepth out;
    out.depth = Plane<double>(depth.width(), depth.height(), 0.0);
    for (size_t i = 0; i < depth.size(); ++i) {
        if (!valid.data()[i]) continue;
        double d = static_cast<double>(depth.data()[i]) + delta;
        if (d < 0.0) {
            d = 0.0;
            ++out.clamped_count;
        }
        out.depth.data()[i] = d;
    }
    return out;
}

/// Mean absolute depth difference over the valid set. Throws
/// EmptyMaskError on an empty mask.
template <typename TA, typename TB>
double recompose_loss(const Plane<TA>& target_depth, const Plane<TB>& refined_depth,
                      const Mask& valid) {
    require_same_size(valid, target_depth, "recompose_loss");
    require_same_size(valid, refined_depth, "recompose_loss");
    double sum = 0.0, comp = 0.0;
    long count = 0;
    for (size_t i = 0; i < valid.size(); ++i) {
        if (!valid.data()[i]) continue;
        ++count;
        const double d = std::abs(static_cast<double>(target_depth.data()[i]) -
                                  static_cast<double>(refined_depth.data()[i]));
        const double t = sum + d;
        if (std::abs(sum) >= std::abs(d))
            comp += (sum - t) + d;
        else
            comp += (d - t) + sum;
        sum = t;
    }
    if (count == 0) throw EmptyMaskError("recompose_loss: empty valid mask");
    return (sum + comp) / static_cast<double>(count);
}

} // namespace ldikit
