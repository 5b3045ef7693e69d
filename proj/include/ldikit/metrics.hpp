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

#include <span>
#include <vector>

#include "ldikit/image.hpp"
#include "ldikit/ldi.hpp"

namespace ldikit {

/// Mean absolute difference over the mask, channels averaged; `scale`
/// converts units before reporting (255 for color, 1 for depth in meters).
double mpe(std::span<const Plane<float>* const> a, std::span<const Plane<float>* const> b,
           const Mask& mask, double scale = 1.0);

/// Root mean squared difference over the mask, same conventions as mpe.
double rmse(std::span<const Plane<float>* const> a,
            std::span<const Plane<float>* const> b, const Mask& mask, double scale = 1.0);

// RGB on the 0-255 scale (alpha excluded), matching the usual reporting
// convention for color errors.
double color_mpe(const RgbadImage& a, const RgbadImage& b, const Mask& mask);
double color_rmse(const RgbadImage& a, const RgbadImage& b, const Mask& mask);
double depth_mpe(const RgbadImage& a, const RgbadImage& b, const Mask& mask);
double depth_rmse(const RgbadImage& a, const RgbadImage& b, const Mask& mask);

struct SsimConfig {
    int window = 8; // uniform square window, stride 1
    double c1 = (0.01 * 255.0) * (0.01 * 255.0);
    double c2 = (0.03 * 255.0) * (0.03 * 255.0);
};

/// Mean local SSIM over all window positions, channels averaged, computed
/// on the 0-255 scale. Throws DimensionError when the image is smaller
/// than the window.
double ssim(std::span<const Plane<float>* const> a,
            std::span<const Plane<float>* const> b, const SsimConfig& config = {});

/// SSIM over the RGB channels of two images.
double ssim_color(const RgbadImage& a, const RgbadImage& b, const SsimConfig& config = {});

/// Per-layer comparison of two LDIs with the migration rule: where the
/// predicted LDI has no sample at depth rank l, the nearest shallower
/// sample is carried forward; layers are compared only where the ground
/// truth has novel content at rank l (its depth differs from rank l-1 by
/// more than novel_depth_eps). Rank 1 is compared wherever ground truth
/// has a sample. Layers with no evaluable pixels are omitted.
struct LayerEval {
    int layer = 0; // 1-based depth rank
    long pixel_count = 0;
    double color_mpe = 0.0;
    double color_rmse = 0.0;
    double depth_mpe = 0.0;
    double depth_rmse = 0.0;
};

std::vector<LayerEval> per_layer_eval(const Ldi& pred, const Ldi& gt, int max_layers,
                                      double novel_depth_eps = 1e-6);

/// histogram[l-1] = fraction of LDIs that contain at least one pixel with
/// >= l samples, up to the deepest LDI in the batch.
std::vector<double> layer_histogram(std::span<const Ldi> ldis);

} // namespace ldikit
