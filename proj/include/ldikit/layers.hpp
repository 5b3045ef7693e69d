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

#include <vector>

#include "ldikit/camera.hpp"
#include "ldikit/image.hpp"

namespace ldikit {

/// One object's layer: the full extent of the object as seen from the
/// view, including parts occluded in the composed image, plus detector
/// style inputs (soft confidence mask, class score vector).
struct InstanceLayer {
    RgbadImage image;
    int class_id = 0;
    /// Probability over the class table; sums to 1 (±1e-6).
    std::vector<double> class_scores;
    /// Pixels where this instance is front-most in the composed view.
    /// Always a subset of image.valid.
    Mask visibility_mask;
    /// Soft detector confidence in [0,1].
    Plane<float> confidence_mask;
    /// True when the instance silhouette touches the image border.
    bool touches_border = false;
    /// Index of the generating object in its SceneSpec, -1 if unknown.
    int source_object = -1;

    void check(size_t class_table_size) const;
};

/// The object-free scene shell (floor, walls, ceiling) merged into a
/// single hole-free layer.
struct LayoutLayer {
    RgbadImage image;
    std::vector<int> structural_classes;

    void check() const;
};

/// Ordered per-object decomposition of one view. Instance order is stable
/// and acts as the tie-break order for depth pooling: equal depths go to
/// the smaller instance index, and the layout loses ties to instances.
struct LayerStack {
    std::vector<InstanceLayer> instances;
    LayoutLayer layout;
    Camera camera;
    Pose view_pose;

    int width() const { return layout.image.width(); }
    int height() const { return layout.image.height(); }

    /// Total layer count including the layout.
    int layer_count() const { return static_cast<int>(instances.size()) + 1; }

    /// Layer index of the layout (instances come first).
    int layout_index() const { return static_cast<int>(instances.size()); }

    /// The image of layer `index` in pooling order.
    const RgbadImage& layer_image(int index) const {
        return index == layout_index() ? layout.image
                                       : instances[static_cast<size_t>(index)].image;
    }

    /// Throws DimensionError unless all rasters share width/height.
    void check_dimensions() const;
};

/// Enlarges every raster by an invalid border band: `top_bottom` rows on
/// top and bottom, `left_right` columns on each side. The principal point
/// shifts with the content (cx += left_right, cy += top_bottom). Defaults
/// are the standard bands of 16 (top/bottom) and 12 (left/right).
LayerStack pad_borders(const LayerStack& stack, int top_bottom = 16, int left_right = 12);

/// Exact inverse of pad_borders for nonnegative bands.
LayerStack crop_borders(const LayerStack& stack, int top_bottom, int left_right);

} // namespace ldikit
