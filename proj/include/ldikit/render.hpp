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

#include <map>
#include <set>
#include <string>

#include "ldikit/compose.hpp"
#include "ldikit/ldi.hpp"

namespace ldikit {

struct WarpConfig {
    /// Depth margin a new splat must win by to displace an existing one.
    double z_test_epsilon = 1e-4;
    /// Maximum depth spread among neighbors for crack interpolation.
    double fill_depth_tolerance = 0.05;
    int max_fill_passes = 2;
};

struct WarpStats {
    long written = 0;
    long dropped_out_of_bounds = 0;
    long dropped_behind_camera = 0;

    void add(const WarpStats& o) {
        written += o.written;
        dropped_out_of_bounds += o.dropped_out_of_bounds;
        dropped_behind_camera += o.dropped_behind_camera;
    }
};

/// Forward-warps one layer into `target`. Every valid source pixel is
/// unprojected at its depth, moved by relative_pose (source-camera to
/// target-camera coordinates) and re-projected; the sample lands on the
/// nearest target pixel when it is in bounds and in front of the camera.
/// A landed sample is written when the target pixel is empty or the new
/// depth undercuts the stored one by more than z_test_epsilon; otherwise
/// the earlier (smaller row-major source index) sample stays, making the
/// result independent of traversal scheduling. Color and depth are copied,
/// never interpolated.
WarpStats warp_layer(const RgbadImage& layer, const Camera& camera,
                     const Pose& relative_pose, RgbadImage& target,
                     const WarpConfig& config = {});

/// Sequential LDI view synthesis: depth-rank k of the LDI is warped only
/// into pixels still empty after ranks 0..k-1, then crack filling runs.
/// Pixels no rank reaches stay invalid.
RgbadImage synthesize_view(const Ldi& ldi, const Camera& camera,
                           const Pose& relative_pose, const WarpConfig& config = {},
                           WarpStats* stats = nullptr);

/// Fills one-pixel discretization cracks: an invalid pixel with at least
/// three valid 4-neighbors whose depth spread is within
/// fill_depth_tolerance receives the mean of those neighbors. Runs up to
/// max_fill_passes simultaneous passes; larger holes (true dis-occlusions)
/// are left invalid.
RgbadImage fill_cracks(const RgbadImage& image, const WarpConfig& config = {});

/// Minimum depth pooling over the stack with every instance of the given
/// classes deleted; the layout is always retained. Unknown class ids
/// throw UnknownClassError.
ComposeResult remove_objects(const LayerStack& stack, const std::set<int>& class_ids,
                             const std::map<int, std::string>& class_table,
                             float alpha_min = 0.5f);

} // namespace ldikit
