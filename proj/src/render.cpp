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

#include "ldikit/render.hpp"

#include <algorithm>
#include <cmath>

namespace ldikit {

WarpStats warp_layer(const RgbadImage& layer, const Camera& camera,
                     const Pose& relative_pose, RgbadImage& target,
                     const WarpConfig& config) {
    require_same_size(layer, target, "warp_layer");
    if (layer.width() != camera.width || layer.height() != camera.height)
        throw DimensionError("warp_layer: layer does not match the camera model");

    WarpStats stats;
    const int w = camera.width;
    const int h = camera.height;
    // Row-major traversal: with the strict z-test below, equal-depth
    // conflicts resolve to the smaller source index.
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (!layer.valid.at(x, y)) continue;
            const double d = static_cast<double>(layer.depth.at(x, y));
            const Vec3 p_src = camera.unproject(x, y, d);
            const Vec3 p_tgt = relative_pose.apply(p_src);
            if (!(p_tgt.z > 0.0)) {
                ++stats.dropped_behind_camera;
                continue;
            }
            double u, v;
            camera.project(p_tgt, u, v);
            // Center convention: the continuous coordinate u lies in pixel
            // floor(u), whose center is nearest.
            const double fu = std::floor(u);
            const double fv = std::floor(v);
            if (fu < 0.0 || fu >= w || fv < 0.0 || fv >= h) {
                ++stats.dropped_out_of_bounds;
                continue;
            }
            const int px = static_cast<int>(fu);
            const int py = static_cast<int>(fv);
            const float new_depth = static_cast<float>(p_tgt.z);
            if (target.valid.at(px, py)) {
                const float old_depth = target.depth.at(px, py);
                if (!(new_depth < old_depth - config.z_test_epsilon)) continue;
            }
            target.set_pixel(px, py, layer.r.at(x, y), layer.g.at(x, y),
                             layer.b.at(x, y), layer.a.at(x, y), new_depth);
            ++stats.written;
        }
    }
    return stats;
}

RgbadImage synthesize_view(const Ldi& ldi, const Camera& camera,
                           const Pose& relative_pose, const WarpConfig& config,
                           WarpStats* stats) {
    RgbadImage target(camera.width, camera.height);
    WarpStats total;
    const int ranks = ldi.max_samples();
    for (int k = 0; k < ranks; ++k) {
        const RgbadImage layer = ldi.rank_image(k);
        RgbadImage scratch(camera.width, camera.height);
        total.add(warp_layer(layer, camera, relative_pose, scratch, config));
        // Sequential hole filling: deeper ranks only land on pixels the
        // nearer ranks left empty.
        for (int y = 0; y < camera.height; ++y) {
            for (int x = 0; x < camera.width; ++x) {
                if (!target.valid.at(x, y) && scratch.valid.at(x, y)) {
                    target.set_pixel(x, y, scratch.r.at(x, y), scratch.g.at(x, y),
                                     scratch.b.at(x, y), scratch.a.at(x, y),
                                     scratch.depth.at(x, y));
                }
            }
        }
    }
    if (stats != nullptr) *stats = total;
    return fill_cracks(target, config);
}

RgbadImage fill_cracks(const RgbadImage& image, const WarpConfig& config) {
    RgbadImage cur = image;
    const int w = image.width();
    const int h = image.height();
    for (int pass = 0; pass < config.max_fill_passes; ++pass) {
        RgbadImage next = cur;
        bool filled_any = false;
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                if (cur.valid.at(x, y)) continue;
                const int nx[4] = {x - 1, x + 1, x, x};
                const int ny[4] = {y, y, y - 1, y + 1};
                int count = 0;
                double sr = 0, sg = 0, sb = 0, sa = 0, sd = 0;
                float dmin = 0.f, dmax = 0.f;
                for (int k = 0; k < 4; ++k) {
                    if (nx[k] < 0 || nx[k] >= w || ny[k] < 0 || ny[k] >= h) continue;
                    if (!cur.valid.at(nx[k], ny[k])) continue;
                    const float nd = cur.depth.at(nx[k], ny[k]);
                    if (count == 0) {
                        dmin = dmax = nd;
                    } else {
                        dmin = std::min(dmin, nd);
                        dmax = std::max(dmax, nd);
                    }
                    sr += cur.r.at(nx[k], ny[k]);
                    sg += cur.g.at(nx[k], ny[k]);
                    sb += cur.b.at(nx[k], ny[k]);
                    sa += cur.a.at(nx[k], ny[k]);
                    sd += nd;
                    ++count;
                }
                if (count < 3) continue;
                if (static_cast<double>(dmax) - static_cast<double>(dmin) >
                    config.fill_depth_tolerance)
                    continue; // depth disagreement: a real dis-occlusion edge
                const double inv = 1.0 / count;
                next.set_pixel(x, y, static_cast<float>(sr * inv),
                               static_cast<float>(sg * inv), static_cast<float>(sb * inv),
                               static_cast<float>(sa * inv), static_cast<float>(sd * inv));
                filled_any = true;
            }
        }
        cur = std::move(next);
        if (!filled_any) break;
    }
    return cur;
}

ComposeResult remove_objects(const LayerStack& stack, const std::set<int>& class_ids,
                             const std::map<int, std::string>& class_table,
                             float alpha_min) {
    for (int id : class_ids) {
        if (class_table.find(id) == class_table.end())
            throw UnknownClassError("remove_objects: unknown class id " +
                                    std::to_string(id));
    }
    LayerStack pruned;
    pruned.camera = stack.camera;
    pruned.view_pose = stack.view_pose;
    pruned.layout = stack.layout;
    for (const auto& inst : stack.instances) {
        if (class_ids.count(inst.class_id) != 0) continue;
        pruned.instances.push_back(inst);
    }
    return min_depth_pool(pruned, alpha_min);
}

} // namespace ldikit
