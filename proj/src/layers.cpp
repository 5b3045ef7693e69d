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

#include "ldikit/layers.hpp"

#include <cmath>
#include <cstring>

namespace ldikit {

namespace {

template <typename T>
Plane<T> pad_plane(const Plane<T>& src, int tb, int lr, T fill) {
    Plane<T> dst(src.width() + 2 * lr, src.height() + 2 * tb, fill);
    for (int y = 0; y < src.height(); ++y) {
        std::memcpy(dst.row(y + tb) + lr, src.row(y),
                    static_cast<size_t>(src.width()) * sizeof(T));
    }
    return dst;
}

template <typename T>
Plane<T> crop_plane(const Plane<T>& src, int tb, int lr) {
    Plane<T> dst(src.width() - 2 * lr, src.height() - 2 * tb);
    for (int y = 0; y < dst.height(); ++y) {
        std::memcpy(dst.row(y), src.row(y + tb) + lr,
                    static_cast<size_t>(dst.width()) * sizeof(T));
    }
    return dst;
}

RgbadImage pad_image(const RgbadImage& src, int tb, int lr) {
    RgbadImage dst;
    dst.r = pad_plane(src.r, tb, lr, 0.f);
    dst.g = pad_plane(src.g, tb, lr, 0.f);
    dst.b = pad_plane(src.b, tb, lr, 0.f);
    dst.a = pad_plane(src.a, tb, lr, 0.f);
    dst.depth = pad_plane(src.depth, tb, lr, 0.f);
    dst.valid = pad_plane(src.valid, tb, lr, std::uint8_t{0});
    return dst;
}

RgbadImage crop_image(const RgbadImage& src, int tb, int lr) {
    RgbadImage dst;
    dst.r = crop_plane(src.r, tb, lr);
    dst.g = crop_plane(src.g, tb, lr);
    dst.b = crop_plane(src.b, tb, lr);
    dst.a = crop_plane(src.a, tb, lr);
    dst.depth = crop_plane(src.depth, tb, lr);
    dst.valid = crop_plane(src.valid, tb, lr);
    return dst;
}

} // namespace

void InstanceLayer::check(size_t class_table_size) const {
    image.check();
    require_same_size(visibility_mask, image.valid, "InstanceLayer");
    require_same_size(confidence_mask, image.r, "InstanceLayer");
    for (size_t i = 0; i < visibility_mask.size(); ++i) {
        if (visibility_mask.data()[i] && !image.valid.data()[i])
            throw GeometryError("InstanceLayer: visible pixel outside object extent");
    }
    if (class_scores.size() != class_table_size)
        throw ConfigError("InstanceLayer: class score vector length mismatch");
    double sum = 0.0;
    for (double s : class_scores) {
        if (s < 0.0) throw ConfigError("InstanceLayer: negative class score");
        sum += s;
    }
    if (std::abs(sum - 1.0) > 1e-6)
        throw ConfigError("InstanceLayer: class scores do not sum to 1");
}

void LayoutLayer::check() const {
    image.check();
    for (size_t i = 0; i < image.valid.size(); ++i) {
        if (!image.valid.data()[i]) throw GeometryError("LayoutLayer: hole in layout");
    }
}

void LayerStack::check_dimensions() const {
    const int w = width(), h = height();
    for (const auto& inst : instances) {
        if (inst.image.width() != w || inst.image.height() != h ||
            inst.visibility_mask.width() != w || inst.visibility_mask.height() != h ||
            inst.confidence_mask.width() != w || inst.confidence_mask.height() != h)
            throw DimensionError("LayerStack: instance raster size mismatch");
    }
}

LayerStack pad_borders(const LayerStack& stack, int top_bottom, int left_right) {
    if (top_bottom < 0 || left_right < 0)
        throw ConfigError("pad_borders: negative pad amount");
    LayerStack out;
    out.instances.reserve(stack.instances.size());
    for (const auto& inst : stack.instances) {
        InstanceLayer p = inst;
        p.image = pad_image(inst.image, top_bottom, left_right);
        p.visibility_mask = pad_plane(inst.visibility_mask, top_bottom, left_right,
                                      std::uint8_t{0});
        p.confidence_mask = pad_plane(inst.confidence_mask, top_bottom, left_right, 0.f);
        out.instances.push_back(std::move(p));
    }
    out.layout.image = pad_image(stack.layout.image, top_bottom, left_right);
    out.layout.structural_classes = stack.layout.structural_classes;
    out.camera = stack.camera;
    out.camera.width += 2 * left_right;
    out.camera.height += 2 * top_bottom;
    out.camera.cx += left_right;
    out.camera.cy += top_bottom;
    out.view_pose = stack.view_pose;
    return out;
}

LayerStack crop_borders(const LayerStack& stack, int top_bottom, int left_right) {
    if (top_bottom < 0 || left_right < 0)
        throw ConfigError("crop_borders: negative pad amount");
    if (stack.width() < 2 * left_right || stack.height() < 2 * top_bottom)
        throw DimensionError("crop_borders: bands exceed image size");
    LayerStack out;
    out.instances.reserve(stack.instances.size());
    for (const auto& inst : stack.instances) {
        InstanceLayer c = inst;
        c.image = crop_image(inst.image, top_bottom, left_right);
        c.visibility_mask = crop_plane(inst.visibility_mask, top_bottom, left_right);
        c.confidence_mask = crop_plane(inst.confidence_mask, top_bottom, left_right);
        out.instances.push_back(std::move(c));
    }
    out.layout.image = crop_image(stack.layout.image, top_bottom, left_right);
    out.layout.structural_classes = stack.layout.structural_classes;
    out.camera = stack.camera;
    out.camera.width -= 2 * left_right;
    out.camera.height -= 2 * top_bottom;
    out.camera.cx -= left_right;
    out.camera.cy -= top_bottom;
    out.view_pose = stack.view_pose;
    return out;
}

} // namespace ldikit
