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

#include "ldikit/compose.hpp"

#include <vector>

#include "ldikit/kernels.hpp"
#include "ldikit/parallel.hpp"

namespace ldikit {

ComposeResult min_depth_pool(const LayerStack& stack, float alpha_min) {
    if (alpha_min < 0.f || alpha_min > 1.f)
        throw ConfigError("min_depth_pool: alpha_min outside [0,1]");
    stack.check_dimensions();

    const int w = stack.width();
    const int h = stack.height();
    const int layers = stack.layer_count();

    ComposeResult out;
    out.image = RgbadImage(w, h);
    out.index_map = Plane<std::int16_t>(w, h, ComposeResult::kNone);

    const auto& kt = kernels::table();
    parallel_rows(h, [&](int y) {
        std::vector<const float*> depth_rows(static_cast<size_t>(layers));
        std::vector<const float*> alpha_rows(static_cast<size_t>(layers));
        std::vector<const std::uint8_t*> valid_rows(static_cast<size_t>(layers));
        for (int l = 0; l < layers; ++l) {
            const RgbadImage& img = stack.layer_image(l);
            depth_rows[static_cast<size_t>(l)] = img.depth.row(y);
            alpha_rows[static_cast<size_t>(l)] = img.a.row(y);
            valid_rows[static_cast<size_t>(l)] = img.valid.row(y);
        }
        kt.argmin_depth_row(depth_rows.data(), alpha_rows.data(), valid_rows.data(),
                            layers, alpha_min, w, out.index_map.row(y));
        for (int x = 0; x < w; ++x) {
            const std::int16_t idx = out.index_map.at(x, y);
            if (idx == ComposeResult::kNone) continue;
            const RgbadImage& img = stack.layer_image(idx);
            out.image.set_pixel(x, y, img.r.at(x, y), img.g.at(x, y), img.b.at(x, y),
                                img.a.at(x, y), img.depth.at(x, y));
        }
    });
    return out;
}

Mask front_mask(const ComposeResult& result, int layer_index) {
    Mask m(result.index_map.width(), result.index_map.height(), 0);
    for (size_t i = 0; i < m.size(); ++i)
        m.data()[i] = result.index_map.data()[i] == layer_index ? 1 : 0;
    return m;
}

void DepthPrior::check() const {
    require_same_size(valid, depth, "DepthPrior");
    for (size_t i = 0; i < depth.size(); ++i) {
        const float d = depth.data()[i];
        if (!std::isfinite(d)) throw GeometryError("DepthPrior: non-finite depth");
        if (valid.data()[i] && d < 0.f)
            throw GeometryError("DepthPrior: negative depth on valid pixel");
    }
}

} // namespace ldikit
