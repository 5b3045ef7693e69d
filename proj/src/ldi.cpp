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

#include "ldikit/ldi.hpp"

#include <algorithm>

#include "ldikit/errors.hpp"

namespace ldikit {

Ldi::Ldi(int width, int height, std::vector<std::uint32_t> offsets,
         std::vector<LdiSample> samples)
    : width_(width), height_(height), offsets_(std::move(offsets)),
      samples_(std::move(samples)) {
    if (offsets_.size() != static_cast<size_t>(width_) * height_ + 1)
        throw DimensionError("Ldi: offset table size mismatch");
    if (offsets_.back() != samples_.size())
        throw DimensionError("Ldi: sample array size mismatch");
}

int Ldi::max_samples() const {
    int m = 0;
    for (size_t p = 0; p + 1 < offsets_.size(); ++p)
        m = std::max(m, static_cast<int>(offsets_[p + 1] - offsets_[p]));
    return m;
}

RgbadImage Ldi::rank_image(int rank) const {
    RgbadImage out(width_, height_);
    for (int y = 0; y < height_; ++y) {
        for (int x = 0; x < width_; ++x) {
            const auto list = samples_at(x, y);
            if (rank < static_cast<int>(list.size())) {
                const LdiSample& s = list[static_cast<size_t>(rank)];
                out.set_pixel(x, y, s.rgba[0], s.rgba[1], s.rgba[2], s.rgba[3], s.depth);
            }
        }
    }
    return out;
}

Ldi ldi_from_stack(const LayerStack& stack, float alpha_min) {
    stack.check_dimensions();
    const int w = stack.width();
    const int h = stack.height();
    const int layers = stack.layer_count();
    const size_t pixels = static_cast<size_t>(w) * h;

    std::vector<std::uint32_t> offsets(pixels + 1, 0);
    for (int l = 0; l < layers; ++l) {
        const RgbadImage& img = stack.layer_image(l);
        for (size_t p = 0; p < pixels; ++p) {
            if (img.valid.data()[p] && img.a.data()[p] >= alpha_min) ++offsets[p + 1];
        }
    }
    for (size_t p = 0; p < pixels; ++p) offsets[p + 1] += offsets[p];

    std::vector<LdiSample> samples(offsets.back());
    std::vector<std::uint32_t> cursor(offsets.begin(), offsets.end() - 1);
    // Layers are visited in pooling order, so within a pixel the insertion
    // order is already the tie-break order; a stable sort by depth then
    // yields the documented ordering.
    for (int l = 0; l < layers; ++l) {
        const RgbadImage& img = stack.layer_image(l);
        for (size_t p = 0; p < pixels; ++p) {
            if (!img.valid.data()[p] || img.a.data()[p] < alpha_min) continue;
            LdiSample s;
            s.rgba = {img.r.data()[p], img.g.data()[p], img.b.data()[p], img.a.data()[p]};
            s.depth = img.depth.data()[p];
            s.layer = static_cast<std::uint16_t>(l);
            samples[cursor[p]++] = s;
        }
    }
    for (size_t p = 0; p < pixels; ++p) {
        std::stable_sort(samples.begin() + offsets[p], samples.begin() + offsets[p + 1],
                         [](const LdiSample& a, const LdiSample& b) {
                             return a.depth < b.depth;
                         });
    }
    return Ldi(w, h, std::move(offsets), std::move(samples));
}

RgbadImage first_layer(const Ldi& ldi) {
    return ldi.rank_image(0);
}

} // namespace ldikit
