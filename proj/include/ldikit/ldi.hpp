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

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "ldikit/layers.hpp"

namespace ldikit {

struct LdiSample {
    std::array<float, 4> rgba{};
    float depth = 0.f;
    /// Index of the originating layer in pooling order (layout last).
    std::uint16_t layer = 0;

    friend bool operator==(const LdiSample&, const LdiSample&) = default;
};

/// Layered depth image: per pixel, the list of surface samples along the
/// viewing ray sorted near-to-far. Stored in CSR form (prefix offsets plus
/// a flat sample array).
class Ldi {
public:
    Ldi() = default;
    Ldi(int width, int height, std::vector<std::uint32_t> offsets,
        std::vector<LdiSample> samples);

    int width() const { return width_; }
    int height() const { return height_; }

    int sample_count(int x, int y) const {
        const size_t p = static_cast<size_t>(y) * width_ + x;
        return static_cast<int>(offsets_[p + 1] - offsets_[p]);
    }

    std::span<const LdiSample> samples_at(int x, int y) const {
        const size_t p = static_cast<size_t>(y) * width_ + x;
        return {samples_.data() + offsets_[p], offsets_[p + 1] - offsets_[p]};
    }

    size_t total_samples() const { return samples_.size(); }

    /// Largest per-pixel sample count.
    int max_samples() const;

    /// The depth-rank `rank` sample of every pixel as an RGBA-D raster;
    /// pixels with fewer samples are invalid.
    RgbadImage rank_image(int rank) const;

    const std::vector<std::uint32_t>& offsets() const { return offsets_; }
    const std::vector<LdiSample>& samples() const { return samples_; }

    friend bool operator==(const Ldi&, const Ldi&) = default;

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint32_t> offsets_; // size width*height + 1
    std::vector<LdiSample> samples_;
};

/// Arranges a layer stack into an LDI. Per pixel, all samples that are
/// valid and pass the alpha threshold are sorted ascending by depth; equal
/// depths keep the smaller layer index, with the layout ordered after the
/// instances. The same alpha_min must be used here and in min_depth_pool
/// for the two to agree on the first layer.
Ldi ldi_from_stack(const LayerStack& stack, float alpha_min = 0.5f);

/// First (nearest) sample of every pixel; invalid where the list is empty.
RgbadImage first_layer(const Ldi& ldi);

} // namespace ldikit
