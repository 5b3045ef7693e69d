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
#include <vector>

#include "ldikit/errors.hpp"

namespace ldikit {

/// Row-major single-channel raster. Channels are stored planar throughout
/// the library so the arithmetic kernels can run over contiguous rows.
template <typename T>
class Plane {
public:
    Plane() = default;
    Plane(int width, int height, T fill = T{})
        : width_(width),
          height_(height),
          data_(static_cast<size_t>(width) * static_cast<size_t>(height), fill) {}

    int width() const { return width_; }
    int height() const { return height_; }
    size_t size() const { return data_.size(); }
    bool empty() const { return data_.empty(); }

    T& at(int x, int y) { return data_[static_cast<size_t>(y) * width_ + x]; }
    const T& at(int x, int y) const { return data_[static_cast<size_t>(y) * width_ + x]; }

    T* row(int y) { return data_.data() + static_cast<size_t>(y) * width_; }
    const T* row(int y) const { return data_.data() + static_cast<size_t>(y) * width_; }

    T* data() { return data_.data(); }
    const T* data() const { return data_.data(); }

    void fill(T v) { data_.assign(data_.size(), v); }

    bool same_size(const Plane& o) const {
        return width_ == o.width_ && height_ == o.height_;
    }

    friend bool operator==(const Plane& a, const Plane& b) {
        return a.width_ == b.width_ && a.height_ == b.height_ && a.data_ == b.data_;
    }

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<T> data_;
};

/// Boolean raster stored as 0/1 bytes.
using Mask = Plane<std::uint8_t>;

inline long mask_count(const Mask& m) {
    long n = 0;
    for (size_t i = 0; i < m.size(); ++i) n += m.data()[i] != 0;
    return n;
}

/// One RGBA + metric-depth layer with a per-pixel validity flag. Color and
/// alpha live in [0,1]; depth is meters and strictly positive wherever
/// valid. Invalid pixels hold the zero sentinel in every channel so that
/// equality checks are bit-exact; consumers must branch on `valid`, never
/// on sentinel values.
struct RgbadImage {
    Plane<float> r, g, b, a;
    Plane<float> depth;
    Mask valid;

    RgbadImage() = default;
    RgbadImage(int width, int height)
        : r(width, height), g(width, height), b(width, height), a(width, height),
          depth(width, height), valid(width, height) {}

    int width() const { return r.width(); }
    int height() const { return r.height(); }

    std::array<const Plane<float>*, 4> rgba_planes() const { return {&r, &g, &b, &a}; }
    std::array<Plane<float>*, 4> rgba_planes() { return {&r, &g, &b, &a}; }

    /// Channel order: r, g, b, a, depth.
    std::array<const Plane<float>*, 5> channel_planes() const {
        return {&r, &g, &b, &a, &depth};
    }
    std::array<Plane<float>*, 5> channel_planes() { return {&r, &g, &b, &a, &depth}; }

    bool same_size(const RgbadImage& o) const { return r.same_size(o.r); }

    void set_pixel(int x, int y, float pr, float pg, float pb, float pa, float pd) {
        r.at(x, y) = pr;
        g.at(x, y) = pg;
        b.at(x, y) = pb;
        a.at(x, y) = pa;
        depth.at(x, y) = pd;
        valid.at(x, y) = 1;
    }

    void clear_pixel(int x, int y) {
        r.at(x, y) = 0.f;
        g.at(x, y) = 0.f;
        b.at(x, y) = 0.f;
        a.at(x, y) = 0.f;
        depth.at(x, y) = 0.f;
        valid.at(x, y) = 0;
    }

    /// Throws if the invariants above are violated.
    void check() const;

    friend bool operator==(const RgbadImage& x, const RgbadImage& y) {
        return x.r == y.r && x.g == y.g && x.b == y.b && x.a == y.a &&
               x.depth == y.depth && x.valid == y.valid;
    }
};

inline void require_same_size(const RgbadImage& a, const RgbadImage& b,
                              const char* what) {
    if (!a.same_size(b)) throw DimensionError(std::string(what) + ": size mismatch");
}

template <typename T, typename U>
void require_same_size(const Plane<T>& a, const Plane<U>& b, const char* what) {
    if (a.width() != b.width() || a.height() != b.height())
        throw DimensionError(std::string(what) + ": size mismatch");
}

} // namespace ldikit
