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

#include "ldikit/image.hpp"

#include <cmath>

namespace ldikit {

void RgbadImage::check() const {
    for (const auto* p : channel_planes()) {
        if (p->width() != width() || p->height() != height())
            throw DimensionError("RgbadImage: channel size mismatch");
    }
    require_same_size(valid, r, "RgbadImage");
    const size_t n = r.size();
    for (size_t i = 0; i < n; ++i) {
        const float cr = r.data()[i], cg = g.data()[i], cb = b.data()[i],
                    ca = a.data()[i], cd = depth.data()[i];
        if (!std::isfinite(cr) || !std::isfinite(cg) || !std::isfinite(cb) ||
            !std::isfinite(ca) || !std::isfinite(cd))
            throw GeometryError("RgbadImage: non-finite channel value");
        if (valid.data()[i]) {
            if (!(cd > 0.f)) throw GeometryError("RgbadImage: valid pixel with depth <= 0");
            if (ca < 0.f || ca > 1.f) throw GeometryError("RgbadImage: alpha outside [0,1]");
        } else {
            if (cr != 0.f || cg != 0.f || cb != 0.f || ca != 0.f || cd != 0.f)
                throw GeometryError("RgbadImage: invalid pixel not zeroed");
        }
    }
}

} // namespace ldikit
