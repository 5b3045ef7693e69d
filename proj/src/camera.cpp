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

#include "ldikit/camera.hpp"

#include <cmath>

#include "ldikit/errors.hpp"

namespace ldikit {

Mat3 rotation_x(double angle) {
    const double c = std::cos(angle), s = std::sin(angle);
    Mat3 r;
    r.m = {1, 0, 0, 0, c, -s, 0, s, c};
    return r;
}

Mat3 rotation_y(double angle) {
    const double c = std::cos(angle), s = std::sin(angle);
    Mat3 r;
    r.m = {c, 0, s, 0, 1, 0, -s, 0, c};
    return r;
}

Mat3 rotation_z(double angle) {
    const double c = std::cos(angle), s = std::sin(angle);
    Mat3 r;
    r.m = {c, -s, 0, s, c, 0, 0, 0, 1};
    return r;
}

Mat3 rotation_from_euler(double yaw, double pitch, double roll) {
    return rotation_z(roll) * rotation_x(pitch) * rotation_y(yaw);
}

void Camera::validate() const {
    if (width <= 0 || height <= 0) throw ConfigError("camera: nonpositive image size");
    if (!(fx > 0.0) || !(fy > 0.0)) throw ConfigError("camera: focal lengths must be > 0");
    if (!(cx >= 0.0) || !(cx < width) || !(cy >= 0.0) || !(cy < height))
        throw ConfigError("camera: principal point outside the image");
}

void Pose::validate(double tol) const {
    const Mat3 rtr = rotation.transposed() * rotation;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            const double expect = i == j ? 1.0 : 0.0;
            if (std::abs(rtr(i, j) - expect) > tol)
                throw GeometryError("pose: rotation is not orthonormal");
        }
    }
    if (std::abs(rotation.det() - 1.0) > tol)
        throw GeometryError("pose: rotation determinant is not 1");
    if (!std::isfinite(translation.x) || !std::isfinite(translation.y) ||
        !std::isfinite(translation.z))
        throw GeometryError("pose: non-finite translation");
}

Pose relative_pose(const Pose& source, const Pose& target) {
    return target.inverse().compose(source);
}

} // namespace ldikit
