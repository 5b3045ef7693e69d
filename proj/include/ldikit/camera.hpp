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

#include "ldikit/vecmath.hpp"

namespace ldikit {

/// Pinhole intrinsics. Pixel (u, v) spans [u, u+1) x [v, v+1) with its
/// center at (u + 0.5, v + 0.5); all projection math uses pixel centers.
/// Camera frame: +x right, +y down, +z forward (optical axis). Depth is
/// z-depth, the distance along the optical axis, not ray length.
struct Camera {
    double fx = 0.0, fy = 0.0;
    double cx = 0.0, cy = 0.0;
    int width = 0, height = 0;

    void validate() const;

    /// Camera-space point of pixel (u, v) at z-depth d.
    Vec3 unproject(double u, double v, double d) const {
        return {d * (u + 0.5 - cx) / fx, d * (v + 0.5 - cy) / fy, d};
    }

    /// Continuous pixel coordinates of a camera-space point (z > 0).
    /// Returned coordinates are in the center convention, i.e. a point on
    /// the ray of pixel (u, v) maps back near (u + 0.5, v + 0.5).
    void project(const Vec3& p, double& u, double& v) const {
        u = fx * p.x / p.z + cx;
        v = fy * p.y / p.z + cy;
    }

    /// Unit-z ray direction through the center of pixel (u, v); with this
    /// parameterization the ray parameter t equals z-depth.
    Vec3 pixel_ray(int u, int v) const {
        return {(u + 0.5 - cx) / fx, (v + 0.5 - cy) / fy, 1.0};
    }
};

/// Rigid camera-to-world transform: x_world = rotation * x_cam + translation.
struct Pose {
    Mat3 rotation;
    Vec3 translation;

    static Pose identity() { return Pose{}; }

    Vec3 apply(const Vec3& p) const { return rotation * p + translation; }

    Pose inverse() const {
        const Mat3 rt = rotation.transposed();
        return {rt, -(rt * translation)};
    }

    /// this ∘ other: (this * other).apply(p) == this.apply(other.apply(p)).
    Pose compose(const Pose& other) const {
        return {rotation * other.rotation, rotation * other.translation + translation};
    }

    /// Throws GeometryError unless rotation is orthonormal with det 1
    /// within tol.
    void validate(double tol = 1e-9) const;
};

/// Transform taking source-camera coordinates to target-camera coordinates
/// for two camera-to-world poses: inverse(target) ∘ source.
Pose relative_pose(const Pose& source, const Pose& target);

} // namespace ldikit
