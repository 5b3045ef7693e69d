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

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ldikit/layers.hpp"

namespace ldikit {

/// Procedural surface color evaluated at the 3D hit point in world space,
/// so a surface point keeps its color from every viewpoint.
struct TextureSpec {
    enum class Kind { kSolid, kChecker, kGradient };

    Kind kind = Kind::kSolid;
    Vec3 color_a{0.5, 0.5, 0.5};
    Vec3 color_b{0.5, 0.5, 0.5};
    /// Checker cell edge in meters.
    double cell = 0.5;
    /// Gradient axis (0=x, 1=y, 2=z) and world-coordinate span.
    int axis = 0;
    double lo = 0.0;
    double hi = 1.0;

    static TextureSpec solid(const Vec3& c) {
        TextureSpec t;
        t.color_a = c;
        return t;
    }
    static TextureSpec checker(const Vec3& a, const Vec3& b, double cell);
    static TextureSpec gradient(const Vec3& a, const Vec3& b, int axis, double lo,
                                double hi);

    Vec3 eval(const Vec3& world_point) const;
};

/// Axis-aligned box or sphere, the two primitive shapes of generated
/// scenes. Both have exact analytic ray intersections, which keeps the
/// renderer bit-reproducible.
struct SceneObject {
    enum class Shape { kBox, kSphere };

    Shape shape = Shape::kBox;
    Vec3 center;
    /// Box: half extent per axis. Sphere: x holds the radius.
    Vec3 half_extent{0.5, 0.5, 0.5};
    int class_id = 0;
    TextureSpec texture;

    double radius() const { return half_extent.x; }
    double bounding_radius() const;
};

/// Interior of an axis-aligned box room; the six faces form the layout.
/// Face order: x-min, x-max, y-min (floor), y-max (ceiling), z-min, z-max.
struct RoomSpec {
    Vec3 min_corner;
    Vec3 max_corner{5, 3, 5};
    int floor_class = 0;
    int ceiling_class = 1;
    int wall_class = 2;
    std::array<TextureSpec, 6> face_textures{};

    int face_class(int face) const {
        if (face == 2) return floor_class;
        if (face == 3) return ceiling_class;
        return wall_class;
    }
};

struct SceneSpec {
    RoomSpec room;
    std::vector<SceneObject> objects;
    Camera camera;
    Pose pose; // camera to world
    std::uint64_t seed = 0;
    /// id -> name; class score vectors index the ids in ascending order.
    std::map<int, std::string> class_table;

    void validate() const;

    SceneSpec with_pose(const Pose& p) const {
        SceneSpec s = *this;
        s.pose = p;
        return s;
    }

    SceneSpec without_objects(const std::vector<int>& object_indices) const;
};

struct PosePerturbation {
    double max_translation = 0.3; // meters, per axis
    double max_rotation = 10.0;   // degrees, per Euler angle
};

struct DetectionNoise {
    /// Morphological radius range; negative erodes, positive dilates.
    int radius_min = -2;
    int radius_max = 2;
    /// Box-blur radius applied to the perturbed mask.
    int blur_radius = 2;
    /// Mix factor toward the uniform distribution for class scores.
    double score_smoothing = 0.1;
};

struct GenerationConfig {
    int width = 256;
    int height = 256;
    int min_objects = 2;
    int max_objects = 5;
    std::map<int, std::string> class_table = default_class_table();
    double overlap_threshold = 0.02;
    PosePerturbation pose_perturbation;
    DetectionNoise detection_noise;

    static std::map<int, std::string> default_class_table();
    void validate() const;
};

/// Simulated detector output for one instance.
struct Detection {
    Plane<float> confidence;
    std::vector<double> class_scores;
};

/// Full-scene single-pass render: per pixel the nearest surface among all
/// objects and the room shell, with the layer tie rule (lower object index
/// wins, room loses ties). object_index holds the winning object or
/// kLayoutHit where the room shell is in front.
struct CompositeRender {
    static constexpr std::int16_t kLayoutHit = -1;

    RgbadImage image;
    Plane<std::int16_t> object_index;
};

CompositeRender render_composite(const SceneSpec& scene);

/// Renders object `object_index` alone, in full visibility (parts occluded
/// by other objects included). The visibility mask is the set of pixels
/// where the object is globally front-most.
InstanceLayer render_instance(const SceneSpec& scene, int object_index);

/// Renders the six room faces; hole-free, camera must be inside the room.
LayoutLayer render_layout(const SceneSpec& scene);

/// Per-object layers plus layout for one view. Objects that are completely
/// occluded (empty visibility mask) are dropped from the stack.
LayerStack generate_view(const SceneSpec& scene);

/// Fraction of pixels covered by at least two stack samples.
double overlap_fraction(const LayerStack& stack);

/// True when overlap_fraction(stack) >= threshold.
bool overlap_filter(const LayerStack& stack, double threshold);

/// Random rigid perturbation of a camera-to-world pose, applied in the
/// camera frame. Translation is uniform per axis in ±max_translation;
/// rotation composes uniform Euler angles in ±max_rotation (degrees),
/// drawn in the order tx, ty, tz, yaw, pitch, roll.
Pose perturb_pose(const Pose& pose, const PosePerturbation& config, std::uint64_t seed);

/// Detector-style degradation of the ground-truth visibility masks: a
/// seeded square erosion or dilation followed by a box blur, plus class
/// scores smoothed toward uniform. Deterministic in seed.
std::vector<Detection> simulate_detections(const LayerStack& stack,
                                           const DetectionNoise& config,
                                           std::uint64_t seed);

/// Draws a random scene (room, camera, objects, textures) for the given
/// config. Pure function of (config, seed).
SceneSpec sample_scene(const GenerationConfig& config, std::uint64_t seed);

} // namespace ldikit
