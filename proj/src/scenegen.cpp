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

#include "ldikit/scenegen.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>

#include "ldikit/errors.hpp"
#include "ldikit/ldi.hpp"
#include "ldikit/parallel.hpp"
#include "ldikit/rng.hpp"

namespace ldikit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Minimum forward ray parameter; rejects self-hits at the origin.
constexpr double kTMin = 1e-7;

double clamp01(double v) { return v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v); }

// Nearest forward intersection with an axis-aligned box, +inf on miss.
// When the origin is inside, the exit distance is returned.
double intersect_box(const Vec3& bmin, const Vec3& bmax, const Vec3& o, const Vec3& d) {
    double t_near = -kInf, t_far = kInf;
    for (int axis = 0; axis < 3; ++axis) {
        const double da = d[axis];
        if (std::abs(da) < 1e-15) {
            if (o[axis] < bmin[axis] || o[axis] > bmax[axis]) return kInf;
            continue;
        }
        const double inv = 1.0 / da;
        double t0 = (bmin[axis] - o[axis]) * inv;
        double t1 = (bmax[axis] - o[axis]) * inv;
        if (t0 > t1) std::swap(t0, t1);
        t_near = std::max(t_near, t0);
        t_far = std::min(t_far, t1);
        if (t_near > t_far) return kInf;
    }
    if (t_near > kTMin) return t_near;
    if (t_far > kTMin) return t_far;
    return kInf;
}

double intersect_sphere(const Vec3& center, double radius, const Vec3& o, const Vec3& d) {
    const Vec3 oc = o - center;
    const double a = d.dot(d);
    const double b = 2.0 * oc.dot(d);
    const double c = oc.dot(oc) - radius * radius;
    const double disc = b * b - 4.0 * a * c;
    if (disc < 0.0) return kInf;
    const double s = std::sqrt(disc);
    // Numerically stable pair of roots.
    const double q = -0.5 * (b + std::copysign(s, b));
    double t0 = q / a;
    double t1 = (q == 0.0) ? t0 : c / q;
    if (t0 > t1) std::swap(t0, t1);
    if (t0 > kTMin) return t0;
    if (t1 > kTMin) return t1;
    return kInf;
}

double intersect_object(const SceneObject& obj, const Vec3& o, const Vec3& d) {
    if (obj.shape == SceneObject::Shape::kSphere)
        return intersect_sphere(obj.center, obj.radius(), o, d);
    return intersect_box(obj.center - obj.half_extent, obj.center + obj.half_extent, o, d);
}

// Nearest forward hit among the six interior faces. face = -1 on miss
// (cannot happen for rays cast from strictly inside the room).
struct FaceHit {
    double t = kInf;
    int face = -1;
};

FaceHit intersect_room(const RoomSpec& room, const Vec3& o, const Vec3& d) {
    FaceHit best;
    for (int face = 0; face < 6; ++face) {
        const int axis = face / 2;
        const bool is_min = (face % 2) == 0;
        const double plane = is_min ? room.min_corner[axis] : room.max_corner[axis];
        const double da = d[axis];
        if (std::abs(da) < 1e-15) continue;
        const double t = (plane - o[axis]) / da;
        if (t <= kTMin || t >= best.t) continue;
        const int u_axis = (axis + 1) % 3;
        const int v_axis = (axis + 2) % 3;
        const double pu = o[u_axis] + t * d[u_axis];
        const double pv = o[v_axis] + t * d[v_axis];
        if (pu < room.min_corner[u_axis] || pu > room.max_corner[u_axis]) continue;
        if (pv < room.min_corner[v_axis] || pv > room.max_corner[v_axis]) continue;
        best.t = t;
        best.face = face;
    }
    return best;
}

void shade_into(const TextureSpec& tex, const Vec3& p, RgbadImage& img, int x, int y,
                float depth) {
    const Vec3 c = tex.eval(p);
    img.set_pixel(x, y, static_cast<float>(c.x), static_cast<float>(c.y),
                  static_cast<float>(c.z), 1.f, depth);
}

bool point_in_object(const SceneObject& obj, const Vec3& p) {
    if (obj.shape == SceneObject::Shape::kSphere)
        return (p - obj.center).norm() <= obj.radius();
    const Vec3 lo = obj.center - obj.half_extent;
    const Vec3 hi = obj.center + obj.half_extent;
    return p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y && p.z >= lo.z &&
           p.z <= hi.z;
}

bool camera_strictly_inside(const RoomSpec& room, const Vec3& eye, double margin) {
    for (int axis = 0; axis < 3; ++axis) {
        if (eye[axis] <= room.min_corner[axis] + margin) return false;
        if (eye[axis] >= room.max_corner[axis] - margin) return false;
    }
    return true;
}

std::vector<double> one_hot_scores(const std::map<int, std::string>& table, int class_id) {
    std::vector<double> scores(table.size(), 0.0);
    size_t i = 0;
    for (const auto& [id, name] : table) {
        if (id == class_id) scores[i] = 1.0;
        ++i;
    }
    return scores;
}

bool mask_touches_border(const Mask& m) {
    const int w = m.width(), h = m.height();
    for (int x = 0; x < w; ++x) {
        if (m.at(x, 0) || m.at(x, h - 1)) return true;
    }
    for (int y = 0; y < h; ++y) {
        if (m.at(0, y) || m.at(w - 1, y)) return true;
    }
    return false;
}

// Renders one object's layer given the scene composite index map.
InstanceLayer render_instance_impl(const SceneSpec& scene, int object_index,
                                   const Plane<std::int16_t>& composite_index) {
    const SceneObject& obj = scene.objects[static_cast<size_t>(object_index)];
    const Camera& cam = scene.camera;
    const Vec3 eye = scene.pose.translation;

    InstanceLayer layer;
    layer.image = RgbadImage(cam.width, cam.height);
    layer.visibility_mask = Mask(cam.width, cam.height, 0);
    layer.confidence_mask = Plane<float>(cam.width, cam.height, 0.f);
    layer.class_id = obj.class_id;
    layer.class_scores = one_hot_scores(scene.class_table, obj.class_id);
    layer.source_object = object_index;

    parallel_rows(cam.height, [&](int y) {
        for (int x = 0; x < cam.width; ++x) {
            const Vec3 dir = scene.pose.rotation * cam.pixel_ray(x, y);
            const double t = intersect_object(obj, eye, dir);
            if (t == kInf) continue;
            shade_into(obj.texture, eye + dir * t, layer.image, x, y,
                       static_cast<float>(t));
            if (composite_index.at(x, y) == object_index) {
                layer.visibility_mask.at(x, y) = 1;
                layer.confidence_mask.at(x, y) = 1.f;
            }
        }
    });
    layer.touches_border = mask_touches_border(layer.image.valid);
    return layer;
}

Mask dilate_square(const Mask& m, int radius);
Mask erode_square(const Mask& m, int radius);
Plane<float> box_blur(const Plane<float>& src, int radius);

} // namespace

TextureSpec TextureSpec::checker(const Vec3& a, const Vec3& b, double cell) {
    TextureSpec t;
    t.kind = Kind::kChecker;
    t.color_a = a;
    t.color_b = b;
    t.cell = cell;
    return t;
}

TextureSpec TextureSpec::gradient(const Vec3& a, const Vec3& b, int axis, double lo,
                                  double hi) {
    TextureSpec t;
    t.kind = Kind::kGradient;
    t.color_a = a;
    t.color_b = b;
    t.axis = axis;
    t.lo = lo;
    t.hi = hi;
    return t;
}

Vec3 TextureSpec::eval(const Vec3& p) const {
    switch (kind) {
    case Kind::kSolid:
        return color_a;
    case Kind::kChecker: {
        const long long ix = static_cast<long long>(std::floor(p.x / cell));
        const long long iy = static_cast<long long>(std::floor(p.y / cell));
        const long long iz = static_cast<long long>(std::floor(p.z / cell));
        return ((ix + iy + iz) & 1) ? color_b : color_a;
    }
    case Kind::kGradient: {
        const double span = hi - lo;
        const double f = span == 0.0 ? 0.0 : clamp01((p[axis] - lo) / span);
        return color_a + (color_b - color_a) * f;
    }
    }
    return color_a;
}

double SceneObject::bounding_radius() const {
    if (shape == Shape::kSphere) return radius();
    return half_extent.norm();
}

void SceneSpec::validate() const {
    camera.validate();
    pose.validate();
    for (int axis = 0; axis < 3; ++axis) {
        if (!(room.min_corner[axis] < room.max_corner[axis]))
            throw GeometryError("scene: degenerate room box");
    }
    if (!camera_strictly_inside(room, pose.translation, 1e-9))
        throw GeometryError("scene: camera outside the room");
    for (const auto& obj : objects) {
        if (obj.shape == SceneObject::Shape::kSphere) {
            if (!(obj.radius() > 0.0)) throw GeometryError("scene: nonpositive radius");
        } else {
            if (!(obj.half_extent.x > 0.0 && obj.half_extent.y > 0.0 &&
                  obj.half_extent.z > 0.0))
                throw GeometryError("scene: nonpositive box extent");
        }
        const Vec3 lo = obj.center - Vec3{obj.bounding_radius(), obj.bounding_radius(),
                                          obj.bounding_radius()};
        const Vec3 hi = obj.center + Vec3{obj.bounding_radius(), obj.bounding_radius(),
                                          obj.bounding_radius()};
        for (int axis = 0; axis < 3; ++axis) {
            if (obj.shape == SceneObject::Shape::kBox) {
                if (obj.center[axis] - obj.half_extent[axis] < room.min_corner[axis] ||
                    obj.center[axis] + obj.half_extent[axis] > room.max_corner[axis])
                    throw GeometryError("scene: object outside the room");
            } else if (lo[axis] < room.min_corner[axis] ||
                       hi[axis] > room.max_corner[axis]) {
                throw GeometryError("scene: object outside the room");
            }
        }
        if (point_in_object(obj, pose.translation))
            throw GeometryError("scene: camera inside an object");
    }
}

SceneSpec SceneSpec::without_objects(const std::vector<int>& object_indices) const {
    SceneSpec out = *this;
    out.objects.clear();
    for (size_t i = 0; i < objects.size(); ++i) {
        if (std::find(object_indices.begin(), object_indices.end(), static_cast<int>(i)) ==
            object_indices.end())
            out.objects.push_back(objects[i]);
    }
    return out;
}

std::map<int, std::string> GenerationConfig::default_class_table() {
    return {{0, "floor"}, {1, "ceiling"}, {2, "wall"},  {3, "cabinet"},
            {4, "crate"}, {5, "table"},   {6, "ball"},  {7, "lamp"}};
}

void GenerationConfig::validate() const {
    if (width <= 0 || height <= 0) throw ConfigError("config: nonpositive image size");
    if (min_objects < 0 || max_objects < min_objects)
        throw ConfigError("config: bad object count range");
    if (overlap_threshold < 0.0 || overlap_threshold > 1.0)
        throw ConfigError("config: overlap_threshold outside [0,1]");
    if (pose_perturbation.max_translation < 0.0 || pose_perturbation.max_rotation < 0.0)
        throw ConfigError("config: negative pose perturbation");
    if (detection_noise.radius_min > detection_noise.radius_max)
        throw ConfigError("config: bad detection radius range");
    if (detection_noise.blur_radius < 0)
        throw ConfigError("config: negative blur radius");
    if (detection_noise.score_smoothing < 0.0 || detection_noise.score_smoothing > 1.0)
        throw ConfigError("config: score smoothing outside [0,1]");
    if (class_table.empty()) throw ConfigError("config: empty class table");
}

CompositeRender render_composite(const SceneSpec& scene) {
    const Camera& cam = scene.camera;
    const Vec3 eye = scene.pose.translation;
    if (!camera_strictly_inside(scene.room, eye, 0.0))
        throw GeometryError("render: camera outside the room");

    CompositeRender out;
    out.image = RgbadImage(cam.width, cam.height);
    out.object_index = Plane<std::int16_t>(cam.width, cam.height,
                                           CompositeRender::kLayoutHit);

    parallel_rows(cam.height, [&](int y) {
        for (int x = 0; x < cam.width; ++x) {
            const Vec3 dir = scene.pose.rotation * cam.pixel_ray(x, y);
            // Depth decisions run on float-narrowed values so that pooling
            // the per-layer rasters reproduces this pass bit-exactly.
            float best_depth = std::numeric_limits<float>::infinity();
            int best = CompositeRender::kLayoutHit;
            double best_t = kInf;
            for (size_t i = 0; i < scene.objects.size(); ++i) {
                const double t = intersect_object(scene.objects[i], eye, dir);
                if (t == kInf) continue;
                const float tf = static_cast<float>(t);
                if (tf < best_depth) {
                    best_depth = tf;
                    best = static_cast<int>(i);
                    best_t = t;
                }
            }
            const FaceHit face = intersect_room(scene.room, eye, dir);
            if (face.face >= 0 && static_cast<float>(face.t) < best_depth) {
                best_depth = static_cast<float>(face.t);
                best = CompositeRender::kLayoutHit;
                best_t = face.t;
                shade_into(scene.room.face_textures[static_cast<size_t>(face.face)],
                           eye + dir * best_t, out.image, x, y, best_depth);
            } else if (best >= 0) {
                shade_into(scene.objects[static_cast<size_t>(best)].texture,
                           eye + dir * best_t, out.image, x, y, best_depth);
            }
            out.object_index.at(x, y) = static_cast<std::int16_t>(best);
        }
    });
    return out;
}

InstanceLayer render_instance(const SceneSpec& scene, int object_index) {
    if (object_index < 0 || object_index >= static_cast<int>(scene.objects.size()))
        throw ConfigError("render_instance: object index out of range");
    const CompositeRender composite = render_composite(scene);
    return render_instance_impl(scene, object_index, composite.object_index);
}

LayoutLayer render_layout(const SceneSpec& scene) {
    const Camera& cam = scene.camera;
    const Vec3 eye = scene.pose.translation;
    if (!camera_strictly_inside(scene.room, eye, 0.0))
        throw GeometryError("render_layout: camera outside the room");

    LayoutLayer layout;
    layout.image = RgbadImage(cam.width, cam.height);
    layout.structural_classes = {scene.room.floor_class, scene.room.ceiling_class,
                                 scene.room.wall_class};

    std::atomic<bool> escaped{false};
    parallel_rows(cam.height, [&](int y) {
        for (int x = 0; x < cam.width; ++x) {
            const Vec3 dir = scene.pose.rotation * cam.pixel_ray(x, y);
            const FaceHit face = intersect_room(scene.room, eye, dir);
            if (face.face < 0) {
                escaped.store(true, std::memory_order_relaxed);
                continue;
            }
            shade_into(scene.room.face_textures[static_cast<size_t>(face.face)],
                       eye + dir * face.t, layout.image, x, y,
                       static_cast<float>(face.t));
        }
    });
    if (escaped.load()) throw GeometryError("render_layout: ray escaped the room");
    return layout;
}

LayerStack generate_view(const SceneSpec& scene) {
    scene.validate();
    const CompositeRender composite = render_composite(scene);

    LayerStack stack;
    stack.camera = scene.camera;
    stack.view_pose = scene.pose;
    for (size_t i = 0; i < scene.objects.size(); ++i) {
        InstanceLayer layer =
            render_instance_impl(scene, static_cast<int>(i), composite.object_index);
        if (mask_count(layer.visibility_mask) == 0) continue; // fully occluded
        stack.instances.push_back(std::move(layer));
    }
    stack.layout = render_layout(scene);
    return stack;
}

double overlap_fraction(const LayerStack& stack) {
    const Ldi ldi = ldi_from_stack(stack);
    const size_t pixels = static_cast<size_t>(stack.width()) * stack.height();
    if (pixels == 0) return 0.0;
    size_t covered = 0;
    for (int y = 0; y < stack.height(); ++y)
        for (int x = 0; x < stack.width(); ++x)
            covered += ldi.sample_count(x, y) >= 2;
    return static_cast<double>(covered) / static_cast<double>(pixels);
}

bool overlap_filter(const LayerStack& stack, double threshold) {
    if (threshold < 0.0 || threshold > 1.0)
        throw ConfigError("overlap_filter: threshold outside [0,1]");
    return overlap_fraction(stack) >= threshold;
}

Pose perturb_pose(const Pose& pose, const PosePerturbation& config, std::uint64_t seed) {
    if (config.max_translation < 0.0 || config.max_rotation < 0.0)
        throw ConfigError("perturb_pose: negative magnitude");
    Rng rng(seed);
    const double mt = config.max_translation;
    const double mr = config.max_rotation * kDegToRad;
    Pose delta;
    delta.translation = {rng.uniform(-mt, mt), rng.uniform(-mt, mt),
                         rng.uniform(-mt, mt)};
    const double yaw = rng.uniform(-mr, mr);
    const double pitch = rng.uniform(-mr, mr);
    const double roll = rng.uniform(-mr, mr);
    delta.rotation = rotation_from_euler(yaw, pitch, roll);
    return pose.compose(delta);
}

std::vector<Detection> simulate_detections(const LayerStack& stack,
                                           const DetectionNoise& config,
                                           std::uint64_t seed) {
    if (config.radius_min > config.radius_max)
        throw ConfigError("simulate_detections: bad radius range");
    std::vector<Detection> out;
    out.reserve(stack.instances.size());
    const size_t table_size = stack.instances.empty()
                                  ? 0
                                  : stack.instances.front().class_scores.size();
    for (size_t i = 0; i < stack.instances.size(); ++i) {
        const InstanceLayer& inst = stack.instances[i];
        Rng rng(derive_seed(seed, i));
        const int radius = static_cast<int>(
            rng.uniform_int(config.radius_min, config.radius_max));

        Mask m = radius >= 0 ? dilate_square(inst.visibility_mask, radius)
                             : erode_square(inst.visibility_mask, -radius);
        Plane<float> conf(m.width(), m.height(), 0.f);
        for (size_t p = 0; p < m.size(); ++p)
            conf.data()[p] = m.data()[p] ? 1.f : 0.f;
        if (config.blur_radius > 0) conf = box_blur(conf, config.blur_radius);

        Detection det;
        det.confidence = std::move(conf);
        const double s = config.score_smoothing;
        const size_t k = table_size == 0 ? inst.class_scores.size() : table_size;
        det.class_scores.assign(k, 0.0);
        for (size_t c = 0; c < k; ++c)
            det.class_scores[c] = (1.0 - s) * inst.class_scores[c] + s / static_cast<double>(k);
        out.push_back(std::move(det));
    }
    return out;
}

namespace {

Mask dilate_square(const Mask& m, int radius) {
    if (radius <= 0) return m;
    const int w = m.width(), h = m.height();
    Mask tmp(w, h, 0), out(w, h, 0);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            std::uint8_t v = 0;
            for (int k = std::max(0, x - radius); k <= std::min(w - 1, x + radius); ++k)
                v |= m.at(k, y);
            tmp.at(x, y) = v;
        }
    }
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            std::uint8_t v = 0;
            for (int k = std::max(0, y - radius); k <= std::min(h - 1, y + radius); ++k)
                v |= tmp.at(x, k);
            out.at(x, y) = v;
        }
    }
    return out;
}

Mask erode_square(const Mask& m, int radius) {
    if (radius <= 0) return m;
    const int w = m.width(), h = m.height();
    Mask tmp(w, h, 0), out(w, h, 0);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            std::uint8_t v = 1;
            for (int k = x - radius; k <= x + radius; ++k)
                v &= (k >= 0 && k < w) ? m.at(k, y) : std::uint8_t{0};
            tmp.at(x, y) = v;
        }
    }
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            std::uint8_t v = 1;
            for (int k = y - radius; k <= y + radius; ++k)
                v &= (k >= 0 && k < h) ? tmp.at(x, k) : std::uint8_t{0};
            out.at(x, y) = v;
        }
    }
    return out;
}

Plane<float> box_blur(const Plane<float>& src, int radius) {
    if (radius <= 0) return src;
    const int w = src.width(), h = src.height();
    const float norm = 1.f / static_cast<float>(2 * radius + 1);
    Plane<float> tmp(w, h, 0.f), out(w, h, 0.f);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            float acc = 0.f;
            for (int k = x - radius; k <= x + radius; ++k)
                if (k >= 0 && k < w) acc += src.at(k, y);
            tmp.at(x, y) = acc * norm;
        }
    }
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            float acc = 0.f;
            for (int k = y - radius; k <= y + radius; ++k)
                if (k >= 0 && k < h) acc += tmp.at(x, k);
            out.at(x, y) = acc * norm;
        }
    }
    return out;
}

Mat3 look_at_rotation(const Vec3& eye, const Vec3& target) {
    Vec3 f = target - eye;
    const double n = f.norm();
    if (n < 1e-12) f = {0, 0, 1};
    else f = f * (1.0 / n);
    // Image-down axis is world -y; fall back when looking straight up/down.
    const Vec3 down{0, -1, 0};
    Vec3 r{down.y * f.z - down.z * f.y, down.z * f.x - down.x * f.z,
           down.x * f.y - down.y * f.x};
    const double rn = r.norm();
    if (rn < 1e-9) {
        r = {1, 0, 0};
    } else {
        r = r * (1.0 / rn);
    }
    const Vec3 d{f.y * r.z - f.z * r.y, f.z * r.x - f.x * r.z, f.x * r.y - f.y * r.x};
    Mat3 rot;
    rot.m = {r.x, d.x, f.x, r.y, d.y, f.y, r.z, d.z, f.z};
    return rot;
}

} // namespace

SceneSpec sample_scene(const GenerationConfig& config, std::uint64_t seed) {
    config.validate();
    Rng rng(seed);

    SceneSpec scene;
    scene.seed = seed;
    scene.class_table = config.class_table;

    const double sx = rng.uniform(4.5, 6.5);
    const double sy = rng.uniform(2.7, 3.3);
    const double sz = rng.uniform(4.5, 6.5);
    scene.room.min_corner = {0, 0, 0};
    scene.room.max_corner = {sx, sy, sz};
    scene.room.floor_class = 0;
    scene.room.ceiling_class = 1;
    scene.room.wall_class = 2;

    // Smooth shells: plain or gently graded faces.
    const auto face_color = [&rng] {
        return Vec3{rng.uniform(0.25, 0.85), rng.uniform(0.25, 0.85),
                    rng.uniform(0.25, 0.85)};
    };
    for (int face = 0; face < 6; ++face) {
        const Vec3 c = face_color();
        if (rng.bernoulli(0.5)) {
            scene.room.face_textures[static_cast<size_t>(face)] = TextureSpec::solid(c);
        } else {
            const Vec3 c2{clamp01(c.x + rng.uniform(-0.25, 0.25)),
                          clamp01(c.y + rng.uniform(-0.25, 0.25)),
                          clamp01(c.z + rng.uniform(-0.25, 0.25))};
            const int axis = face / 2 == 1 ? (rng.bernoulli(0.5) ? 0 : 2)
                                           : 1; // grade walls vertically
            const double lo = scene.room.min_corner[axis];
            const double hi = scene.room.max_corner[axis];
            scene.room.face_textures[static_cast<size_t>(face)] =
                TextureSpec::gradient(c, c2, axis, lo, hi);
        }
    }

    // Camera placed away from the walls, roughly at eye height.
    const Vec3 eye{rng.uniform(0.9, sx - 0.9), rng.uniform(1.3, 1.8),
                   rng.uniform(0.9, sz - 0.9)};
    scene.camera.width = config.width;
    scene.camera.height = config.height;
    scene.camera.fx = 0.85 * config.width;
    scene.camera.fy = 0.85 * config.width;
    scene.camera.cx = config.width / 2.0;
    scene.camera.cy = config.height / 2.0;

    const int count =
        static_cast<int>(rng.uniform_int(config.min_objects, config.max_objects));

    const std::vector<int> box_classes{3, 4, 5};
    const std::vector<int> sphere_classes{6, 7};

    for (int i = 0; i < count; ++i) {
        SceneObject obj;
        const bool is_box = rng.bernoulli(0.6);
        obj.shape = is_box ? SceneObject::Shape::kBox : SceneObject::Shape::kSphere;
        if (is_box) {
            obj.half_extent = {rng.uniform(0.18, 0.55), rng.uniform(0.18, 0.6),
                               rng.uniform(0.18, 0.55)};
            obj.class_id = box_classes[static_cast<size_t>(
                rng.uniform_int(0, static_cast<int>(box_classes.size()) - 1))];
        } else {
            const double radius = rng.uniform(0.16, 0.45);
            obj.half_extent = {radius, radius, radius};
            obj.class_id = sphere_classes[static_cast<size_t>(
                rng.uniform_int(0, static_cast<int>(sphere_classes.size()) - 1))];
        }

        const Vec3 base{rng.uniform(0.4, 0.8), rng.uniform(0.4, 0.8),
                        rng.uniform(0.4, 0.8)};
        const double texture_pick = rng.uniform01();
        if (texture_pick < 0.5) {
            obj.texture = TextureSpec::solid(base);
        } else if (texture_pick < 0.8) {
            const Vec3 c2{clamp01(base.x + rng.uniform(-0.3, 0.3)),
                          clamp01(base.y + rng.uniform(-0.3, 0.3)),
                          clamp01(base.z + rng.uniform(-0.3, 0.3))};
            const int axis = static_cast<int>(rng.uniform_int(0, 2));
            obj.texture = TextureSpec::gradient(base, c2, axis, -1.0, 1.0);
        } else {
            const double contrast = rng.uniform(0.08, 0.2);
            const Vec3 c2{clamp01(base.x + contrast), clamp01(base.y + contrast),
                          clamp01(base.z + contrast)};
            obj.texture = TextureSpec::checker(base, c2, rng.uniform(0.25, 0.55));
        }

        // Rejection placement: inside the room, clear of the camera.
        const double clearance = obj.bounding_radius() + 0.35;
        bool placed = false;
        for (int attempt = 0; attempt < 24 && !placed; ++attempt) {
            const double mx = obj.bounding_radius() + 0.15;
            Vec3 c{rng.uniform(scene.room.min_corner.x + mx, scene.room.max_corner.x - mx),
                   0.0,
                   rng.uniform(scene.room.min_corner.z + mx, scene.room.max_corner.z - mx)};
            const double footprint =
                obj.shape == SceneObject::Shape::kSphere ? obj.radius() : obj.half_extent.y;
            if (rng.bernoulli(0.7)) {
                c.y = scene.room.min_corner.y + footprint; // resting on the floor
            } else {
                c.y = rng.uniform(scene.room.min_corner.y + mx,
                                  std::min(scene.room.max_corner.y - mx, 2.2));
            }
            if ((c - eye).norm() < clearance) continue;
            obj.center = c;
            placed = true;
        }
        if (!placed) continue; // crowded room; skip this object
        scene.objects.push_back(obj);
    }

    // Aim at the spread of objects (or the room center) with a small
    // random offset, so most views contain layered content.
    Vec3 target{sx / 2, rng.uniform(0.8, 1.6), sz / 2};
    if (!scene.objects.empty()) {
        Vec3 centroid{0, 0, 0};
        for (const auto& obj : scene.objects) centroid = centroid + obj.center;
        centroid = centroid * (1.0 / static_cast<double>(scene.objects.size()));
        target = centroid;
    }
    Mat3 base_rot = look_at_rotation(eye, target);
    const double yaw_jitter = rng.uniform(-0.3, 0.3);
    const double pitch_jitter = rng.uniform(-0.12, 0.12);
    scene.pose.rotation =
        base_rot * rotation_from_euler(yaw_jitter, pitch_jitter, 0.0);
    scene.pose.translation = eye;

    scene.validate();
    return scene;
}

} // namespace ldikit
