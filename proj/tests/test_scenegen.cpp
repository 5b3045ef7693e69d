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

#include <doctest.h>

#include <cmath>

#include "ldikit/compose.hpp"
#include "ldikit/losses.hpp"
#include "ldikit/scenegen.hpp"
#include "testutil.hpp"

using namespace ldikit;
using testutil::random_stack;

namespace {

GenerationConfig small_config() {
    GenerationConfig c;
    c.width = 96;
    c.height = 96;
    c.min_objects = 2;
    c.max_objects = 4;
    return c;
}

// Minimal hand-authored scene: one box in a cubic room, camera at the
// center looking down +z.
SceneSpec cubic_scene() {
    SceneSpec scene;
    scene.room.min_corner = {0, 0, 0};
    scene.room.max_corner = {4, 4, 4};
    for (auto& t : scene.room.face_textures) t = TextureSpec::solid({0.5, 0.5, 0.5});
    scene.camera.fx = scene.camera.fy = 80;
    scene.camera.cx = 40;
    scene.camera.cy = 40;
    scene.camera.width = 80;
    scene.camera.height = 80;
    scene.pose.rotation = Mat3::identity();
    scene.pose.translation = {2, 2, 2};
    scene.class_table = GenerationConfig::default_class_table();
    return scene;
}

} // namespace

TEST_CASE("center pixel depth equals the analytic wall distance") {
    const SceneSpec scene = cubic_scene();
    const LayoutLayer layout = render_layout(scene);
    // z-depth of the fronto-parallel far wall is its plane distance, for
    // every pixel column; at the center the ray is nearly axial.
    const float measured = layout.image.depth.at(40, 40);
    CHECK(measured == doctest::Approx(2.0).epsilon(1e-12));
    for (size_t i = 0; i < layout.image.valid.size(); ++i)
        CHECK(layout.image.valid.data()[i] == 1);
}

TEST_CASE("render_layout throws when the camera is outside") {
    SceneSpec scene = cubic_scene();
    scene.pose.translation = {9, 2, 2};
    CHECK_THROWS_AS(render_layout(scene), GeometryError);
}

TEST_CASE("layout depth dominates instance depth where both are valid") {
    Rng rng(11);
    for (int s = 0; s < 5; ++s) {
        const SceneSpec scene = sample_scene(small_config(), rng.next_u64());
        const LayerStack stack = generate_view(scene);
        for (const auto& inst : stack.instances) {
            for (size_t p = 0; p < inst.image.depth.size(); ++p) {
                if (!inst.image.valid.data()[p]) continue;
                CHECK(stack.layout.image.depth.data()[p] >= inst.image.depth.data()[p]);
            }
        }
    }
}

TEST_CASE("fully occluded objects are dropped, full silhouette kept otherwise") {
    SceneSpec scene = cubic_scene();
    SceneObject blocker;
    blocker.shape = SceneObject::Shape::kBox;
    blocker.center = {2, 2, 3.0};
    blocker.half_extent = {0.8, 0.8, 0.2};
    blocker.class_id = 4;
    blocker.texture = TextureSpec::solid({0.9, 0.2, 0.2});
    SceneObject hidden;
    hidden.shape = SceneObject::Shape::kBox;
    hidden.center = {2, 2, 3.6};
    hidden.half_extent = {0.25, 0.25, 0.15};
    hidden.class_id = 5;
    hidden.texture = TextureSpec::solid({0.2, 0.9, 0.2});
    scene.objects = {blocker, hidden};

    // The hidden box has a full silhouette but an empty visibility mask.
    const InstanceLayer hidden_layer = render_instance(scene, 1);
    CHECK(mask_count(hidden_layer.image.valid) > 0);
    CHECK(mask_count(hidden_layer.visibility_mask) == 0);

    const InstanceLayer front_layer = render_instance(scene, 0);
    CHECK(mask_count(front_layer.visibility_mask) ==
          mask_count(front_layer.image.valid));

    const LayerStack stack = generate_view(scene);
    CHECK(stack.instances.size() == 1); // drop rule
    CHECK(stack.instances[0].class_id == 4);
}

TEST_CASE("render_instance rejects a bad index") {
    const SceneSpec scene = cubic_scene();
    CHECK_THROWS_AS(render_instance(scene, 0), ConfigError);
}

TEST_CASE("visibility masks are pairwise disjoint") {
    Rng rng(12);
    for (int s = 0; s < 6; ++s) {
        const SceneSpec scene = sample_scene(small_config(), rng.next_u64());
        const LayerStack stack = generate_view(scene);
        Mask seen(stack.width(), stack.height(), 0);
        for (const auto& inst : stack.instances) {
            for (size_t p = 0; p < seen.size(); ++p) {
                if (!inst.visibility_mask.data()[p]) continue;
                CHECK(seen.data()[p] == 0);
                seen.data()[p] = 1;
                CHECK(inst.image.valid.data()[p] == 1);
            }
        }
    }
}

TEST_CASE("pooling the generated stack reproduces the composite render") {
    Rng rng(13);
    for (int s = 0; s < 10; ++s) {
        const SceneSpec scene = sample_scene(small_config(), rng.next_u64());
        const LayerStack stack = generate_view(scene);
        const CompositeRender composite = render_composite(scene);
        const ComposeResult pooled = min_depth_pool(stack);
        CHECK(pooled.image == composite.image);
    }
}

TEST_CASE("generate_view with no objects is layout only") {
    SceneSpec scene = cubic_scene();
    const LayerStack stack = generate_view(scene);
    CHECK(stack.instances.empty());
    const ComposeResult pooled = min_depth_pool(stack);
    CHECK(pooled.image == stack.layout.image);
}

TEST_CASE("generation is a pure function of the seed") {
    const GenerationConfig config = small_config();
    const SceneSpec a = sample_scene(config, 12345);
    const SceneSpec b = sample_scene(config, 12345);
    const LayerStack sa = generate_view(a);
    const LayerStack sb = generate_view(b);
    REQUIRE(sa.instances.size() == sb.instances.size());
    CHECK(sa.layout.image == sb.layout.image);
    for (size_t i = 0; i < sa.instances.size(); ++i)
        CHECK(sa.instances[i].image == sb.instances[i].image);

    const SceneSpec c = sample_scene(config, 12346);
    CHECK(c.objects.size() + a.objects.size() > 0); // different seed, valid scene
}

TEST_CASE("overlap_filter counts multiply-covered pixels") {
    Rng rng(14);
    LayerStack stack = random_stack(rng, 2, 2, 0, 0.0);
    // Layout everywhere; one instance pixel -> 1 of 4 pixels double-covered.
    InstanceLayer inst;
    inst.image = RgbadImage(2, 2);
    inst.image.set_pixel(0, 0, 0.1f, 0.1f, 0.1f, 1.f, 1.f);
    inst.class_scores.assign(8, 0.0);
    inst.class_scores[3] = 1.0;
    inst.class_id = 3;
    inst.visibility_mask = Mask(2, 2, 0);
    inst.confidence_mask = Plane<float>(2, 2, 0.f);
    stack.instances.push_back(inst);

    CHECK(overlap_fraction(stack) == doctest::Approx(0.25));
    CHECK(overlap_filter(stack, 0.25));
    CHECK_FALSE(overlap_filter(stack, 0.3));
    CHECK(overlap_filter(stack, 0.0)); // threshold 0 always passes

    LayerStack layout_only = random_stack(rng, 2, 2, 0, 0.0);
    CHECK_FALSE(overlap_filter(layout_only, 0.01));
    CHECK(overlap_filter(layout_only, 0.0));
}

TEST_CASE("perturb_pose determinism and zero-magnitude identity") {
    Pose pose;
    pose.rotation = rotation_from_euler(0.4, 0.1, -0.2);
    pose.translation = {1, 2, 3};

    PosePerturbation zero{0.0, 0.0};
    const Pose same = perturb_pose(pose, zero, 42);
    CHECK(same.rotation.m == pose.rotation.m);
    CHECK(same.translation.x == pose.translation.x);

    PosePerturbation p{0.3, 10.0};
    const Pose a = perturb_pose(pose, p, 42);
    const Pose b = perturb_pose(pose, p, 42);
    CHECK(a.rotation.m == b.rotation.m);
    CHECK(a.translation.x == b.translation.x);
    a.validate(); // still orthonormal

    const Pose c = perturb_pose(pose, p, 43);
    CHECK(c.translation.x != a.translation.x);
}

TEST_CASE("perturb_pose translation is empirically centered") {
    Pose pose; // identity: delta translation shows up directly
    PosePerturbation p{0.2, 0.0};
    const int n = 10000;
    double mean[3] = {0, 0, 0};
    for (int i = 0; i < n; ++i) {
        const Pose q = perturb_pose(pose, p, derive_seed(555, static_cast<std::uint64_t>(i)));
        mean[0] += q.translation.x;
        mean[1] += q.translation.y;
        mean[2] += q.translation.z;
    }
    // Uniform(-0.2, 0.2): sigma of the mean = 0.2/sqrt(3)/sqrt(n).
    const double limit = 3.0 * (0.2 / std::sqrt(3.0)) / std::sqrt(static_cast<double>(n));
    for (double m : mean) CHECK(std::abs(m / n) < limit);
}

TEST_CASE("simulate_detections zero-noise identity and score formula") {
    Rng rng(15);
    const SceneSpec scene = sample_scene(small_config(), rng.next_u64());
    const LayerStack stack = generate_view(scene);
    REQUIRE(!stack.instances.empty());

    DetectionNoise zero;
    zero.radius_min = zero.radius_max = 0;
    zero.blur_radius = 0;
    zero.score_smoothing = 0.0;
    const auto clean = simulate_detections(stack, zero, 7);
    REQUIRE(clean.size() == stack.instances.size());
    for (size_t i = 0; i < clean.size(); ++i) {
        for (size_t p = 0; p < clean[i].confidence.size(); ++p) {
            const float expect = stack.instances[i].visibility_mask.data()[p] ? 1.f : 0.f;
            CHECK(clean[i].confidence.data()[p] == expect);
        }
        CHECK(clean[i].class_scores == stack.instances[i].class_scores);
    }

    DetectionNoise smooth = zero;
    smooth.score_smoothing = 0.25;
    const auto smoothed = simulate_detections(stack, smooth, 7);
    const size_t k = smoothed[0].class_scores.size();
    const size_t true_idx = static_cast<size_t>(
        stack.instances[0].class_id); // contiguous default table
    CHECK(smoothed[0].class_scores[true_idx] ==
          doctest::Approx(0.75 + 0.25 / static_cast<double>(k)).epsilon(1e-12));
    double sum = 0;
    for (double v : smoothed[0].class_scores) sum += v;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));

    // Determinism in the seed.
    const auto again = simulate_detections(stack, smooth, 7);
    CHECK(again[0].confidence == smoothed[0].confidence);
}

TEST_CASE("noisy detections still match ground truth by IoU") {
    Rng rng(16);
    for (int s = 0; s < 4; ++s) {
        const SceneSpec scene = sample_scene(small_config(), rng.next_u64());
        const LayerStack stack = generate_view(scene);
        if (stack.instances.empty()) continue;
        DetectionNoise noise;
        noise.radius_min = -2;
        noise.radius_max = 2;
        noise.blur_radius = 1;
        const auto dets = simulate_detections(stack, noise, 99 + static_cast<std::uint64_t>(s));

        std::vector<Mask> gt_masks, pred_masks;
        for (size_t i = 0; i < stack.instances.size(); ++i) {
            gt_masks.push_back(stack.instances[i].visibility_mask);
            Mask pm(stack.width(), stack.height(), 0);
            for (size_t p = 0; p < pm.size(); ++p)
                pm.data()[p] = dets[i].confidence.data()[p] >= 0.5f ? 1 : 0;
            pred_masks.push_back(std::move(pm));
        }
        // Wherever every IoU is moderate, the matcher must recover the
        // identity pairing.
        bool all_good = true;
        for (size_t i = 0; i < gt_masks.size(); ++i)
            all_good = all_good && mask_iou(gt_masks[i], pred_masks[i]) >= 0.3;
        if (!all_good) continue;
        const auto pairs = iou_match(pred_masks, gt_masks);
        REQUIRE(pairs.size() == gt_masks.size());
        for (const auto& [g, p] : pairs) CHECK(g == p);
    }
}

TEST_CASE("border-touch flag") {
    SceneSpec scene = cubic_scene();
    SceneObject obj;
    obj.shape = SceneObject::Shape::kSphere;
    obj.center = {2, 2, 3.2};
    obj.half_extent = {0.3, 0.3, 0.3};
    obj.class_id = 6;
    obj.texture = TextureSpec::solid({0.3, 0.4, 0.8});
    scene.objects = {obj};
    const LayerStack centered = generate_view(scene);
    REQUIRE(centered.instances.size() == 1);
    CHECK_FALSE(centered.instances[0].touches_border);

    // Straddling the left frustum edge at z = 3.2 (half width there is
    // 1.2 * 40/80 = 0.6 around the optical axis).
    scene.objects[0].center = {1.45, 2, 3.2};
    const LayerStack edge = generate_view(scene);
    REQUIRE(edge.instances.size() == 1);
    CHECK(edge.instances[0].touches_border);
}

TEST_CASE("textures are view independent") {
    const TextureSpec checker = TextureSpec::checker({0.1, 0.1, 0.1}, {0.9, 0.9, 0.9}, 0.5);
    const Vec3 p{1.23, 0.0, 2.71};
    CHECK(checker.eval(p).x == checker.eval(p).x);
    CHECK(checker.eval({0.49, 0, 0}).x == doctest::Approx(0.1));
    CHECK(checker.eval({0.51, 0, 0}).x == doctest::Approx(0.9));

    const TextureSpec grad = TextureSpec::gradient({0, 0, 0}, {1, 1, 1}, 0, 0.0, 2.0);
    CHECK(grad.eval({1.0, 0, 0}).x == doctest::Approx(0.5));
    CHECK(grad.eval({-5.0, 0, 0}).x == doctest::Approx(0.0)); // clamped
}
