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

#include "ldikit/metrics.hpp"
#include "ldikit/render.hpp"
#include "ldikit/scenegen.hpp"
#include "testutil.hpp"

using namespace ldikit;
using testutil::random_stack;

namespace {

Camera simple_camera(int w, int h) {
    Camera cam;
    cam.fx = cam.fy = w;
    cam.cx = w / 2.0;
    cam.cy = h / 2.0;
    cam.width = w;
    cam.height = h;
    return cam;
}

// Fronto-parallel plane layer at constant z-depth.
RgbadImage plane_layer(int w, int h, float depth, float shade) {
    RgbadImage img(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) img.set_pixel(x, y, shade, shade, shade, 1.f, depth);
    return img;
}

GenerationConfig render_test_config() {
    GenerationConfig c;
    c.width = 96;
    c.height = 96;
    c.min_objects = 1;
    c.max_objects = 4;
    return c;
}

} // namespace

TEST_CASE("identity warp reproduces the input exactly") {
    Rng rng(40);
    const RgbadImage layer = testutil::random_image(rng, 24, 18, 0.8);
    const Camera cam = simple_camera(24, 18);
    RgbadImage target(24, 18);
    const WarpStats stats = warp_layer(layer, cam, Pose::identity(), target);
    CHECK(target == layer);
    CHECK(stats.written == mask_count(layer.valid));
    CHECK(stats.dropped_out_of_bounds == 0);
}

TEST_CASE("axial translation shifts depth by tz on a fronto-parallel plane") {
    const int w = 32, h = 32;
    const Camera cam = simple_camera(w, h);
    const RgbadImage layer = plane_layer(w, h, 4.0f, 0.5f);
    Pose relative; // moving the camera forward by tz shortens z by tz
    relative.translation = {0, 0, -1.0};
    RgbadImage target(w, h);
    warp_layer(layer, cam, relative, target);
    // Center pixels are hit (magnification > 1 leaves cracks elsewhere).
    int checked = 0;
    for (int y = 8; y < h - 8; ++y) {
        for (int x = 8; x < w - 8; ++x) {
            if (!target.valid.at(x, y)) continue;
            CHECK(target.depth.at(x, y) == doctest::Approx(3.0).epsilon(1e-6));
            ++checked;
        }
    }
    CHECK(checked > 50);
}

TEST_CASE("z-test keeps the nearer sample on collisions") {
    const int w = 4, h = 1;
    const Camera cam = simple_camera(w, h); // fx = 4, cx = 2
    RgbadImage layer(w, h);
    // Lateral shift in pixels is fx*tx/depth: with tx = -0.75 the far
    // sample (depth 8) moves 0.375 px and the near one (depth 1) moves
    // 3 px; both land in target pixel 0 and the near sample must win.
    layer.set_pixel(0, 0, 0.2f, 0.2f, 0.2f, 1.f, 8.0f);
    layer.set_pixel(3, 0, 0.8f, 0.8f, 0.8f, 1.f, 1.0f);
    Pose relative;
    relative.translation = {-0.75, 0, 0};
    RgbadImage target(w, h);
    warp_layer(layer, cam, relative, target);
    REQUIRE(target.valid.at(0, 0) == 1);
    CHECK(target.depth.at(0, 0) == 1.0f);
    CHECK(target.r.at(0, 0) == 0.8f);
}

TEST_CASE("behind-camera and out-of-bounds samples are dropped and counted") {
    const int w = 8, h = 8;
    const Camera cam = simple_camera(w, h);
    const RgbadImage layer = plane_layer(w, h, 2.0f, 0.5f);
    Pose relative;
    relative.translation = {0, 0, -5.0}; // everything lands behind the camera
    RgbadImage target(w, h);
    const WarpStats behind = warp_layer(layer, cam, relative, target);
    CHECK(behind.written == 0);
    CHECK(behind.dropped_behind_camera == w * h);

    Pose sideways;
    sideways.translation = {50.0, 0, 0};
    RgbadImage target2(w, h);
    const WarpStats oob = warp_layer(layer, cam, sideways, target2);
    CHECK(oob.written == 0);
    CHECK(oob.dropped_out_of_bounds == w * h);
}

TEST_CASE("synthesize_view at identity equals first_layer on valid pixels") {
    Rng rng(41);
    for (int s = 0; s < 5; ++s) {
        const SceneSpec scene = sample_scene(render_test_config(), rng.next_u64());
        const LayerStack stack = generate_view(scene);
        const Ldi ldi = ldi_from_stack(stack);
        const RgbadImage front = first_layer(ldi);
        const RgbadImage synth = synthesize_view(ldi, stack.camera, Pose::identity());
        REQUIRE(synth.same_size(front));
        for (size_t p = 0; p < front.valid.size(); ++p) {
            if (!front.valid.data()[p]) continue;
            CHECK(synth.valid.data()[p] == 1);
            CHECK(synth.r.data()[p] == front.r.data()[p]);
            CHECK(synth.depth.data()[p] == front.depth.data()[p]);
        }
    }
}

TEST_CASE("single-layer ldi synthesis equals warp plus crack filling") {
    Rng rng(42);
    LayerStack stack = random_stack(rng, 16, 12, 0);
    const Ldi ldi = ldi_from_stack(stack);
    const Camera cam = simple_camera(16, 12);
    Pose relative;
    relative.translation = {0.05, -0.02, 0.1};
    relative.rotation = rotation_from_euler(0.02, -0.01, 0.0);
    const WarpConfig config;
    const RgbadImage direct = [&] {
        RgbadImage t(16, 12);
        warp_layer(first_layer(ldi), cam, relative, t, config);
        return fill_cracks(t, config);
    }();
    const RgbadImage synth = synthesize_view(ldi, cam, relative, config);
    CHECK(synth == direct);
}

TEST_CASE("fill_cracks fills lone cracks and keeps dis-occlusions open") {
    RgbadImage img = plane_layer(7, 7, 2.0f, 0.5f);
    img.clear_pixel(3, 3); // crack
    const RgbadImage filled = fill_cracks(img, WarpConfig{});
    CHECK(filled.valid.at(3, 3) == 1);
    CHECK(filled.depth.at(3, 3) == doctest::Approx(2.0));
    CHECK(filled.r.at(3, 3) == doctest::Approx(0.5));

    // A corner pixel has only two neighbors: below the 3-neighbor gate.
    RgbadImage corner = plane_layer(3, 3, 2.0f, 0.5f);
    corner.clear_pixel(0, 0);
    const RgbadImage f2 = fill_cracks(corner, WarpConfig{});
    CHECK(f2.valid.at(0, 0) == 0);

    // Depth-inconsistent neighborhoods stay open.
    RgbadImage disocc = plane_layer(7, 7, 2.0f, 0.5f);
    for (int x = 0; x < 7; ++x) {
        disocc.set_pixel(x, 0, 0.5f, 0.5f, 0.5f, 1.f, 8.0f);
        disocc.set_pixel(x, 1, 0.5f, 0.5f, 0.5f, 1.f, 8.0f);
    }
    disocc.clear_pixel(3, 1);
    // neighbors at depth 8, 8, 8 and 2: spread exceeds the tolerance
    const RgbadImage f3 = fill_cracks(disocc, WarpConfig{});
    CHECK(f3.valid.at(3, 1) == 0);

    // No invalid pixels: identity.
    const RgbadImage clean = plane_layer(5, 5, 1.0f, 0.25f);
    CHECK(fill_cracks(clean, WarpConfig{}) == clean);
}

TEST_CASE("fill_cracks mean matches the direct stencil") {
    RgbadImage img(3, 3);
    img.set_pixel(1, 0, 0.1f, 0.2f, 0.3f, 1.f, 2.00f);
    img.set_pixel(0, 1, 0.2f, 0.3f, 0.4f, 1.f, 2.01f);
    img.set_pixel(2, 1, 0.3f, 0.4f, 0.5f, 1.f, 2.02f);
    img.set_pixel(1, 2, 0.4f, 0.5f, 0.6f, 1.f, 2.03f);
    const RgbadImage filled = fill_cracks(img, WarpConfig{});
    REQUIRE(filled.valid.at(1, 1) == 1);
    CHECK(filled.r.at(1, 1) == doctest::Approx((0.1 + 0.2 + 0.3 + 0.4) / 4).epsilon(1e-6));
    CHECK(filled.depth.at(1, 1) ==
          doctest::Approx((2.00 + 2.01 + 2.02 + 2.03) / 4).epsilon(1e-6));
}

TEST_CASE("synthesized target view carries dis-occluded content") {
    // Perturbed-pose synthesis against the direct render of the target.
    Rng rng(43);
    int evaluated = 0;
    for (int s = 0; s < 6; ++s) {
        const SceneSpec scene = sample_scene(render_test_config(), rng.next_u64());
        const LayerStack stack = generate_view(scene);
        if (stack.instances.empty()) continue;
        const Pose target_pose =
            perturb_pose(scene.pose, PosePerturbation{0.15, 5.0}, rng.next_u64());
        const CompositeRender direct = render_composite(scene.with_pose(target_pose));
        const Ldi ldi = ldi_from_stack(stack);
        const RgbadImage synth = synthesize_view(
            ldi, stack.camera, relative_pose(scene.pose, target_pose));

        Mask mutual(stack.width(), stack.height(), 0);
        for (size_t p = 0; p < mutual.size(); ++p)
            mutual.data()[p] =
                (synth.valid.data()[p] && direct.image.valid.data()[p]) ? 1 : 0;
        REQUIRE(mask_count(mutual) > 0);
        // Mean errors stay moderate at this small resolution (the pixel
        // footprint scales discretization error); the acceptance suite
        // measures the full-size behavior.
        CHECK(color_mpe(synth, direct.image, mutual) < 8.0);
        CHECK(depth_mpe(synth, direct.image, mutual) < 0.15);
        ++evaluated;
    }
    CHECK(evaluated >= 3);
}

TEST_CASE("remove_objects drops classes and keeps the layout") {
    Rng rng(44);
    const GenerationConfig config = render_test_config();
    for (int s = 0; s < 8; ++s) {
        const SceneSpec scene = sample_scene(config, rng.next_u64());
        const LayerStack stack = generate_view(scene);
        if (stack.instances.empty()) continue;

        // Empty class set: identical to plain pooling.
        const ComposeResult plain = min_depth_pool(stack);
        const ComposeResult same = remove_objects(stack, {}, scene.class_table);
        CHECK(same.image == plain.image);

        // Removing every object class leaves the layout.
        const std::set<int> all_objects{3, 4, 5, 6, 7};
        const ComposeResult shell = remove_objects(stack, all_objects, scene.class_table);
        CHECK(shell.image == stack.layout.image);

        // Oracle: deleting class-c objects from the originating scene and
        // re-rendering matches bit-exactly. Objects dropped from the stack
        // (never visible) are deleted from the oracle scene as well.
        const int victim = stack.instances[0].class_id;
        std::vector<int> deleted;
        for (size_t i = 0; i < scene.objects.size(); ++i) {
            const bool in_stack = [&] {
                for (const auto& inst : stack.instances)
                    if (inst.source_object == static_cast<int>(i)) return true;
                return false;
            }();
            if (!in_stack || scene.objects[i].class_id == victim)
                deleted.push_back(static_cast<int>(i));
        }
        const SceneSpec pruned_scene = scene.without_objects(deleted);
        const CompositeRender oracle = render_composite(pruned_scene);
        const ComposeResult removed = remove_objects(stack, {victim}, scene.class_table);
        CHECK(removed.image == oracle.image);
    }
}

TEST_CASE("remove_objects rejects unknown class ids") {
    Rng rng(45);
    const LayerStack stack = random_stack(rng, 4, 4, 1);
    const auto table = GenerationConfig::default_class_table();
    CHECK_THROWS_AS(remove_objects(stack, {99}, table), UnknownClassError);
}
