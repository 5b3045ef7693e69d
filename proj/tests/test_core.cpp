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

#include <algorithm>

#include "ldikit/compose.hpp"
#include "ldikit/ldi.hpp"
#include "testutil.hpp"

using namespace ldikit;
using testutil::random_stack;

namespace {

// Independent per-pixel insertion-sort oracle over (depth, layer order).
std::vector<LdiSample> sorted_samples_oracle(const LayerStack& stack, int x, int y,
                                             float alpha_min) {
    std::vector<LdiSample> list;
    for (int l = 0; l < stack.layer_count(); ++l) {
        const RgbadImage& img = stack.layer_image(l);
        if (!img.valid.at(x, y) || img.a.at(x, y) < alpha_min) continue;
        LdiSample s;
        s.rgba = {img.r.at(x, y), img.g.at(x, y), img.b.at(x, y), img.a.at(x, y)};
        s.depth = img.depth.at(x, y);
        s.layer = static_cast<std::uint16_t>(l);
        // Insertion sort, strictly-greater comparison: equal depths keep
        // the earlier layer in front.
        size_t pos = list.size();
        while (pos > 0 && list[pos - 1].depth > s.depth) --pos;
        list.insert(list.begin() + static_cast<std::ptrdiff_t>(pos), s);
    }
    return list;
}

} // namespace

TEST_CASE("ldi_from_stack sorts two layers at a pixel") {
    Rng rng(1);
    LayerStack stack = random_stack(rng, 2, 2, 1, 0.0);
    stack.instances[0].image.set_pixel(0, 0, 0.1f, 0.2f, 0.3f, 1.f, 2.f);
    for (int y = 0; y < 2; ++y)
        for (int x = 0; x < 2; ++x)
            stack.layout.image.set_pixel(x, y, 0.5f, 0.5f, 0.5f, 1.f, 5.f);

    const Ldi ldi = ldi_from_stack(stack);
    REQUIRE(ldi.sample_count(0, 0) == 2);
    const auto s = ldi.samples_at(0, 0);
    CHECK(s[0].depth == 2.f);
    CHECK(s[0].layer == 0);
    CHECK(s[1].depth == 5.f);
    CHECK(s[1].layer == 1); // layout
    CHECK(ldi.sample_count(1, 1) == 1);
}

TEST_CASE("ldi_from_stack equals the insertion-sort oracle on random stacks") {
    Rng rng(2024);
    for (int trial = 0; trial < 30; ++trial) {
        const int instances = static_cast<int>(rng.uniform_int(0, 3));
        // Coarse depths so exact ties occur and exercise the tie rule.
        LayerStack stack = random_stack(rng, 4, 4, instances);
        for (auto& inst : stack.instances)
            for (size_t p = 0; p < inst.image.depth.size(); ++p)
                if (inst.image.valid.data()[p])
                    inst.image.depth.data()[p] =
                        static_cast<float>(rng.uniform_int(1, 4));
        const Ldi ldi = ldi_from_stack(stack);
        for (int y = 0; y < 4; ++y) {
            for (int x = 0; x < 4; ++x) {
                const auto oracle = sorted_samples_oracle(stack, x, y, 0.5f);
                const auto got = ldi.samples_at(x, y);
                REQUIRE(got.size() == oracle.size());
                for (size_t i = 0; i < oracle.size(); ++i) {
                    CHECK(got[i] == oracle[i]);
                    if (i > 0) CHECK(got[i].depth >= got[i - 1].depth);
                }
            }
        }
    }
}

TEST_CASE("ldi_from_stack rejects mismatched dimensions") {
    Rng rng(3);
    LayerStack stack = random_stack(rng, 4, 4, 1);
    stack.instances[0].image = RgbadImage(3, 4);
    CHECK_THROWS_AS(ldi_from_stack(stack), DimensionError);
}

TEST_CASE("first_layer picks the nearest sample and min_depth_pool agrees") {
    Rng rng(77);
    for (int trial = 0; trial < 20; ++trial) {
        const LayerStack stack =
            random_stack(rng, 5, 5, static_cast<int>(rng.uniform_int(0, 3)));
        const RgbadImage front = first_layer(ldi_from_stack(stack, 0.5f));
        const ComposeResult pooled = min_depth_pool(stack, 0.5f);
        CHECK(front == pooled.image);
    }
}

TEST_CASE("first_layer of an empty pixel is invalid") {
    Rng rng(5);
    LayerStack stack = random_stack(rng, 2, 2, 0);
    stack.layout.image.clear_pixel(0, 0); // poke a hole
    Ldi ldi = ldi_from_stack(stack);
    const RgbadImage front = first_layer(ldi);
    CHECK(front.valid.at(0, 0) == 0);
    CHECK(front.depth.at(0, 0) == 0.f);
    CHECK(front.valid.at(1, 1) == 1);
}

TEST_CASE("single-layer ldi reproduces that layer") {
    Rng rng(6);
    LayerStack stack = random_stack(rng, 6, 4, 0);
    const RgbadImage front = first_layer(ldi_from_stack(stack));
    CHECK(front == stack.layout.image);
}

TEST_CASE("pad_borders grows rasters and shifts the principal point") {
    Rng rng(7);
    LayerStack stack = random_stack(rng, 384, 512, 1);
    // Note width x height = 384x512 as in the standard training size.
    const LayerStack padded = pad_borders(stack); // defaults 16, 12
    CHECK(padded.width() == 384 + 2 * 12);
    CHECK(padded.height() == 512 + 2 * 16);
    CHECK(padded.camera.cx == stack.camera.cx + 12);
    CHECK(padded.camera.cy == stack.camera.cy + 16);
    CHECK(padded.camera.width == 408);
    CHECK(padded.camera.height == 544);
    // New border pixels are invalid with the zero sentinel.
    CHECK(padded.layout.image.valid.at(0, 0) == 0);
    CHECK(padded.layout.image.depth.at(0, 0) == 0.f);
    CHECK(padded.instances[0].image.valid.at(5, 0) == 0);
}

TEST_CASE("pad with zero bands is the identity") {
    Rng rng(8);
    const LayerStack stack = random_stack(rng, 9, 7, 2);
    const LayerStack padded = pad_borders(stack, 0, 0);
    CHECK(padded.layout.image == stack.layout.image);
    for (size_t i = 0; i < stack.instances.size(); ++i) {
        CHECK(padded.instances[i].image == stack.instances[i].image);
        CHECK(padded.instances[i].visibility_mask == stack.instances[i].visibility_mask);
    }
    CHECK(padded.camera.cx == stack.camera.cx);
}

TEST_CASE("pad then crop round-trips bit-exactly") {
    Rng rng(9);
    const LayerStack stack = random_stack(rng, 13, 11, 3);
    const LayerStack back = crop_borders(pad_borders(stack, 16, 12), 16, 12);
    CHECK(back.layout.image == stack.layout.image);
    REQUIRE(back.instances.size() == stack.instances.size());
    for (size_t i = 0; i < stack.instances.size(); ++i) {
        CHECK(back.instances[i].image == stack.instances[i].image);
        CHECK(back.instances[i].visibility_mask == stack.instances[i].visibility_mask);
        CHECK(back.instances[i].confidence_mask == stack.instances[i].confidence_mask);
    }
    CHECK(back.camera.cx == stack.camera.cx);
    CHECK(back.camera.cy == stack.camera.cy);
    CHECK(back.camera.width == stack.camera.width);
}

TEST_CASE("pad_borders rejects negative bands") {
    Rng rng(10);
    const LayerStack stack = random_stack(rng, 4, 4, 0);
    CHECK_THROWS_AS(pad_borders(stack, -1, 0), ConfigError);
}

TEST_CASE("pose validation and composition") {
    Pose p = Pose::identity();
    p.validate();
    p.rotation = rotation_from_euler(0.3, -0.2, 0.1);
    p.translation = {1, 2, 3};
    p.validate();
    const Pose inv = p.inverse();
    const Pose id = p.compose(inv);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            CHECK(id.rotation(i, j) == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-12));
    CHECK(id.translation.norm() == doctest::Approx(0.0).epsilon(1e-12));

    Pose bad;
    bad.rotation(0, 0) = 2.0;
    CHECK_THROWS_AS(bad.validate(), GeometryError);
}

TEST_CASE("camera projection round-trips pixel centers") {
    Camera cam;
    cam.fx = 200;
    cam.fy = 180;
    cam.cx = 64;
    cam.cy = 48;
    cam.width = 128;
    cam.height = 96;
    cam.validate();
    for (int u : {0, 17, 127}) {
        for (int v : {0, 33, 95}) {
            const Vec3 p = cam.unproject(u, v, 2.5);
            double uu, vv;
            cam.project(p, uu, vv);
            CHECK(uu == doctest::Approx(u + 0.5).epsilon(1e-12));
            CHECK(vv == doctest::Approx(v + 0.5).epsilon(1e-12));
        }
    }
    Camera bad = cam;
    bad.fx = 0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("RgbadImage invariant checks") {
    RgbadImage img(2, 2);
    img.check(); // all-invalid zero image is fine
    img.set_pixel(0, 0, 0.5f, 0.5f, 0.5f, 1.f, 3.f);
    img.check();
    img.depth.at(0, 0) = 0.f; // valid pixel with zero depth
    CHECK_THROWS_AS(img.check(), GeometryError);
    img.depth.at(0, 0) = 3.f;
    img.valid.at(1, 1) = 0;
    img.r.at(1, 1) = 0.25f; // invalid pixel must hold the zero sentinel
    CHECK_THROWS_AS(img.check(), GeometryError);
}
