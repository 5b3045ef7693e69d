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
#include <fstream>

#include "ldikit/io.hpp"
#include "ldikit/scenegen.hpp"
#include "testutil.hpp"

using namespace ldikit;
using testutil::TempDir;

namespace {

GenerationConfig tiny_config() {
    GenerationConfig c;
    c.width = 64;
    c.height = 64;
    c.min_objects = 1;
    c.max_objects = 3;
    return c;
}

struct SavedScene {
    LayerStack stack;
    std::vector<Detection> detections;
    io::SceneMeta meta;
};

SavedScene make_scene(std::uint64_t seed) {
    SavedScene s;
    const GenerationConfig config = tiny_config();
    const SceneSpec scene = sample_scene(config, seed);
    s.stack = generate_view(scene);
    s.detections = simulate_detections(s.stack, config.detection_noise, seed + 1);
    s.meta.class_table = config.class_table;
    s.meta.seed = seed;
    s.meta.overlap = overlap_fraction(s.stack);
    s.meta.target_pose = perturb_pose(scene.pose, config.pose_perturbation, seed + 2);
    return s;
}

void check_image_close(const RgbadImage& a, const RgbadImage& b, double color_tol,
                       double depth_tol) {
    REQUIRE(a.same_size(b));
    REQUIRE(a.valid == b.valid);
    for (size_t i = 0; i < a.r.size(); ++i) {
        if (!a.valid.data()[i]) continue;
        CHECK(std::abs(a.r.data()[i] - b.r.data()[i]) <= color_tol);
        CHECK(std::abs(a.g.data()[i] - b.g.data()[i]) <= color_tol);
        CHECK(std::abs(a.b.data()[i] - b.b.data()[i]) <= color_tol);
        CHECK(std::abs(a.a.data()[i] - b.a.data()[i]) <= color_tol);
        CHECK(std::abs(a.depth.data()[i] - b.depth.data()[i]) <= depth_tol);
    }
}

} // namespace

TEST_CASE("stack round-trips within the documented quantization") {
    const SavedScene s = make_scene(101);
    TempDir dir("stack_roundtrip");
    io::save_stack(s.stack, s.detections, s.meta, dir.path());
    const io::LoadedStack loaded = io::load_stack(dir.path());

    REQUIRE(loaded.stack.instances.size() == s.stack.instances.size());
    const double color_tol = 1.0 / 255.0;
    const double depth_tol = 0.0005 + 1e-9;
    check_image_close(loaded.stack.layout.image, s.stack.layout.image, color_tol,
                      depth_tol);
    for (size_t i = 0; i < s.stack.instances.size(); ++i) {
        const auto& got = loaded.stack.instances[i];
        const auto& want = s.stack.instances[i];
        check_image_close(got.image, want.image, color_tol, depth_tol);
        CHECK(got.visibility_mask == want.visibility_mask);
        CHECK(got.class_id == want.class_id);
        CHECK(got.touches_border == want.touches_border);
        CHECK(got.source_object == want.source_object);
        // Saved detections come back as the instance confidence/scores.
        CHECK(got.class_scores == s.detections[i].class_scores);
        for (size_t p = 0; p < got.confidence_mask.size(); ++p)
            CHECK(std::abs(got.confidence_mask.data()[p] -
                           s.detections[i].confidence.data()[p]) <= color_tol);
    }
    // Camera and pose round-trip exactly (JSON doubles).
    CHECK(loaded.stack.camera.fx == s.stack.camera.fx);
    CHECK(loaded.stack.camera.cx == s.stack.camera.cx);
    CHECK(loaded.stack.view_pose.rotation.m == s.stack.view_pose.rotation.m);
    CHECK(loaded.meta.seed == s.meta.seed);
    CHECK(loaded.meta.overlap == s.meta.overlap);
    REQUIRE(loaded.meta.target_pose.has_value());
    CHECK(loaded.meta.target_pose->translation.x == s.meta.target_pose->translation.x);
    CHECK(loaded.meta.class_table == s.meta.class_table);
}

TEST_CASE("saving twice yields byte-identical directories") {
    const SavedScene s = make_scene(202);
    TempDir a("save_a"), b("save_b");
    io::save_stack(s.stack, s.detections, s.meta, a.path());
    io::save_stack(s.stack, s.detections, s.meta, b.path());
    CHECK(testutil::directories_identical(a.path(), b.path()));
}

TEST_CASE("depth png quantization is exact at the millimeter grid") {
    Rng rng(60);
    LayerStack stack = testutil::random_stack(rng, 4, 4, 0);
    for (size_t i = 0; i < stack.layout.image.depth.size(); ++i)
        stack.layout.image.depth.data()[i] = 1.0f; // 1 m -> 1000 mm
    TempDir dir("depth_exact");
    io::save_stack(stack, {}, io::SceneMeta{}, dir.path());
    const io::LoadedStack loaded = io::load_stack(dir.path());
    for (size_t i = 0; i < loaded.stack.layout.image.depth.size(); ++i)
        CHECK(loaded.stack.layout.image.depth.data()[i] == 1.0f);
}

TEST_CASE("depths beyond the 16-bit range are rejected at save time") {
    Rng rng(61);
    LayerStack stack = testutil::random_stack(rng, 4, 4, 0);
    stack.layout.image.depth.at(0, 0) = 70.f;
    TempDir dir("depth_reject");
    CHECK_THROWS_AS(io::save_stack(stack, {}, io::SceneMeta{}, dir.path()), FormatError);
}

TEST_CASE("manifest version is checked") {
    const SavedScene s = make_scene(303);
    TempDir dir("version");
    io::save_stack(s.stack, s.detections, s.meta, dir.path());
    // Corrupt the version field.
    auto manifest_path = dir.path() / "manifest.json";
    std::string text;
    {
        std::ifstream in(manifest_path);
        text.assign((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
    }
    const auto pos = text.find("\"version\": 1");
    REQUIRE(pos != std::string::npos);
    text.replace(pos, 12, "\"version\": 9");
    {
        std::ofstream out(manifest_path, std::ios::trunc);
        out << text;
    }
    CHECK_THROWS_AS(io::load_stack(dir.path()), FormatError);
}

TEST_CASE("missing files give IoError") {
    TempDir dir("missing");
    CHECK_THROWS_AS(io::load_stack(dir.path()), IoError);
}

TEST_CASE("ldi container round trip") {
    Rng rng(62);
    const LayerStack stack = testutil::random_stack(rng, 9, 7, 2);
    const Ldi ldi = ldi_from_stack(stack);
    TempDir dir("ldi");
    const auto path = dir.path() / "scene.ldi";
    io::save_ldi(ldi, path);
    const Ldi loaded = io::load_ldi(path);

    REQUIRE(loaded.width() == ldi.width());
    REQUIRE(loaded.height() == ldi.height());
    REQUIRE(loaded.total_samples() == ldi.total_samples());
    for (int y = 0; y < ldi.height(); ++y) {
        for (int x = 0; x < ldi.width(); ++x) {
            const auto want = ldi.samples_at(x, y);
            const auto got = loaded.samples_at(x, y);
            REQUIRE(got.size() == want.size());
            for (size_t i = 0; i < want.size(); ++i) {
                // Depth and layer are exact; color is 8-bit quantized.
                CHECK(got[i].depth == want[i].depth);
                CHECK(got[i].layer == want[i].layer);
                for (int c = 0; c < 4; ++c)
                    CHECK(std::abs(got[i].rgba[static_cast<size_t>(c)] -
                                   want[i].rgba[static_cast<size_t>(c)]) <= 1.f / 255.f);
            }
        }
    }

    // Second trip is bit-identical at the file level.
    const auto path2 = dir.path() / "scene2.ldi";
    io::save_ldi(loaded, path2);
    CHECK(testutil::read_bytes(path) == testutil::read_bytes(path2));
}

TEST_CASE("empty ldi is a fixed-size header") {
    const Ldi empty(0, 0, {0}, {});
    TempDir dir("ldi_empty");
    const auto path = dir.path() / "empty.ldi";
    io::save_ldi(empty, path);
    CHECK(std::filesystem::file_size(path) == 20); // magic + dims + total
    const Ldi loaded = io::load_ldi(path);
    CHECK(loaded.width() == 0);
    CHECK(loaded.total_samples() == 0);
}

TEST_CASE("ldi loader rejects bad magic and truncation") {
    TempDir dir("ldi_bad");
    const auto bad_magic = dir.path() / "bad.ldi";
    {
        std::ofstream out(bad_magic, std::ios::binary);
        out << "NOPE" << std::string(16, '\0');
    }
    CHECK_THROWS_AS(io::load_ldi(bad_magic), FormatError);

    Rng rng(63);
    const Ldi ldi = ldi_from_stack(testutil::random_stack(rng, 4, 4, 1));
    const auto path = dir.path() / "good.ldi";
    io::save_ldi(ldi, path);
    auto bytes = testutil::read_bytes(path);
    bytes.resize(bytes.size() - 5); // chop the sample array
    const auto truncated = dir.path() / "trunc.ldi";
    {
        std::ofstream out(truncated, std::ios::binary);
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    }
    CHECK_THROWS_AS(io::load_ldi(truncated), FormatError);

    CHECK_THROWS_AS(io::load_ldi(dir.path() / "absent.ldi"), IoError);
}

TEST_CASE("view image pair round trip") {
    Rng rng(64);
    const RgbadImage img = testutil::random_image(rng, 12, 9, 0.8);
    TempDir dir("view");
    io::save_view_image(img, dir.path());
    const RgbadImage loaded = io::load_view_image(dir.path());
    check_image_close(loaded, img, 1.0 / 255.0, 0.0005 + 1e-9);
    CHECK(loaded.valid == img.valid);
}
