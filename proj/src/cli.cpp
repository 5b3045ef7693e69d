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

#include "ldikit/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "ldikit/io.hpp"
#include "ldikit/metrics.hpp"
#include "ldikit/parallel.hpp"
#include "ldikit/rng.hpp"
#include "png_io.hpp"

namespace ldikit::cli {

using Json = nlohmann::ordered_json;

namespace {

void write_json_file(const Json& j, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << j.dump(2) << '\n';
}

Json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("missing file: " + path.string());
    Json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw FormatError("bad json in " + path.string() + ": " + e.what());
    }
    return j;
}

Json generation_config_json(const GenerationConfig& c) {
    Json j;
    j["width"] = c.width;
    j["height"] = c.height;
    j["min_objects"] = c.min_objects;
    j["max_objects"] = c.max_objects;
    j["overlap_threshold"] = c.overlap_threshold;
    j["pose_perturbation"] = {{"max_translation", c.pose_perturbation.max_translation},
                              {"max_rotation", c.pose_perturbation.max_rotation}};
    j["detection_noise"] = {{"radius_min", c.detection_noise.radius_min},
                            {"radius_max", c.detection_noise.radius_max},
                            {"blur_radius", c.detection_noise.blur_radius},
                            {"score_smoothing", c.detection_noise.score_smoothing}};
    Json table = Json::array();
    for (const auto& [id, name] : c.class_table)
        table.push_back({{"id", id}, {"name", name}});
    j["class_table"] = table;
    return j;
}

void generation_config_from_json(const Json& j, GenerationConfig& c) {
    if (j.contains("width")) c.width = j.at("width");
    if (j.contains("height")) c.height = j.at("height");
    if (j.contains("min_objects")) c.min_objects = j.at("min_objects");
    if (j.contains("max_objects")) c.max_objects = j.at("max_objects");
    if (j.contains("overlap_threshold")) c.overlap_threshold = j.at("overlap_threshold");
    if (j.contains("pose_perturbation")) {
        const Json& p = j.at("pose_perturbation");
        if (p.contains("max_translation"))
            c.pose_perturbation.max_translation = p.at("max_translation");
        if (p.contains("max_rotation")) c.pose_perturbation.max_rotation = p.at("max_rotation");
    }
    if (j.contains("detection_noise")) {
        const Json& n = j.at("detection_noise");
        if (n.contains("radius_min")) c.detection_noise.radius_min = n.at("radius_min");
        if (n.contains("radius_max")) c.detection_noise.radius_max = n.at("radius_max");
        if (n.contains("blur_radius")) c.detection_noise.blur_radius = n.at("blur_radius");
        if (n.contains("score_smoothing"))
            c.detection_noise.score_smoothing = n.at("score_smoothing");
    }
    if (j.contains("class_table")) {
        c.class_table.clear();
        for (const auto& entry : j.at("class_table"))
            c.class_table[entry.at("id").get<int>()] = entry.at("name").get<std::string>();
    }
}

std::string scene_dir_name(int index) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "scene_%03d", index);
    return buf;
}

// Deterministic index palette for the argmin map: golden-angle hue walk,
// layout in gray, unassigned pixels black.
std::array<std::uint8_t, 3> index_color(int index, int layout_index) {
    if (index < 0) return {0, 0, 0};
    if (index == layout_index) return {190, 190, 190};
    const double hue = std::fmod(0.61803398875 * index, 1.0) * 6.0;
    const double s = 0.75, v = 0.95;
    const int i = static_cast<int>(hue);
    const double f = hue - i;
    const double p = v * (1 - s), q = v * (1 - s * f), t = v * (1 - s * (1 - f));
    double r = v, g = t, b = p;
    switch (i % 6) {
    case 0: r = v; g = t; b = p; break;
    case 1: r = q; g = v; b = p; break;
    case 2: r = p; g = v; b = t; break;
    case 3: r = p; g = q; b = v; break;
    case 4: r = t; g = p; b = v; break;
    case 5: r = v; g = p; b = q; break;
    }
    return {static_cast<std::uint8_t>(std::lround(r * 255)),
            static_cast<std::uint8_t>(std::lround(g * 255)),
            static_cast<std::uint8_t>(std::lround(b * 255))};
}

void write_index_map_png(const Plane<std::int16_t>& index_map, int layout_index,
                         const std::filesystem::path& path) {
    pngio::Rgba8 img;
    img.width = index_map.width();
    img.height = index_map.height();
    img.data.resize(static_cast<size_t>(img.width) * img.height * 4);
    for (size_t i = 0; i < index_map.size(); ++i) {
        const auto rgb = index_color(index_map.data()[i], layout_index);
        img.data[4 * i + 0] = rgb[0];
        img.data[4 * i + 1] = rgb[1];
        img.data[4 * i + 2] = rgb[2];
        img.data[4 * i + 3] = 255;
    }
    pngio::write_rgba8(path, img);
}

Pose pose_from_flags(const std::string& flags) {
    std::array<double, 6> v{};
    std::stringstream ss(flags);
    std::string item;
    size_t n = 0;
    while (std::getline(ss, item, ',')) {
        if (n >= 6) throw ConfigError("pose: expected 6 comma-separated values");
        try {
            v[n] = std::stod(item);
        } catch (const std::exception&) {
            throw ConfigError("pose: cannot parse '" + item + "'");
        }
        ++n;
    }
    if (n != 6) throw ConfigError("pose: expected 6 comma-separated values");
    Pose delta;
    delta.translation = {v[0], v[1], v[2]};
    delta.rotation = rotation_from_euler(v[4] * kDegToRad, v[3] * kDegToRad,
                                         v[5] * kDegToRad);
    return delta;
}

struct EvalSide {
    RgbadImage image;
    std::optional<Ldi> ldi;
};

EvalSide load_eval_side(const std::filesystem::path& dir) {
    EvalSide side;
    if (std::filesystem::exists(dir / "manifest.json")) {
        const io::LoadedStack loaded = io::load_stack(dir);
        side.ldi = ldi_from_stack(loaded.stack);
        side.image = first_layer(*side.ldi);
    } else {
        side.image = io::load_view_image(dir);
    }
    return side;
}

} // namespace

GenSummary cmd_gen(const GenOptions& options) {
    if (options.out.empty()) throw ConfigError("gen: --out is required");
    if (options.count < 0) throw ConfigError("gen: negative count");
    options.config.validate();
    if (options.threads > 0) set_max_threads(options.threads);

    const std::filesystem::path out_dir(options.out);
    std::filesystem::create_directories(out_dir);

    Json record;
    record["command"] = "gen";
    record["seed"] = std::to_string(options.seed);
    record["count"] = options.count;
    record["generation"] = generation_config_json(options.config);
    write_json_file(record, out_dir / "run_config.json");

    GenSummary summary;
    const int max_attempts = options.count * 50;
    while (summary.accepted < options.count && summary.attempted < max_attempts) {
        const std::uint64_t scene_seed =
            derive_seed(options.seed, static_cast<std::uint64_t>(summary.attempted));
        ++summary.attempted;
        const SceneSpec scene = sample_scene(options.config, scene_seed);
        const LayerStack stack = generate_view(scene);
        const double overlap = overlap_fraction(stack);
        if (overlap < options.config.overlap_threshold) continue;

        const auto detections = simulate_detections(stack, options.config.detection_noise,
                                                    derive_seed(scene_seed, 9001));
        const Pose target_pose = perturb_pose(scene.pose, options.config.pose_perturbation,
                                              derive_seed(scene_seed, 9002));
        const CompositeRender target = render_composite(scene.with_pose(target_pose));

        io::SceneMeta meta;
        meta.class_table = options.config.class_table;
        meta.seed = scene_seed;
        meta.overlap = overlap;
        meta.target_pose = target_pose;

        const std::filesystem::path scene_dir = out_dir / scene_dir_name(summary.accepted);
        io::save_stack(stack, detections, meta, scene_dir);
        io::save_view_image(target.image, scene_dir / "target");
        ++summary.accepted;
    }
    std::printf("gen: accepted %d/%d scenes (ratio %.3f)\n", summary.accepted,
                summary.attempted, summary.acceptance_ratio());
    return summary;
}

void cmd_compose(const ComposeOptions& options) {
    const io::LoadedStack loaded = io::load_stack(options.scene);
    const ComposeResult result =
        min_depth_pool(loaded.stack, static_cast<float>(options.alpha_min));
    const std::filesystem::path out_dir(options.out);
    io::save_view_image(result.image, out_dir);
    write_index_map_png(result.index_map, loaded.stack.layout_index(),
                        out_dir / "index_map.png");
    Json record;
    record["command"] = "compose";
    record["alpha_min"] = options.alpha_min;
    write_json_file(record, out_dir / "run_config.json");
}

SynthSummary cmd_synth(const SynthOptions& options) {
    const io::LoadedStack loaded = io::load_stack(options.scene);
    const LayerStack& stack = loaded.stack;

    Pose target_pose;
    Json pose_record;
    if (options.pose.has_value()) {
        const Pose delta = pose_from_flags(*options.pose);
        target_pose = stack.view_pose.compose(delta);
        pose_record["source"] = "flags";
        pose_record["flags"] = *options.pose;
    } else {
        if (!loaded.meta.target_pose.has_value())
            throw ConfigError("synth: no --pose given and the scene stores no target pose");
        target_pose = *loaded.meta.target_pose;
        pose_record["source"] = "manifest";
    }

    const Ldi ldi = ldi_from_stack(stack);
    WarpStats stats;
    const RgbadImage synth = synthesize_view(
        ldi, stack.camera, relative_pose(stack.view_pose, target_pose), options.warp,
        &stats);

    const std::filesystem::path out_dir(options.out);
    io::save_view_image(synth, out_dir);

    pngio::Gray8 holes;
    holes.width = synth.width();
    holes.height = synth.height();
    holes.data.resize(synth.valid.size());
    long hole_count = 0;
    for (size_t i = 0; i < synth.valid.size(); ++i) {
        const bool invalid = synth.valid.data()[i] == 0;
        holes.data[i] = invalid ? 255 : 0;
        hole_count += invalid;
    }
    pngio::write_gray8(out_dir / "holes.png", holes);

    SynthSummary summary;
    summary.fill_ratio =
        1.0 - static_cast<double>(hole_count) / static_cast<double>(synth.valid.size());

    Json record;
    record["command"] = "synth";
    record["pose"] = pose_record;
    record["target_pose"] = {{"rotation", target_pose.rotation.m},
                             {"translation",
                              {target_pose.translation.x, target_pose.translation.y,
                               target_pose.translation.z}}};
    record["warp"] = {{"z_test_epsilon", options.warp.z_test_epsilon},
                      {"fill_depth_tolerance", options.warp.fill_depth_tolerance},
                      {"max_fill_passes", options.warp.max_fill_passes}};
    record["fill_ratio"] = summary.fill_ratio;
    write_json_file(record, out_dir / "run_config.json");
    std::printf("synth: fill ratio %.4f\n", summary.fill_ratio);
    return summary;
}

void cmd_remove(const RemoveOptions& options) {
    const io::LoadedStack loaded = io::load_stack(options.scene);
    int class_id = -1;
    for (const auto& [id, name] : loaded.meta.class_table) {
        if (name == options.class_name) {
            class_id = id;
            break;
        }
    }
    if (class_id < 0) {
        std::string available;
        for (const auto& [id, name] : loaded.meta.class_table) {
            if (!available.empty()) available += ", ";
            available += name;
        }
        throw UnknownClassError("unknown class '" + options.class_name +
                                "'; available: " + available);
    }
    const ComposeResult result =
        remove_objects(loaded.stack, {class_id}, loaded.meta.class_table);
    int kept = 0;
    for (const auto& inst : loaded.stack.instances) kept += inst.class_id != class_id;
    const std::filesystem::path out_dir(options.out);
    io::save_view_image(result.image, out_dir);
    write_index_map_png(result.index_map, kept, out_dir / "index_map.png");
    Json record;
    record["command"] = "remove";
    record["class"] = options.class_name;
    record["class_id"] = class_id;
    write_json_file(record, out_dir / "run_config.json");
}

void cmd_eval(const EvalOptions& options) {
    const EvalSide pred = load_eval_side(options.pred);
    const EvalSide gt = load_eval_side(options.gt);
    require_same_size(pred.image, gt.image, "eval");

    Mask mutual(pred.image.width(), pred.image.height(), 0);
    for (size_t i = 0; i < mutual.size(); ++i)
        mutual.data()[i] =
            (pred.image.valid.data()[i] && gt.image.valid.data()[i]) ? 1 : 0;

    const SsimConfig ssim_config;
    Json report;
    report["color"] = {{"mpe", color_mpe(pred.image, gt.image, mutual)},
                       {"rmse", color_rmse(pred.image, gt.image, mutual)},
                       {"ssim", ssim_color(pred.image, gt.image, ssim_config)},
                       {"pixel_count", mask_count(mutual)}};
    report["depth"] = {{"mpe", depth_mpe(pred.image, gt.image, mutual)},
                       {"rmse", depth_rmse(pred.image, gt.image, mutual)},
                       {"pixel_count", mask_count(mutual)}};
    report["ssim_config"] = {{"window", ssim_config.window},
                             {"c1", ssim_config.c1},
                             {"c2", ssim_config.c2}};

    if (pred.ldi.has_value() && gt.ldi.has_value()) {
        const auto layers = per_layer_eval(*pred.ldi, *gt.ldi, 16);
        Json layer_json = Json::array();
        for (const auto& l : layers) {
            layer_json.push_back({{"layer", l.layer},
                                  {"pixel_count", l.pixel_count},
                                  {"color_mpe", l.color_mpe},
                                  {"color_rmse", l.color_rmse},
                                  {"depth_mpe", l.depth_mpe},
                                  {"depth_rmse", l.depth_rmse}});
        }
        report["per_layer"] = layer_json;
        const Ldi gt_ldis[] = {*gt.ldi};
        report["layer_histogram"] =
            layer_histogram(std::span<const Ldi>(gt_ldis, 1));
    }

    write_json_file(report, options.report);
    std::printf("eval: color mpe %.6f rmse %.6f ssim %.6f | depth mpe %.6f rmse %.6f\n",
                report["color"]["mpe"].get<double>(), report["color"]["rmse"].get<double>(),
                report["color"]["ssim"].get<double>(), report["depth"]["mpe"].get<double>(),
                report["depth"]["rmse"].get<double>());
}

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"ldikit: layered depth image dataset generation, composition,\n"
                 "view synthesis, object removal and evaluation.\n"};
    app.require_subcommand(1);
    app.footer("Exit codes: 0 ok, 1 usage, 2 config, 3 io, 4 format, 5 dimension,\n"
               "6 geometry, 7 unknown class, 8 empty mask, 9 internal error.");

    GenOptions gen;
    std::string gen_config_path;
    auto* gen_cmd = app.add_subcommand("gen", "Generate a layered scene dataset");
    gen_cmd->add_option("--seed", gen.seed, "Base seed");
    gen_cmd->add_option("--count", gen.count, "Number of accepted scenes");
    gen_cmd->add_option("--width", gen.config.width, "Image width");
    gen_cmd->add_option("--height", gen.config.height, "Image height");
    gen_cmd->add_option("--min-objects", gen.config.min_objects, "Minimum objects");
    gen_cmd->add_option("--max-objects", gen.config.max_objects, "Maximum objects");
    gen_cmd->add_option("--overlap-threshold", gen.config.overlap_threshold,
                        "Minimum fraction of multiply-covered pixels");
    gen_cmd->add_option("--out", gen.out, "Output directory")->required();
    gen_cmd->add_option("--threads", gen.threads, "Worker threads (0 = auto)");
    gen_cmd->add_option("--config", gen_config_path,
                        "JSON config (same schema as run_config.json)");

    ComposeOptions compose;
    auto* compose_cmd = app.add_subcommand("compose", "Minimum-depth-pool a scene");
    compose_cmd->add_option("scene", compose.scene, "Scene directory")->required();
    compose_cmd->add_option("--out", compose.out, "Output directory")->required();
    compose_cmd->add_option("--alpha-min", compose.alpha_min, "Alpha threshold");

    SynthOptions synth;
    std::string synth_pose;
    auto* synth_cmd = app.add_subcommand("synth", "Synthesize a novel view");
    synth_cmd->add_option("scene", synth.scene, "Scene directory")->required();
    synth_cmd->add_option("--out", synth.out, "Output directory")->required();
    auto* pose_opt = synth_cmd->add_option(
        "--pose", synth_pose,
        "tx,ty,tz,rx,ry,rz (m, deg); default: the stored target pose");

    RemoveOptions remove;
    auto* remove_cmd = app.add_subcommand("remove", "Remove an object class");
    remove_cmd->add_option("scene", remove.scene, "Scene directory")->required();
    remove_cmd->add_option("--class", remove.class_name, "Class name")->required();
    remove_cmd->add_option("--out", remove.out, "Output directory")->required();

    EvalOptions eval;
    auto* eval_cmd = app.add_subcommand("eval", "Compare two scenes or view images");
    eval_cmd->add_option("pred", eval.pred, "Prediction directory")->required();
    eval_cmd->add_option("gt", eval.gt, "Ground truth directory")->required();
    eval_cmd->add_option("--report", eval.report, "Report JSON path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (gen_cmd->parsed()) {
            if (!gen_config_path.empty()) {
                GenOptions from_file = gen;
                const Json j = read_json_file(gen_config_path);
                if (j.contains("seed") && gen_cmd->count("--seed") == 0)
                    from_file.seed = std::stoull(j.at("seed").get<std::string>());
                if (j.contains("count") && gen_cmd->count("--count") == 0)
                    from_file.count = j.at("count");
                if (j.contains("generation"))
                    generation_config_from_json(j.at("generation"), from_file.config);
                // Explicit flags keep precedence over the file.
                if (gen_cmd->count("--width")) from_file.config.width = gen.config.width;
                if (gen_cmd->count("--height")) from_file.config.height = gen.config.height;
                if (gen_cmd->count("--min-objects"))
                    from_file.config.min_objects = gen.config.min_objects;
                if (gen_cmd->count("--max-objects"))
                    from_file.config.max_objects = gen.config.max_objects;
                if (gen_cmd->count("--overlap-threshold"))
                    from_file.config.overlap_threshold = gen.config.overlap_threshold;
                cmd_gen(from_file);
            } else {
                cmd_gen(gen);
            }
        } else if (compose_cmd->parsed()) {
            cmd_compose(compose);
        } else if (synth_cmd->parsed()) {
            if (pose_opt->count() > 0) synth.pose = synth_pose;
            cmd_synth(synth);
        } else if (remove_cmd->parsed()) {
            cmd_remove(remove);
        } else if (eval_cmd->parsed()) {
            cmd_eval(eval);
        }
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitConfig;
    } catch (const IoError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitIo;
    } catch (const FormatError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitFormat;
    } catch (const DimensionError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitDimension;
    } catch (const GeometryError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitGeometry;
    } catch (const UnknownClassError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUnknownClass;
    } catch (const EmptyMaskError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitEmptyMask;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "internal error: %s\n", e.what());
        return kExitInternal;
    }
    return kExitOk;
}

} // namespace ldikit::cli
