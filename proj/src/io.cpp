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

#include "ldikit/io.hpp"

#include <json.hpp>

#include <cmath>
#include <cstring>
#include <fstream>

#include "png_io.hpp"

namespace ldikit::io {

using Json = nlohmann::ordered_json;

namespace {

constexpr double kMaxDepthMeters = 65.535;

std::uint8_t quantize8(float v) {
    const float scaled = v * 255.f;
    const float clamped = scaled < 0.f ? 0.f : (scaled > 255.f ? 255.f : scaled);
    return static_cast<std::uint8_t>(std::lround(clamped));
}

std::uint16_t quantize_depth_mm(float meters, const char* what) {
    const double mm = static_cast<double>(meters) * 1000.0;
    if (meters >= kMaxDepthMeters)
        throw FormatError(std::string(what) + ": depth >= 65.535 m cannot be stored");
    const long q = std::lround(mm);
    if (q <= 0)
        throw FormatError(std::string(what) + ": valid depth below 0.5 mm cannot be stored");
    return static_cast<std::uint16_t>(q);
}

pngio::Rgba8 encode_rgba(const RgbadImage& img) {
    pngio::Rgba8 out;
    out.width = img.width();
    out.height = img.height();
    out.data.resize(static_cast<size_t>(out.width) * out.height * 4);
    for (size_t i = 0; i < img.r.size(); ++i) {
        out.data[4 * i + 0] = quantize8(img.r.data()[i]);
        out.data[4 * i + 1] = quantize8(img.g.data()[i]);
        out.data[4 * i + 2] = quantize8(img.b.data()[i]);
        out.data[4 * i + 3] = quantize8(img.a.data()[i]);
    }
    return out;
}

pngio::Gray16 encode_depth(const RgbadImage& img, const char* what) {
    pngio::Gray16 out;
    out.width = img.width();
    out.height = img.height();
    out.data.resize(img.depth.size(), 0);
    for (size_t i = 0; i < img.depth.size(); ++i) {
        if (!img.valid.data()[i]) continue; // invalid encodes as 0
        out.data[i] = quantize_depth_mm(img.depth.data()[i], what);
    }
    return out;
}

RgbadImage decode_image(const pngio::Rgba8& rgba, const pngio::Gray16& depth,
                        const char* what) {
    if (rgba.width != depth.width || rgba.height != depth.height)
        throw DimensionError(std::string(what) + ": rgba/depth size mismatch");
    RgbadImage img(rgba.width, rgba.height);
    for (size_t i = 0; i < img.r.size(); ++i) {
        if (depth.data[i] == 0) continue; // invalid pixel, keep zero sentinel
        img.valid.data()[i] = 1;
        img.r.data()[i] = static_cast<float>(rgba.data[4 * i + 0]) / 255.f;
        img.g.data()[i] = static_cast<float>(rgba.data[4 * i + 1]) / 255.f;
        img.b.data()[i] = static_cast<float>(rgba.data[4 * i + 2]) / 255.f;
        img.a.data()[i] = static_cast<float>(rgba.data[4 * i + 3]) / 255.f;
        img.depth.data()[i] = static_cast<float>(depth.data[i]) / 1000.f;
    }
    return img;
}

void write_image_pair(const RgbadImage& img, const std::filesystem::path& dir,
                      const char* what) {
    std::filesystem::create_directories(dir);
    pngio::write_rgba8(dir / "rgba.png", encode_rgba(img));
    pngio::write_gray16(dir / "depth.png", encode_depth(img, what));
}

RgbadImage read_image_pair(const std::filesystem::path& dir, const char* what) {
    return decode_image(pngio::read_rgba8(dir / "rgba.png"),
                        pngio::read_gray16(dir / "depth.png"), what);
}

Json pose_json(const Pose& pose) {
    Json j;
    j["rotation"] = pose.rotation.m;
    j["translation"] = {pose.translation.x, pose.translation.y, pose.translation.z};
    return j;
}

Pose pose_from_json(const Json& j) {
    Pose p;
    const auto rot = j.at("rotation");
    for (int i = 0; i < 9; ++i) p.rotation.m[static_cast<size_t>(i)] = rot.at(i);
    const auto tr = j.at("translation");
    p.translation = {tr.at(0), tr.at(1), tr.at(2)};
    return p;
}

void write_json(const Json& j, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << j.dump(2) << '\n';
}

Json read_json(const std::filesystem::path& path) {
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

std::string instance_dir_name(size_t index) {
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%03zu", index);
    return buf;
}

// Little-endian primitive writers for the LDI container.
void put_u16(std::string& buf, std::uint16_t v) {
    buf.push_back(static_cast<char>(v & 0xff));
    buf.push_back(static_cast<char>((v >> 8) & 0xff));
}
void put_u32(std::string& buf, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}
void put_u64(std::string& buf, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

struct ByteReader {
    const std::uint8_t* p;
    size_t remaining;

    void need(size_t n, const char* what) const {
        if (remaining < n) throw FormatError(std::string("truncated LDI file: ") + what);
    }
    std::uint16_t u16() {
        need(2, "u16");
        std::uint16_t v = static_cast<std::uint16_t>(p[0] | (p[1] << 8));
        p += 2;
        remaining -= 2;
        return v;
    }
    std::uint32_t u32() {
        need(4, "u32");
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(p[i]) << (8 * i);
        p += 4;
        remaining -= 4;
        return v;
    }
    std::uint64_t u64() {
        need(8, "u64");
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
        p += 8;
        remaining -= 8;
        return v;
    }
    float f32() {
        need(4, "f32");
        std::uint32_t bits = 0;
        for (int i = 0; i < 4; ++i) bits |= static_cast<std::uint32_t>(p[i]) << (8 * i);
        p += 4;
        remaining -= 4;
        float f;
        std::memcpy(&f, &bits, 4);
        return f;
    }
    std::uint8_t u8() {
        need(1, "u8");
        std::uint8_t v = *p;
        ++p;
        --remaining;
        return v;
    }
};

} // namespace

void save_stack(const LayerStack& stack, std::span<const Detection> detections,
                const SceneMeta& meta, const std::filesystem::path& dir) {
    stack.check_dimensions();
    if (!detections.empty() && detections.size() != stack.instances.size())
        throw DimensionError("save_stack: detections do not match instances");
    std::filesystem::create_directories(dir);

    write_image_pair(first_layer(ldi_from_stack(stack)), dir / "full", "full");
    write_image_pair(stack.layout.image, dir / "layout", "layout");

    Json manifest;
    manifest["version"] = kFormatVersion;
    manifest["camera"] = {{"fx", stack.camera.fx}, {"fy", stack.camera.fy},
                          {"cx", stack.camera.cx}, {"cy", stack.camera.cy},
                          {"width", stack.camera.width}, {"height", stack.camera.height}};
    manifest["pose"] = pose_json(stack.view_pose);
    Json table = Json::array();
    for (const auto& [id, name] : meta.class_table)
        table.push_back({{"id", id}, {"name", name}});
    manifest["class_table"] = table;
    manifest["structural_classes"] = stack.layout.structural_classes;
    manifest["seed"] = std::to_string(meta.seed); // u64-safe as a string
    manifest["overlap"] = meta.overlap;
    if (meta.target_pose.has_value())
        manifest["target_pose"] = pose_json(*meta.target_pose);

    Json instances = Json::array();
    for (size_t i = 0; i < stack.instances.size(); ++i) {
        const InstanceLayer& inst = stack.instances[i];
        const Detection* det = detections.empty() ? nullptr : &detections[i];
        const std::filesystem::path inst_dir = dir / "instances" / instance_dir_name(i);
        std::filesystem::create_directories(inst_dir);
        pngio::write_rgba8(inst_dir / "rgba.png", encode_rgba(inst.image));
        pngio::write_gray16(inst_dir / "depth.png", encode_depth(inst.image, "instance"));

        pngio::Gray8 mask;
        mask.width = inst.visibility_mask.width();
        mask.height = inst.visibility_mask.height();
        mask.data.resize(inst.visibility_mask.size());
        for (size_t p = 0; p < mask.data.size(); ++p)
            mask.data[p] = inst.visibility_mask.data()[p] ? 255 : 0;
        pngio::write_gray8(inst_dir / "mask.png", mask);

        const Plane<float>& conf_src =
            det != nullptr ? det->confidence : inst.confidence_mask;
        pngio::Gray8 conf;
        conf.width = conf_src.width();
        conf.height = conf_src.height();
        conf.data.resize(conf_src.size());
        for (size_t p = 0; p < conf.data.size(); ++p)
            conf.data[p] = quantize8(conf_src.data()[p]);
        pngio::write_gray8(inst_dir / "conf.png", conf);

        Json m;
        m["class_id"] = inst.class_id;
        m["class_scores"] = det != nullptr ? det->class_scores : inst.class_scores;
        m["touches_border"] = inst.touches_border;
        m["source_object"] = inst.source_object;
        write_json(m, inst_dir / "meta.json");

        Json entry;
        entry["index"] = i;
        entry["class_id"] = inst.class_id;
        entry["class_scores"] = det != nullptr ? det->class_scores : inst.class_scores;
        entry["touches_border"] = inst.touches_border;
        instances.push_back(entry);
    }
    manifest["instances"] = instances;
    write_json(manifest, dir / "manifest.json");
}

LoadedStack load_stack(const std::filesystem::path& dir) {
    const Json manifest = read_json(dir / "manifest.json");
    const int version = manifest.at("version");
    if (version != kFormatVersion)
        throw FormatError("unsupported dataset version " + std::to_string(version));

    LoadedStack out;
    const Json& cam = manifest.at("camera");
    out.stack.camera.fx = cam.at("fx");
    out.stack.camera.fy = cam.at("fy");
    out.stack.camera.cx = cam.at("cx");
    out.stack.camera.cy = cam.at("cy");
    out.stack.camera.width = cam.at("width");
    out.stack.camera.height = cam.at("height");
    out.stack.view_pose = pose_from_json(manifest.at("pose"));

    for (const auto& entry : manifest.at("class_table"))
        out.meta.class_table[entry.at("id").get<int>()] = entry.at("name").get<std::string>();
    out.meta.seed = std::stoull(manifest.at("seed").get<std::string>());
    out.meta.overlap = manifest.at("overlap");
    if (manifest.contains("target_pose"))
        out.meta.target_pose = pose_from_json(manifest.at("target_pose"));

    out.full = read_image_pair(dir / "full", "full");
    out.stack.layout.image = read_image_pair(dir / "layout", "layout");
    for (const auto& id : manifest.at("structural_classes"))
        out.stack.layout.structural_classes.push_back(id.get<int>());

    const size_t instance_count = manifest.at("instances").size();
    for (size_t i = 0; i < instance_count; ++i) {
        const std::filesystem::path inst_dir = dir / "instances" / instance_dir_name(i);
        InstanceLayer inst;
        inst.image = decode_image(pngio::read_rgba8(inst_dir / "rgba.png"),
                                  pngio::read_gray16(inst_dir / "depth.png"), "instance");

        const pngio::Gray8 mask = pngio::read_gray8(inst_dir / "mask.png");
        if (mask.width != inst.image.width() || mask.height != inst.image.height())
            throw DimensionError("load_stack: mask size mismatch");
        inst.visibility_mask = Mask(mask.width, mask.height, 0);
        for (size_t p = 0; p < mask.data.size(); ++p)
            inst.visibility_mask.data()[p] = mask.data[p] >= 128 ? 1 : 0;

        const pngio::Gray8 conf = pngio::read_gray8(inst_dir / "conf.png");
        if (conf.width != inst.image.width() || conf.height != inst.image.height())
            throw DimensionError("load_stack: confidence size mismatch");
        inst.confidence_mask = Plane<float>(conf.width, conf.height, 0.f);
        for (size_t p = 0; p < conf.data.size(); ++p)
            inst.confidence_mask.data()[p] = static_cast<float>(conf.data[p]) / 255.f;

        const Json m = read_json(inst_dir / "meta.json");
        inst.class_id = m.at("class_id");
        inst.class_scores = m.at("class_scores").get<std::vector<double>>();
        inst.touches_border = m.at("touches_border");
        inst.source_object = m.at("source_object");

        Detection det;
        det.confidence = inst.confidence_mask;
        det.class_scores = inst.class_scores;
        out.detections.push_back(std::move(det));
        out.stack.instances.push_back(std::move(inst));
    }
    out.stack.check_dimensions();
    if (out.full.width() != out.stack.width() || out.full.height() != out.stack.height())
        throw DimensionError("load_stack: full view size mismatch");
    return out;
}

void save_view_image(const RgbadImage& image, const std::filesystem::path& dir) {
    write_image_pair(image, dir, "view");
}

RgbadImage load_view_image(const std::filesystem::path& dir) {
    return read_image_pair(dir, "view");
}

void save_ldi(const Ldi& ldi, const std::filesystem::path& path) {
    std::string buf;
    buf.reserve(20 + ldi.offsets().size() * 2 + ldi.total_samples() * 10);
    buf += "LDI1";
    put_u32(buf, static_cast<std::uint32_t>(ldi.width()));
    put_u32(buf, static_cast<std::uint32_t>(ldi.height()));
    put_u64(buf, static_cast<std::uint64_t>(ldi.total_samples()));
    for (int y = 0; y < ldi.height(); ++y) {
        for (int x = 0; x < ldi.width(); ++x) {
            const int count = ldi.sample_count(x, y);
            if (count > 0xffff) throw FormatError("save_ldi: more than 65535 samples");
            put_u16(buf, static_cast<std::uint16_t>(count));
        }
    }
    for (int y = 0; y < ldi.height(); ++y) {
        for (int x = 0; x < ldi.width(); ++x) {
            for (const LdiSample& s : ldi.samples_at(x, y)) {
                for (int c = 0; c < 4; ++c)
                    buf.push_back(static_cast<char>(quantize8(s.rgba[static_cast<size_t>(c)])));
                std::uint32_t bits;
                std::memcpy(&bits, &s.depth, 4);
                put_u32(buf, bits);
                put_u16(buf, s.layer);
            }
        }
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!out) throw IoError("write failed: " + path.string());
}

Ldi load_ldi(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("missing file: " + path.string());
    std::string bytes((std::istreambuf_iterator<char>(in)),
                      std::istreambuf_iterator<char>());
    ByteReader r{reinterpret_cast<const std::uint8_t*>(bytes.data()), bytes.size()};
    r.need(4, "magic");
    if (std::memcmp(r.p, "LDI1", 4) != 0)
        throw FormatError("bad magic in " + path.string());
    r.p += 4;
    r.remaining -= 4;
    const std::uint32_t w = r.u32();
    const std::uint32_t h = r.u32();
    const std::uint64_t total = r.u64();

    const size_t pixels = static_cast<size_t>(w) * h;
    std::vector<std::uint32_t> offsets(pixels + 1, 0);
    std::uint64_t sum = 0;
    for (size_t p = 0; p < pixels; ++p) {
        const std::uint16_t c = r.u16();
        sum += c;
        offsets[p + 1] = static_cast<std::uint32_t>(sum);
    }
    if (sum != total)
        throw FormatError("LDI counts do not match sample total in " + path.string());
    if (r.remaining != total * 10)
        throw FormatError("truncated LDI sample array in " + path.string());

    std::vector<LdiSample> samples(static_cast<size_t>(total));
    for (auto& s : samples) {
        for (int c = 0; c < 4; ++c)
            s.rgba[static_cast<size_t>(c)] = static_cast<float>(r.u8()) / 255.f;
        s.depth = r.f32();
        s.layer = r.u16();
    }
    return Ldi(static_cast<int>(w), static_cast<int>(h), std::move(offsets),
               std::move(samples));
}

} // namespace ldikit::io
