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

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ldikit/ldi.hpp"
#include "ldikit/scenegen.hpp"

namespace ldikit::io {

// On-disk scene layout (all rasters share one size):
//
//   manifest.json
//   full/rgba.png       8-bit RGBA, composed first layer
//   full/depth.png      16-bit grayscale, millimeters, 0 = invalid
//   layout/rgba.png, layout/depth.png
//   instances/NNN/rgba.png, depth.png, mask.png, conf.png, meta.json
//
// Color quantizes to 1/255 steps and depth to 0.5 mm; depths of 65.535 m
// or more do not fit the 16-bit millimeter encoding and are rejected at
// save time. Writing the same objects twice produces byte-identical files.

inline constexpr int kFormatVersion = 1;

/// Scene-level metadata stored in manifest.json alongside the camera and
/// pose taken from the stack itself.
struct SceneMeta {
    std::map<int, std::string> class_table;
    std::uint64_t seed = 0;
    double overlap = 0.0;
    /// Pose of the stored perturbed target view, when one exists.
    std::optional<Pose> target_pose;
};

void save_stack(const LayerStack& stack, std::span<const Detection> detections,
                const SceneMeta& meta, const std::filesystem::path& dir);

struct LoadedStack {
    LayerStack stack;
    std::vector<Detection> detections;
    SceneMeta meta;
    RgbadImage full;
};

LoadedStack load_stack(const std::filesystem::path& dir);

/// Writes rgba.png + depth.png for a standalone view (target views,
/// composed and synthesized outputs).
void save_view_image(const RgbadImage& image, const std::filesystem::path& dir);
RgbadImage load_view_image(const std::filesystem::path& dir);

// Binary LDI container ("LDI1", little endian): header of magic, u32
// width, u32 height, u64 total sample count; per-pixel u16 sample counts
// row-major; flat samples of rgba as 4 bytes, depth as float32 and layer
// index as u16. Depth round-trips exactly; color quantizes to 1/255.
void save_ldi(const Ldi& ldi, const std::filesystem::path& path);
Ldi load_ldi(const std::filesystem::path& path);

} // namespace ldikit::io
