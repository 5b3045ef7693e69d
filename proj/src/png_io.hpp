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
#include <filesystem>
#include <vector>

namespace ldikit::pngio {

// Thin libpng wrappers with fixed settings (no ancillary chunks, fixed
// compression), so identical pixels give identical bytes.

struct Rgba8 {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data; // 4 bytes per pixel, row-major
};

struct Gray8 {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data;
};

struct Gray16 {
    int width = 0;
    int height = 0;
    std::vector<std::uint16_t> data;
};

void write_rgba8(const std::filesystem::path& path, const Rgba8& image);
Rgba8 read_rgba8(const std::filesystem::path& path);

void write_gray8(const std::filesystem::path& path, const Gray8& image);
Gray8 read_gray8(const std::filesystem::path& path);

void write_gray16(const std::filesystem::path& path, const Gray16& image);
Gray16 read_gray16(const std::filesystem::path& path);

} // namespace ldikit::pngio
