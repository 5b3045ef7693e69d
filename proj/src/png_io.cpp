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

#include "png_io.hpp"

#include <png.h>

#include <cstdio>
#include <memory>

#include "ldikit/errors.hpp"

namespace ldikit::pngio {

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f != nullptr) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_file(const std::filesystem::path& path, const char* mode) {
    FilePtr f(std::fopen(path.string().c_str(), mode));
    if (!f) throw IoError("cannot open " + path.string());
    return f;
}

struct PngWriter {
    png_structp png = nullptr;
    png_infop info = nullptr;

    PngWriter() {
        png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
        if (png != nullptr) info = png_create_info_struct(png);
        if (png == nullptr || info == nullptr)
            throw IoError("libpng: write struct allocation failed");
    }
    ~PngWriter() { png_destroy_write_struct(&png, &info); }
};

struct PngReader {
    png_structp png = nullptr;
    png_infop info = nullptr;

    PngReader() {
        png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
        if (png != nullptr) info = png_create_info_struct(png);
        if (png == nullptr || info == nullptr)
            throw IoError("libpng: read struct allocation failed");
    }
    ~PngReader() { png_destroy_read_struct(&png, &info, nullptr); }
};

void write_image(const std::filesystem::path& path, int width, int height,
                 int color_type, int bit_depth, const std::vector<png_bytep>& rows) {
    if (width <= 0 || height <= 0) throw IoError("png write: empty image");
    FilePtr file = open_file(path, "wb");
    PngWriter w;
    if (setjmp(png_jmpbuf(w.png))) throw IoError("png write failed: " + path.string());
    png_init_io(w.png, file.get());
    png_set_IHDR(w.png, w.info, static_cast<png_uint_32>(width),
                 static_cast<png_uint_32>(height), bit_depth, color_type,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
                 PNG_FILTER_TYPE_DEFAULT);
    png_set_compression_level(w.png, 6);
    png_write_info(w.png, w.info);
    if (bit_depth == 16) png_set_swap(w.png); // in-memory is little endian
    png_write_image(w.png, const_cast<png_bytepp>(rows.data()));
    png_write_end(w.png, nullptr);
}

void read_header(PngReader& r, std::FILE* file, const std::filesystem::path& path,
                 png_uint_32& width, png_uint_32& height, int& color_type,
                 int& bit_depth) {
    if (setjmp(png_jmpbuf(r.png))) throw FormatError("broken png: " + path.string());
    png_init_io(r.png, file);
    png_read_info(r.png, r.info);
    width = png_get_image_width(r.png, r.info);
    height = png_get_image_height(r.png, r.info);
    color_type = png_get_color_type(r.png, r.info);
    bit_depth = png_get_bit_depth(r.png, r.info);
}

} // namespace

void write_rgba8(const std::filesystem::path& path, const Rgba8& image) {
    std::vector<png_bytep> rows(static_cast<size_t>(image.height));
    for (int y = 0; y < image.height; ++y)
        rows[static_cast<size_t>(y)] = const_cast<png_bytep>(
            image.data.data() + static_cast<size_t>(y) * image.width * 4);
    write_image(path, image.width, image.height, PNG_COLOR_TYPE_RGBA, 8, rows);
}

Rgba8 read_rgba8(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path)) throw IoError("missing file: " + path.string());
    FilePtr file = open_file(path, "rb");
    PngReader r;
    png_uint_32 w = 0, h = 0;
    int color_type = 0, bit_depth = 0;
    read_header(r, file.get(), path, w, h, color_type, bit_depth);
    if (color_type != PNG_COLOR_TYPE_RGBA || bit_depth != 8)
        throw FormatError("expected 8-bit RGBA png: " + path.string());
    Rgba8 out;
    out.width = static_cast<int>(w);
    out.height = static_cast<int>(h);
    out.data.resize(static_cast<size_t>(w) * h * 4);
    std::vector<png_bytep> rows(h);
    for (png_uint_32 y = 0; y < h; ++y)
        rows[y] = out.data.data() + static_cast<size_t>(y) * w * 4;
    if (setjmp(png_jmpbuf(r.png))) throw FormatError("broken png: " + path.string());
    png_read_image(r.png, rows.data());
    return out;
}

void write_gray8(const std::filesystem::path& path, const Gray8& image) {
    std::vector<png_bytep> rows(static_cast<size_t>(image.height));
    for (int y = 0; y < image.height; ++y)
        rows[static_cast<size_t>(y)] = const_cast<png_bytep>(
            image.data.data() + static_cast<size_t>(y) * image.width);
    write_image(path, image.width, image.height, PNG_COLOR_TYPE_GRAY, 8, rows);
}

Gray8 read_gray8(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path)) throw IoError("missing file: " + path.string());
    FilePtr file = open_file(path, "rb");
    PngReader r;
    png_uint_32 w = 0, h = 0;
    int color_type = 0, bit_depth = 0;
    read_header(r, file.get(), path, w, h, color_type, bit_depth);
    if (color_type != PNG_COLOR_TYPE_GRAY || bit_depth != 8)
        throw FormatError("expected 8-bit grayscale png: " + path.string());
    Gray8 out;
    out.width = static_cast<int>(w);
    out.height = static_cast<int>(h);
    out.data.resize(static_cast<size_t>(w) * h);
    std::vector<png_bytep> rows(h);
    for (png_uint_32 y = 0; y < h; ++y)
        rows[y] = out.data.data() + static_cast<size_t>(y) * w;
    if (setjmp(png_jmpbuf(r.png))) throw FormatError("broken png: " + path.string());
    png_read_image(r.png, rows.data());
    return out;
}

void write_gray16(const std::filesystem::path& path, const Gray16& image) {
    std::vector<png_bytep> rows(static_cast<size_t>(image.height));
    for (int y = 0; y < image.height; ++y)
        rows[static_cast<size_t>(y)] = const_cast<png_bytep>(reinterpret_cast<const png_byte*>(
            image.data.data() + static_cast<size_t>(y) * image.width));
    write_image(path, image.width, image.height, PNG_COLOR_TYPE_GRAY, 16, rows);
}

Gray16 read_gray16(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path)) throw IoError("missing file: " + path.string());
    FilePtr file = open_file(path, "rb");
    PngReader r;
    png_uint_32 w = 0, h = 0;
    int color_type = 0, bit_depth = 0;
    read_header(r, file.get(), path, w, h, color_type, bit_depth);
    if (color_type != PNG_COLOR_TYPE_GRAY || bit_depth != 16)
        throw FormatError("expected 16-bit grayscale png: " + path.string());
    png_set_swap(r.png);
    Gray16 out;
    out.width = static_cast<int>(w);
    out.height = static_cast<int>(h);
    out.data.resize(static_cast<size_t>(w) * h);
    std::vector<png_bytep> rows(h);
    for (png_uint_32 y = 0; y < h; ++y)
        rows[y] = reinterpret_cast<png_bytep>(out.data.data() + static_cast<size_t>(y) * w);
    if (setjmp(png_jmpbuf(r.png))) throw FormatError("broken png: " + path.string());
    png_read_image(r.png, rows.data());
    return out;
}

} // namespace ldikit::pngio
