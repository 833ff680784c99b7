// SPDX-License-Identifier: Apache-2.0
#include "voxtherm/image.hpp"

#include <png.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>

#include "voxtherm/errors.hpp"

namespace voxtherm {

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

uint16_t quantize16(double v) {
    double c = clamp01(v);
    return static_cast<uint16_t>(std::lround(c * 65535.0));
}

uint8_t quantize8(double v) {
    double c = clamp01(v);
    return static_cast<uint8_t>(std::lround(c * 255.0));
}

}  // namespace

void save_png_rgb8(const std::string& path, const ImageF& img) {
    if (img.channels != 3) throw DataError("save_png_rgb8 expects a 3-channel image");
    FilePtr fp(std::fopen(path.c_str(), "wb"));
    if (!fp) throw DataError("cannot open for writing: " + path);

    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png_create_info_struct(png);
    if (!png || !info) throw DataError("libpng init failed");
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw DataError("libpng write failed: " + path);
    }
    png_init_io(png, fp.get());
    png_set_IHDR(png, info, img.width, img.height, 8, PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);

    std::vector<uint8_t> row(static_cast<std::size_t>(img.width) * 3);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x)
            for (int c = 0; c < 3; ++c) row[x * 3 + c] = quantize8(img.at(x, y, c));
        png_write_row(png, row.data());
    }
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

void save_png_gray16(const std::string& path, const ImageF& img) {
    if (img.channels != 1) throw DataError("save_png_gray16 expects a 1-channel image");
    FilePtr fp(std::fopen(path.c_str(), "wb"));
    if (!fp) throw DataError("cannot open for writing: " + path);

    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png_create_info_struct(png);
    if (!png || !info) throw DataError("libpng init failed");
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw DataError("libpng write failed: " + path);
    }
    png_init_io(png, fp.get());
    png_set_IHDR(png, info, img.width, img.height, 16, PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);

    // PNG stores 16-bit samples big-endian.
    std::vector<uint8_t> row(static_cast<std::size_t>(img.width) * 2);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            uint16_t v = quantize16(img.at(x, y));
            row[x * 2] = static_cast<uint8_t>(v >> 8);
            row[x * 2 + 1] = static_cast<uint8_t>(v & 0xff);
        }
        png_write_row(png, row.data());
    }
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

ImageF load_png(const std::string& path) {
    FilePtr fp(std::fopen(path.c_str(), "rb"));
    if (!fp) throw DataError("cannot open image: " + path);

    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png_create_info_struct(png);
    if (!png || !info) throw DataError("libpng init failed");
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw DataError("libpng read failed: " + path);
    }
    png_init_io(png, fp.get());
    png_read_info(png, info);

    png_uint_32 w = png_get_image_width(png, info);
    png_uint_32 h = png_get_image_height(png, info);
    int bit_depth = png_get_bit_depth(png, info);
    int color_type = png_get_color_type(png, info);

    if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) png_set_expand_gray_1_2_4_to_8(png);
    if (color_type & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
    png_read_update_info(png, info);

    bit_depth = png_get_bit_depth(png, info);
    color_type = png_get_color_type(png, info);
    int channels = (color_type == PNG_COLOR_TYPE_RGB) ? 3 : 1;
    if (color_type != PNG_COLOR_TYPE_RGB && color_type != PNG_COLOR_TYPE_GRAY) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw DataError("unsupported PNG color type in " + path);
    }

    ImageF img(static_cast<int>(w), static_cast<int>(h), channels);
    std::size_t stride = static_cast<std::size_t>(w) * channels * (bit_depth / 8);
    std::vector<uint8_t> row(stride);
    const double scale = bit_depth == 16 ? 65535.0 : 255.0;
    for (png_uint_32 y = 0; y < h; ++y) {
        png_read_row(png, row.data(), nullptr);
        for (png_uint_32 x = 0; x < w; ++x)
            for (int c = 0; c < channels; ++c) {
                double v;
                if (bit_depth == 16) {
                    std::size_t o = (static_cast<std::size_t>(x) * channels + c) * 2;
                    v = static_cast<double>((row[o] << 8) | row[o + 1]);
                } else {
                    v = row[static_cast<std::size_t>(x) * channels + c];
                }
                img.at(static_cast<int>(x), static_cast<int>(y), c) = v / scale;
            }
    }
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    return img;
}

void save_float_grid(const std::string& path, const ImageF& img) {
    if (img.channels != 1) throw DataError("float grid expects a 1-channel image");
    std::ofstream out(path);
    if (!out) throw DataError("cannot open for writing: " + path);
    out.precision(9);
    out << img.width << " " << img.height << "\n";
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            if (x) out << " ";
            out << img.at(x, y);
        }
        out << "\n";
    }
    if (!out) throw DataError("write failed: " + path);
}

ImageF load_float_grid(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open float grid: " + path);
    int w = 0, h = 0;
    if (!(in >> w >> h) || w <= 0 || h <= 0) throw DataError("bad float grid header in " + path);
    ImageF img(w, h, 1);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            if (!(in >> img.at(x, y))) throw DataError("truncated float grid: " + path);
    return img;
}

}  // namespace voxtherm
