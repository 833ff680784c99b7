// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "voxtherm/math.hpp"

namespace voxtherm {

// Row-major interleaved image with 1 (thermal/gray) or 3 (RGB) channels.
// Values are doubles; rendered and normalized data live in [0, 1].
struct ImageF {
    int width = 0;
    int height = 0;
    int channels = 0;
    std::vector<double> data;

    ImageF() = default;
    ImageF(int w, int h, int c) : width(w), height(h), channels(c) {
        data.assign(static_cast<std::size_t>(w) * h * c, 0.0);
    }
    double& at(int x, int y, int c = 0) {
        return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
    }
    double at(int x, int y, int c = 0) const {
        return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
    }
    std::size_t pixel_count() const { return static_cast<std::size_t>(width) * height; }
    bool same_shape(const ImageF& o) const {
        return width == o.width && height == o.height && channels == o.channels;
    }
};

// 8-bit RGB PNG. Values are clamped to [0,1] and quantized.
void save_png_rgb8(const std::string& path, const ImageF& img);
// 16-bit grayscale PNG for normalized thermal data.
void save_png_gray16(const std::string& path, const ImageF& img);
// Reads 8-bit gray/RGB and 16-bit gray PNGs, mapping to [0,1].
ImageF load_png(const std::string& path);

// Plain-text float grid: "width height" header line, then one row per line.
// Used for thermal output in degrees Celsius.
void save_float_grid(const std::string& path, const ImageF& img);
ImageF load_float_grid(const std::string& path);

}  // namespace voxtherm
