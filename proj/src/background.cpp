// SPDX-License-Identifier: Apache-2.0
#include "voxtherm/background.hpp"

#include <algorithm>
#include <cmath>

#include "voxtherm/errors.hpp"

namespace voxtherm {

SphericalBackground::SphericalBackground(int height, int width)
    : height_(height), width_(width), rgb_(static_cast<std::size_t>(height) * width * 3, 0.0) {
    if (height < 1 || width < 2) throw DataError("background image too small");
}

void SphericalBackground::fill(const Vec3& color) {
    for (std::size_t i = 0; i < rgb_.size(); i += 3) {
        rgb_[i] = color.x;
        rgb_[i + 1] = color.y;
        rgb_[i + 2] = color.z;
    }
}

SphericalBackground::Footprint SphericalBackground::footprint(const Vec3& d) const {
    constexpr double kPi = 3.14159265358979323846;
    double phi = std::atan2(d.y, d.x);                      // (-pi, pi]
    double theta = std::acos(std::clamp(d.z, -1.0, 1.0));   // [0, pi]
    double u = (phi + kPi) / (2.0 * kPi) * width_ - 0.5;    // texel centers
    double v = theta / kPi * height_ - 0.5;

    double fu = std::floor(u);
    double fv = std::floor(v);
    double au = u - fu;
    double av = v - fv;
    int u0 = static_cast<int>(fu);
    int v0 = static_cast<int>(fv);

    auto wrap_u = [this](int ui) {
        ui %= width_;
        return ui < 0 ? ui + width_ : ui;
    };
    auto clamp_v = [this](int vi) { return std::clamp(vi, 0, height_ - 1); };

    Footprint f;
    const int us[2] = {wrap_u(u0), wrap_u(u0 + 1)};
    const int vs[2] = {clamp_v(v0), clamp_v(v0 + 1)};
    const double wu[2] = {1.0 - au, au};
    const double wv[2] = {1.0 - av, av};
    int n = 0;
    for (int j = 0; j < 2; ++j)
        for (int i = 0; i < 2; ++i) {
            f.texel[n] = vs[j] * width_ + us[i];
            f.weight[n] = wv[j] * wu[i];
            ++n;
        }
    return f;
}

Vec3 SphericalBackground::sample(const Vec3& d) const {
    Footprint f = footprint(d);
    Vec3 c;
    for (int n = 0; n < 4; ++n) {
        const double* px = rgb_.data() + static_cast<std::size_t>(f.texel[n]) * 3;
        c += Vec3(px[0], px[1], px[2]) * f.weight[n];
    }
    return c;
}

void SphericalBackground::scatter_gradient(const Vec3& d, const Vec3& upstream,
                                           std::vector<double>& buffer) const {
    Footprint f = footprint(d);
    for (int n = 0; n < 4; ++n) {
        double* px = buffer.data() + static_cast<std::size_t>(f.texel[n]) * 3;
        px[0] += upstream.x * f.weight[n];
        px[1] += upstream.y * f.weight[n];
        px[2] += upstream.z * f.weight[n];
    }
}

}  // namespace voxtherm
