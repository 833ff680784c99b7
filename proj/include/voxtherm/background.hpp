// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "voxtherm/math.hpp"

namespace voxtherm {

// Learned equirectangular RGB background, indexed by ray direction and
// optimized jointly with the grid. Thermal rays use no background image; their
// miss value is the normalized scene minimum (0).
class SphericalBackground {
  public:
    static constexpr int kDefaultHeight = 64;
    static constexpr int kDefaultWidth = 128;

    SphericalBackground(int height = kDefaultHeight, int width = kDefaultWidth);

    int height() const { return height_; }
    int width() const { return width_; }
    std::vector<double>& rgb() { return rgb_; }
    const std::vector<double>& rgb() const { return rgb_; }

    void fill(const Vec3& color);

    // Bilinear lookup; longitude wraps, latitude clamps.
    Vec3 sample(const Vec3& unit_dir) const;
    // Adjoint of sample(): scatters an upstream RGB gradient into `buffer`
    // (same layout as rgb()).
    void scatter_gradient(const Vec3& unit_dir, const Vec3& upstream,
                          std::vector<double>& buffer) const;

  private:
    struct Footprint {
        int texel[4];
        double weight[4];
    };
    Footprint footprint(const Vec3& unit_dir) const;

    int height_;
    int width_;
    std::vector<double> rgb_;  // height*width*3, row-major, latitude rows
};

}  // namespace voxtherm
