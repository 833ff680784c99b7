// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <utility>

#include "voxtherm/grid.hpp"
#include "voxtherm/math.hpp"

namespace voxtherm {

struct CameraIntrinsics {
    double fx = 0.0, fy = 0.0;  // focal lengths, pixels
    double cx = 0.0, cy = 0.0;  // principal point, pixels
    int width = 0, height = 0;

    void validate() const;
};

// Camera-to-world transform.
struct CameraPose {
    Mat3 rotation;
    Vec3 translation;

    void validate() const;  // orthonormal, det +1 to 1e-6
};

struct Ray {
    Vec3 origin;
    Vec3 direction;  // unit length
};

// Pixel centers sit at (u+0.5, v+0.5).
Ray generate_ray(const CameraIntrinsics& intr, const CameraPose& pose, int u, int v);

// Slab intersection, entry clamped to t >= 0. Empty interval means miss.
std::optional<std::pair<double, double>> intersect_bounds(const Ray& ray, const GridBounds& bounds);

}  // namespace voxtherm
