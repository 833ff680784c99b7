// SPDX-License-Identifier: Apache-2.0
#include "voxtherm/camera.hpp"

#include <algorithm>
#include <cmath>

#include "voxtherm/errors.hpp"

namespace voxtherm {

void CameraIntrinsics::validate() const {
    if (fx <= 0.0 || fy <= 0.0) throw DataError("intrinsics: focal lengths must be positive");
    if (width <= 0 || height <= 0) throw DataError("intrinsics: image size must be positive");
    if (cx < 0.0 || cx >= width || cy < 0.0 || cy >= height)
        throw DataError("intrinsics: principal point outside image");
}

void CameraPose::validate() const {
    constexpr double kTol = 1e-6;
    Mat3 rtr = rotation.transposed() * rotation;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double expected = i == j ? 1.0 : 0.0;
            if (std::abs(rtr(i, j) - expected) > kTol)
                throw DataError("pose: rotation is not orthonormal");
        }
    if (std::abs(rotation.det() - 1.0) > kTol) throw DataError("pose: rotation determinant != +1");
    if (!translation.all_finite()) throw DataError("pose: non-finite translation");
}

Ray generate_ray(const CameraIntrinsics& intr, const CameraPose& pose, int u, int v) {
    Vec3 cam_dir{(u + 0.5 - intr.cx) / intr.fx, (v + 0.5 - intr.cy) / intr.fy, 1.0};
    return {pose.translation, (pose.rotation * cam_dir).normalized()};
}

std::optional<std::pair<double, double>> intersect_bounds(const Ray& ray,
                                                          const GridBounds& bounds) {
    double t_near = 0.0;
    double t_far = std::numeric_limits<double>::infinity();
    const double o[3] = {ray.origin.x, ray.origin.y, ray.origin.z};
    const double d[3] = {ray.direction.x, ray.direction.y, ray.direction.z};
    const double lo[3] = {bounds.min_corner.x, bounds.min_corner.y, bounds.min_corner.z};
    const double hi[3] = {bounds.max_corner.x, bounds.max_corner.y, bounds.max_corner.z};
    for (int a = 0; a < 3; ++a) {
        if (d[a] == 0.0) {
            if (o[a] < lo[a] || o[a] > hi[a]) return std::nullopt;
            continue;
        }
        double inv = 1.0 / d[a];
        double t0 = (lo[a] - o[a]) * inv;
        double t1 = (hi[a] - o[a]) * inv;
        if (t0 > t1) std::swap(t0, t1);
        t_near = std::max(t_near, t0);
        t_far = std::min(t_far, t1);
        if (t_near > t_far) return std::nullopt;
    }
    if (!(t_far > t_near)) return std::nullopt;
    return std::make_pair(t_near, t_far);
}

}  // namespace voxtherm
