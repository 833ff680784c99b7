// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <vector>

#include "voxtherm/background.hpp"
#include "voxtherm/camera.hpp"
#include "voxtherm/grid.hpp"
#include "voxtherm/image.hpp"
#include "voxtherm/sh.hpp"

namespace voxtherm {

enum class RenderChannel { Rgb, Thermal };

// Ordered sample positions along one ray, uniform spacing `delta` per sample.
struct RaySampleSet {
    std::vector<Vec3> positions;
    std::vector<double> deltas;
    int count() const { return static_cast<int>(positions.size()); }
    bool empty() const { return positions.empty(); }
};

// Samples at t_near + (k + 0.5) * step inside the ray/bounds intersection.
// An interval shorter than one step yields a single midpoint sample; a miss
// yields an empty set.
RaySampleSet sample_ray(const VoxelGrid& grid, const Ray& ray, double step);

// Front-to-back emission/absorption compositing with residual-transmittance
// background. Weights are alpha_i * (1 - exp(-sigma_i * delta_i)) where
// alpha_i is the transmittance accumulated before sample i.
Vec3 composite_color(std::span<const double> sigmas, std::span<const Vec3> colors,
                     std::span<const double> deltas, const Vec3& background,
                     double* residual_transmittance = nullptr);
double composite_temperature(std::span<const double> sigmas, std::span<const double> temps,
                             std::span<const double> deltas, double background_temperature,
                             double* residual_transmittance = nullptr);

enum class TraceMode { Rgb, Thermal, Both };

// Per-ray forward cache. Buffers are reused across rays; the backward pass
// consumes them without re-marching.
struct RayTrace {
    std::vector<Vec3> positions;
    std::vector<double> sigma;
    std::vector<double> attenuation;    // exp(-sigma_i * delta)
    std::vector<double> transmittance;  // before each sample
    std::vector<double> temp;
    std::vector<Vec3> color;  // unclamped SH color per sample
    std::vector<char> skipped;
    std::array<double, kShBasisDim> sh_basis{};
    Vec3 direction;
    double delta = 0.0;
    int count = 0;

    Vec3 rgb;            // composited, clamped to [0,1]
    Vec3 rgb_unclamped;  // before the final clamp
    double temperature = 0.0;
    double residual = 1.0;  // transmittance past the last sample
    Vec3 background_color;

    void clear();
};

// Marches one ray. `background` may be null for thermal-only traces; the
// thermal miss value is 0 in normalized units. Samples whose 8 surrounding
// corner densities are all zero are skipped; they contribute nothing to the
// composite and receive no gradients.
void trace_ray(const VoxelGrid& grid, const SphericalBackground* background, const Ray& ray,
               double step, TraceMode mode, RayTrace& out);

struct RayUpstream {
    Vec3 d_rgb;  // dL/d(clamped pixel rgb)
    double d_temperature = 0.0;
};

// Analytic gradients of the composites w.r.t. every grid corner parameter and
// background texel touched by the ray. `bg_gradient` may be null when the RGB
// branch is unused.
void backprop_ray(const VoxelGrid& grid, const SphericalBackground* background,
                  const RayTrace& trace, const RayUpstream& upstream, GridGradients& grads,
                  std::vector<double>* bg_gradient);

// Default marching step: scale * shortest voxel edge.
double default_step(const VoxelGrid& grid, double scale = 0.5);

ImageF render_image(const VoxelGrid& grid, const SphericalBackground* background,
                    const CameraIntrinsics& intr, const CameraPose& pose, RenderChannel channel,
                    double step);

}  // namespace voxtherm
