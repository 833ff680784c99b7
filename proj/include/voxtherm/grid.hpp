// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "voxtherm/math.hpp"

namespace voxtherm {

// Axis-aligned world-space box covered by a voxel grid.
struct GridBounds {
    Vec3 min_corner{-1.0, -1.0, -1.0};
    Vec3 max_corner{1.0, 1.0, 1.0};

    Vec3 extent() const { return max_corner - min_corner; }
    bool valid() const {
        Vec3 e = extent();
        return e.x > 0.0 && e.y > 0.0 && e.z > 0.0;
    }
    bool contains(const Vec3& p) const {
        return p.x >= min_corner.x && p.x <= max_corner.x && p.y >= min_corner.y &&
               p.y <= max_corner.y && p.z >= min_corner.z && p.z <= max_corner.z;
    }
    void validate() const;
};

enum class GridField { Density, Temperature, Sh };

// Interpolation footprint of one in-bounds point: the 8 enclosing corner
// indices and their trilinear weights (non-negative, summing to 1).
struct TrilinearStencil {
    std::array<std::size_t, 8> corner{};
    std::array<double, 8> weight{};
};

// Dense voxel grid with density, spherical-harmonic color coefficients and a
// normalized temperature stored at cell corners. Corner arrays are flat,
// x-fastest: index = i + (nx+1) * (j + (ny+1) * k).
class VoxelGrid {
  public:
    static constexpr int kShBasisDim = 9;    // degree-2 real SH
    static constexpr int kShPerCorner = 27;  // 9 coefficients x 3 channels
    static constexpr int kDefaultResolution = 128;

    VoxelGrid() = default;
    VoxelGrid(std::array<int, 3> dims, GridBounds bounds, std::array<double, 2> temp_range);

    const std::array<int, 3>& dims() const { return dims_; }
    const GridBounds& bounds() const { return bounds_; }
    const std::array<double, 2>& temp_range() const { return temp_range_; }

    std::size_t corner_count() const {
        return static_cast<std::size_t>(dims_[0] + 1) * (dims_[1] + 1) * (dims_[2] + 1);
    }
    std::size_t voxel_count() const {
        return static_cast<std::size_t>(dims_[0]) * dims_[1] * dims_[2];
    }
    std::size_t corner_index(int i, int j, int k) const {
        return static_cast<std::size_t>(i) +
               static_cast<std::size_t>(dims_[0] + 1) *
                   (static_cast<std::size_t>(j) + static_cast<std::size_t>(dims_[1] + 1) * k);
    }
    std::size_t voxel_index(int i, int j, int k) const {
        return static_cast<std::size_t>(i) +
               static_cast<std::size_t>(dims_[0]) *
                   (static_cast<std::size_t>(j) + static_cast<std::size_t>(dims_[1]) * k);
    }
    Vec3 corner_position(int i, int j, int k) const;
    Vec3 voxel_edge() const;

    std::vector<double>& density() { return density_; }
    const std::vector<double>& density() const { return density_; }
    std::vector<double>& sh_coeffs() { return sh_; }
    const std::vector<double>& sh_coeffs() const { return sh_; }
    std::vector<double>& temperature() { return temperature_; }
    const std::vector<double>& temperature() const { return temperature_; }

    double denormalize_temperature(double t) const {
        return temp_range_[0] + t * (temp_range_[1] - temp_range_[0]);
    }
    double normalize_temperature(double celsius) const {
        return (celsius - temp_range_[0]) / (temp_range_[1] - temp_range_[0]);
    }

    // Affine map of bounds onto [0, dims] per axis. Points outside the bounds
    // yield coordinates outside [0, dims]; callers decide how to handle them.
    Vec3 world_to_grid(const Vec3& p) const;

    // Throws std::out_of_range when p lies outside the bounds (beyond a tiny
    // floating-point slack). Rays must be clipped before sampling.
    TrilinearStencil stencil_at(const Vec3& p) const;

    double sample_density(const Vec3& p) const;
    double sample_temperature(const Vec3& p) const;
    std::array<double, kShPerCorner> sample_sh(const Vec3& p) const;

    double sample_scalar(const TrilinearStencil& s, const std::vector<double>& field) const;

    // Gradient scatter: adds upstream * weight to the 8 enclosing corners of
    // the given buffer. Exact adjoint of the matching sample operation.
    void scatter_scalar(const TrilinearStencil& s, double upstream,
                        std::vector<double>& buffer) const;
    void scatter_sh(const TrilinearStencil& s, const double* upstream27,
                    std::vector<double>& buffer) const;

    // Enum-dispatch contract surface; `upstream` holds 1 value for scalar
    // fields, 27 for SH.
    std::vector<double> sample_trilinear(const Vec3& p, GridField field) const;
    void scatter_gradient(const Vec3& p, GridField field, const double* upstream,
                          std::vector<double>& buffer) const;

    void clamp_density(double min_value = 0.0);

  private:
    std::array<int, 3> dims_{0, 0, 0};
    GridBounds bounds_;
    std::array<double, 2> temp_range_{0.0, 1.0};
    std::vector<double> density_;
    std::vector<double> sh_;
    std::vector<double> temperature_;
};

// Gradient buffers for one optimization batch, shaped like the grid fields.
struct GridGradients {
    std::vector<double> density;
    std::vector<double> sh;
    std::vector<double> temperature;

    explicit GridGradients(const VoxelGrid& grid)
        : density(grid.corner_count(), 0.0),
          sh(grid.corner_count() * VoxelGrid::kShPerCorner, 0.0),
          temperature(grid.corner_count(), 0.0) {}
    void reset();
    void add(const GridGradients& other);
};

}  // namespace voxtherm
