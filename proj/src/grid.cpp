// SPDX-License-Identifier: Apache-2.0
#include "voxtherm/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "voxtherm/errors.hpp"

namespace voxtherm {

void GridBounds::validate() const {
    if (!valid()) throw DataError("grid bounds: max_corner must exceed min_corner on every axis");
}

VoxelGrid::VoxelGrid(std::array<int, 3> dims, GridBounds bounds, std::array<double, 2> temp_range)
    : dims_(dims), bounds_(bounds), temp_range_(temp_range) {
    bounds_.validate();
    if (dims_[0] <= 0 || dims_[1] <= 0 || dims_[2] <= 0)
        throw DataError("grid dims must be positive");
    if (!(temp_range_[0] < temp_range_[1]))
        throw DataError("temp_range: t_min must be below t_max");
    density_.assign(corner_count(), 0.0);
    sh_.assign(corner_count() * kShPerCorner, 0.0);
    temperature_.assign(corner_count(), 0.0);
}

Vec3 VoxelGrid::corner_position(int i, int j, int k) const {
    Vec3 e = voxel_edge();
    return bounds_.min_corner + Vec3(i * e.x, j * e.y, k * e.z);
}

Vec3 VoxelGrid::voxel_edge() const {
    Vec3 ext = bounds_.extent();
    return {ext.x / dims_[0], ext.y / dims_[1], ext.z / dims_[2]};
}

Vec3 VoxelGrid::world_to_grid(const Vec3& p) const {
    Vec3 rel = (p - bounds_.min_corner).cwise_div(bounds_.extent());
    return {rel.x * dims_[0], rel.y * dims_[1], rel.z * dims_[2]};
}

TrilinearStencil VoxelGrid::stencil_at(const Vec3& p) const {
    constexpr double kSlack = 1e-9;
    Vec3 g = world_to_grid(p);
    TrilinearStencil s;
    int cell[3];
    double frac[3];
    const double gc[3] = {g.x, g.y, g.z};
    for (int a = 0; a < 3; ++a) {
        double v = gc[a];
        if (v < -kSlack * dims_[a] || v > dims_[a] * (1.0 + kSlack))
            throw std::out_of_range("sample point outside grid bounds");
        v = std::clamp(v, 0.0, static_cast<double>(dims_[a]));
        int c = std::min(static_cast<int>(v), dims_[a] - 1);
        cell[a] = c;
        frac[a] = v - c;
    }
    const double wx[2] = {1.0 - frac[0], frac[0]};
    const double wy[2] = {1.0 - frac[1], frac[1]};
    const double wz[2] = {1.0 - frac[2], frac[2]};
    int n = 0;
    for (int dz = 0; dz < 2; ++dz)
        for (int dy = 0; dy < 2; ++dy)
            for (int dx = 0; dx < 2; ++dx) {
                s.corner[n] = corner_index(cell[0] + dx, cell[1] + dy, cell[2] + dz);
                s.weight[n] = wx[dx] * wy[dy] * wz[dz];
                ++n;
            }
    return s;
}

double VoxelGrid::sample_scalar(const TrilinearStencil& s, const std::vector<double>& field) const {
    double v = 0.0;
    for (int n = 0; n < 8; ++n) v += s.weight[n] * field[s.corner[n]];
    return v;
}

double VoxelGrid::sample_density(const Vec3& p) const {
    return sample_scalar(stencil_at(p), density_);
}

double VoxelGrid::sample_temperature(const Vec3& p) const {
    return sample_scalar(stencil_at(p), temperature_);
}

std::array<double, VoxelGrid::kShPerCorner> VoxelGrid::sample_sh(const Vec3& p) const {
    TrilinearStencil s = stencil_at(p);
    std::array<double, kShPerCorner> out{};
    for (int n = 0; n < 8; ++n) {
        const double w = s.weight[n];
        const double* src = sh_.data() + s.corner[n] * kShPerCorner;
        for (int c = 0; c < kShPerCorner; ++c) out[c] += w * src[c];
    }
    return out;
}

void VoxelGrid::scatter_scalar(const TrilinearStencil& s, double upstream,
                               std::vector<double>& buffer) const {
    for (int n = 0; n < 8; ++n) buffer[s.corner[n]] += upstream * s.weight[n];
}

void VoxelGrid::scatter_sh(const TrilinearStencil& s, const double* upstream27,
                           std::vector<double>& buffer) const {
    for (int n = 0; n < 8; ++n) {
        const double w = s.weight[n];
        double* dst = buffer.data() + s.corner[n] * kShPerCorner;
        for (int c = 0; c < kShPerCorner; ++c) dst[c] += w * upstream27[c];
    }
}

std::vector<double> VoxelGrid::sample_trilinear(const Vec3& p, GridField field) const {
    switch (field) {
        case GridField::Density:
            return {sample_density(p)};
        case GridField::Temperature:
            return {sample_temperature(p)};
        case GridField::Sh: {
            auto v = sample_sh(p);
            return std::vector<double>(v.begin(), v.end());
        }
    }
    throw std::logic_error("unknown field");
}

void VoxelGrid::scatter_gradient(const Vec3& p, GridField field, const double* upstream,
                                 std::vector<double>& buffer) const {
    TrilinearStencil s = stencil_at(p);
    switch (field) {
        case GridField::Density:
        case GridField::Temperature:
            if (buffer.size() != corner_count())
                throw DataError("gradient buffer shape mismatch");
            scatter_scalar(s, *upstream, buffer);
            return;
        case GridField::Sh:
            if (buffer.size() != corner_count() * kShPerCorner)
                throw DataError("gradient buffer shape mismatch");
            scatter_sh(s, upstream, buffer);
            return;
    }
    throw std::logic_error("unknown field");
}

void VoxelGrid::clamp_density(double min_value) {
    for (double& d : density_)
        if (d < min_value) d = min_value;
}

void GridGradients::reset() {
    std::fill(density.begin(), density.end(), 0.0);
    std::fill(sh.begin(), sh.end(), 0.0);
    std::fill(temperature.begin(), temperature.end(), 0.0);
}

void GridGradients::add(const GridGradients& other) {
    for (std::size_t i = 0; i < density.size(); ++i) density[i] += other.density[i];
    for (std::size_t i = 0; i < sh.size(); ++i) sh[i] += other.sh[i];
    for (std::size_t i = 0; i < temperature.size(); ++i) temperature[i] += other.temperature[i];
}

}  // namespace voxtherm
