// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <string>
#include <vector>

#include "voxtherm/grid.hpp"

namespace voxtherm {

// Center-interpolated density and temperature of one voxel. Temperature is in
// degrees Celsius (denormalized).
struct CellSample {
    std::array<int, 3> ijk{};
    double center_density = 0.0;
    double center_temperature_c = 0.0;
};

enum class CellKind { Hexahedron, Tetrahedron };

// Unstructured volumetric mesh with shared nodes and per-cell temperature.
// Hexahedra use the VTK node order (bottom quad counter-clockwise, then top);
// tetrahedra are positively oriented.
struct VolumetricMesh {
    CellKind kind = CellKind::Hexahedron;
    std::vector<Vec3> nodes;
    std::vector<std::array<int, 8>> hexes;
    std::vector<std::array<int, 4>> tets;
    std::vector<double> cell_temperature_c;
    std::vector<std::array<int, 3>> cell_origin;  // source voxel; in-memory only

    std::size_t cell_count() const {
        return kind == CellKind::Hexahedron ? hexes.size() : tets.size();
    }
    int nodes_per_cell() const { return kind == CellKind::Hexahedron ? 8 : 4; }
};

// Trilinear interpolation at the voxel center equals the mean of its 8 corner
// values; one sample per voxel, in x-fastest index order.
std::vector<CellSample> sample_cell_centers(const VoxelGrid& grid);

// Keeps the ceil(t/100 * |V|) densest of the non-empty (center density > 0)
// voxels. Ties break toward the smaller x-fastest voxel index. Returns the
// kept samples sorted by voxel index. Throws when nothing is non-empty.
std::vector<CellSample> filter_densest(const std::vector<CellSample>& samples, double t_percent);

// Largest 6-connected (face adjacency) component; size ties break toward the
// component holding the smallest voxel index. Result is sorted by voxel index.
std::vector<CellSample> largest_connected_component(const std::vector<CellSample>& subset,
                                                    const std::array<int, 3>& dims);

// Shared-node hexahedral mesh, one hex per kept voxel.
VolumetricMesh build_mesh(const std::vector<CellSample>& component, const VoxelGrid& grid);

// Splits each hex into 6 tetrahedra along axis-order paths from the base
// corner to the opposite corner; cells at odd (i+j+k) parity use the
// point-reflected template so shared faces triangulate identically from both
// sides. Total volume is preserved.
VolumetricMesh hex_to_tet(const VolumetricMesh& mesh);

double cell_volume(const VolumetricMesh& mesh, std::size_t cell);

// Legacy ASCII VTK unstructured grid with CELL_DATA "temperature_C".
void write_vtk(const std::string& path, const VolumetricMesh& mesh);
// Same mesh plus POINT_DATA "temperature_C" (used for simulation steps).
void write_vtk_point_data(const std::string& path, const VolumetricMesh& mesh,
                          const std::vector<double>& nodal_temperature);
// Reads meshes produced by write_vtk (hexahedron type 12 or tetra type 10).
VolumetricMesh read_vtk(const std::string& path);

}  // namespace voxtherm
