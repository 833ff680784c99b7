// SPDX-License-Identifier: Apache-2.0
#include "voxtherm/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "voxtherm/errors.hpp"

namespace voxtherm {

namespace {

std::size_t linear_voxel(const std::array<int, 3>& ijk, const std::array<int, 3>& dims) {
    return static_cast<std::size_t>(ijk[0]) +
           static_cast<std::size_t>(dims[0]) *
               (static_cast<std::size_t>(ijk[1]) + static_cast<std::size_t>(dims[1]) * ijk[2]);
}

// Local hex corner for bit offsets (bx,by,bz), in VTK hexahedron order.
constexpr int kVtkCornerOfBits[2][2][2] = {
    // [bx][by][bz]
    {{0, 4}, {3, 7}},
    {{1, 5}, {2, 6}},
};

void format_double(std::string& out, double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    out += buf;
}

}  // namespace

std::vector<CellSample> sample_cell_centers(const VoxelGrid& grid) {
    const auto& dims = grid.dims();
    const auto& density = grid.density();
    const auto& temperature = grid.temperature();
    std::vector<CellSample> out;
    out.reserve(grid.voxel_count());
    for (int k = 0; k < dims[2]; ++k)
        for (int j = 0; j < dims[1]; ++j)
            for (int i = 0; i < dims[0]; ++i) {
                double sigma = 0.0, temp = 0.0;
                for (int dz = 0; dz < 2; ++dz)
                    for (int dy = 0; dy < 2; ++dy)
                        for (int dx = 0; dx < 2; ++dx) {
                            std::size_t c = grid.corner_index(i + dx, j + dy, k + dz);
                            sigma += density[c];
                            temp += temperature[c];
                        }
                CellSample s;
                s.ijk = {i, j, k};
                s.center_density = sigma / 8.0;
                s.center_temperature_c = grid.denormalize_temperature(temp / 8.0);
                out.push_back(s);
            }
    return out;
}

std::vector<CellSample> filter_densest(const std::vector<CellSample>& samples, double t_percent) {
    if (!(t_percent > 0.0) || t_percent > 100.0)
        throw DataError("filter_densest: t must be in (0, 100]");

    std::vector<const CellSample*> nonempty;
    nonempty.reserve(samples.size());
    for (const CellSample& s : samples)
        if (s.center_density > 0.0) nonempty.push_back(&s);
    if (nonempty.empty()) throw DataError("empty reconstruction");

    const std::size_t keep = static_cast<std::size_t>(
        std::ceil(static_cast<long double>(t_percent) * nonempty.size() / 100.0L));

    // Ties break toward the smaller x-fastest voxel index.
    std::sort(nonempty.begin(), nonempty.end(), [](const CellSample* a, const CellSample* b) {
        if (a->center_density != b->center_density)
            return a->center_density > b->center_density;
        return std::tie(a->ijk[2], a->ijk[1], a->ijk[0]) <
               std::tie(b->ijk[2], b->ijk[1], b->ijk[0]);
    });
    nonempty.resize(std::min(keep, nonempty.size()));

    std::vector<CellSample> out;
    out.reserve(nonempty.size());
    for (const CellSample* s : nonempty) out.push_back(*s);
    std::sort(out.begin(), out.end(), [](const CellSample& a, const CellSample& b) {
        return std::tie(a.ijk[2], a.ijk[1], a.ijk[0]) < std::tie(b.ijk[2], b.ijk[1], b.ijk[0]);
    });
    return out;
}

std::vector<CellSample> largest_connected_component(const std::vector<CellSample>& subset,
                                                    const std::array<int, 3>& dims) {
    if (subset.empty()) throw DataError("largest_connected_component: empty input");

    std::unordered_map<std::size_t, int> index_of;
    index_of.reserve(subset.size() * 2);
    for (std::size_t n = 0; n < subset.size(); ++n)
        index_of.emplace(linear_voxel(subset[n].ijk, dims), static_cast<int>(n));

    std::vector<int> label(subset.size(), -1);
    int n_components = 0;
    std::vector<std::size_t> component_size;
    std::vector<std::size_t> component_min_index;

    // subset is ordered by voxel index, so seeds are visited smallest-first.
    std::deque<int> queue;
    for (std::size_t seed = 0; seed < subset.size(); ++seed) {
        if (label[seed] >= 0) continue;
        const int comp = n_components++;
        component_size.push_back(0);
        component_min_index.push_back(linear_voxel(subset[seed].ijk, dims));
        label[seed] = comp;
        queue.push_back(static_cast<int>(seed));
        while (!queue.empty()) {
            int cur = queue.front();
            queue.pop_front();
            ++component_size[comp];
            const auto& ijk = subset[cur].ijk;
            static constexpr int kSteps[6][3] = {{1, 0, 0},  {-1, 0, 0}, {0, 1, 0},
                                                 {0, -1, 0}, {0, 0, 1},  {0, 0, -1}};
            for (const auto& d : kSteps) {
                std::array<int, 3> nb{ijk[0] + d[0], ijk[1] + d[1], ijk[2] + d[2]};
                if (nb[0] < 0 || nb[1] < 0 || nb[2] < 0 || nb[0] >= dims[0] || nb[1] >= dims[1] ||
                    nb[2] >= dims[2])
                    continue;
                auto it = index_of.find(linear_voxel(nb, dims));
                if (it == index_of.end() || label[it->second] >= 0) continue;
                label[it->second] = comp;
                queue.push_back(it->second);
            }
        }
    }

    int best = 0;
    for (int c = 1; c < n_components; ++c) {
        if (component_size[c] > component_size[best] ||
            (component_size[c] == component_size[best] &&
             component_min_index[c] < component_min_index[best]))
            best = c;
    }

    std::vector<CellSample> out;
    out.reserve(component_size[best]);
    for (std::size_t n = 0; n < subset.size(); ++n)
        if (label[n] == best) out.push_back(subset[n]);
    return out;
}

VolumetricMesh build_mesh(const std::vector<CellSample>& component, const VoxelGrid& grid) {
    if (component.empty()) throw DataError("build_mesh: empty component");
    VolumetricMesh mesh;
    mesh.kind = CellKind::Hexahedron;
    mesh.hexes.reserve(component.size());
    mesh.cell_temperature_c.reserve(component.size());
    mesh.cell_origin.reserve(component.size());

    std::unordered_map<std::size_t, int> node_of_corner;
    node_of_corner.reserve(component.size() * 2);

    for (const CellSample& cell : component) {
        const int i = cell.ijk[0], j = cell.ijk[1], k = cell.ijk[2];
        std::array<int, 8> hex{};
        for (int bz = 0; bz < 2; ++bz)
            for (int by = 0; by < 2; ++by)
                for (int bx = 0; bx < 2; ++bx) {
                    std::size_t corner = grid.corner_index(i + bx, j + by, k + bz);
                    auto [it, inserted] =
                        node_of_corner.emplace(corner, static_cast<int>(mesh.nodes.size()));
                    if (inserted) mesh.nodes.push_back(grid.corner_position(i + bx, j + by, k + bz));
                    hex[kVtkCornerOfBits[bx][by][bz]] = it->second;
                }
        mesh.hexes.push_back(hex);
        mesh.cell_temperature_c.push_back(cell.center_temperature_c);
        mesh.cell_origin.push_back(cell.ijk);
    }
    return mesh;
}

VolumetricMesh hex_to_tet(const VolumetricMesh& mesh) {
    if (mesh.kind != CellKind::Hexahedron) throw DataError("hex_to_tet expects a hex mesh");
    VolumetricMesh out;
    out.kind = CellKind::Tetrahedron;
    out.nodes = mesh.nodes;
    out.tets.reserve(mesh.hexes.size() * 6);
    out.cell_temperature_c.reserve(mesh.hexes.size() * 6);
    out.cell_origin.reserve(mesh.hexes.size() * 6);

    static constexpr int kAxisOrders[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                              {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};

    for (std::size_t h = 0; h < mesh.hexes.size(); ++h) {
        const auto& hex = mesh.hexes[h];
        const bool odd = !mesh.cell_origin.empty() &&
                         ((mesh.cell_origin[h][0] + mesh.cell_origin[h][1] +
                           mesh.cell_origin[h][2]) & 1) != 0;
        auto corner = [&](int bx, int by, int bz) {
            if (odd) {  // point reflection through the cell center
                bx = 1 - bx;
                by = 1 - by;
                bz = 1 - bz;
            }
            return hex[kVtkCornerOfBits[bx][by][bz]];
        };
        for (const auto& order : kAxisOrders) {
            int bits[3] = {0, 0, 0};
            std::array<int, 4> tet{};
            tet[0] = corner(0, 0, 0);
            bits[order[0]] = 1;
            tet[1] = corner(bits[0], bits[1], bits[2]);
            bits[order[1]] = 1;
            tet[2] = corner(bits[0], bits[1], bits[2]);
            tet[3] = corner(1, 1, 1);

            // Normalize orientation to positive volume.
            const Vec3& a = out.nodes[tet[0]];
            Vec3 e1 = out.nodes[tet[1]] - a;
            Vec3 e2 = out.nodes[tet[2]] - a;
            Vec3 e3 = out.nodes[tet[3]] - a;
            if (e1.cross(e2).dot(e3) < 0.0) std::swap(tet[1], tet[2]);

            out.tets.push_back(tet);
            out.cell_temperature_c.push_back(mesh.cell_temperature_c[h]);
            out.cell_origin.push_back(mesh.cell_origin.empty() ? std::array<int, 3>{0, 0, 0}
                                                               : mesh.cell_origin[h]);
        }
    }
    return out;
}

double cell_volume(const VolumetricMesh& mesh, std::size_t cell) {
    if (mesh.kind == CellKind::Tetrahedron) {
        const auto& t = mesh.tets[cell];
        Vec3 a = mesh.nodes[t[0]];
        Vec3 e1 = mesh.nodes[t[1]] - a;
        Vec3 e2 = mesh.nodes[t[2]] - a;
        Vec3 e3 = mesh.nodes[t[3]] - a;
        return e1.cross(e2).dot(e3) / 6.0;
    }
    // Axis-aligned box: product of edge lengths from the VTK corner order.
    const auto& hx = mesh.hexes[cell];
    Vec3 d = mesh.nodes[hx[6]] - mesh.nodes[hx[0]];
    return d.x * d.y * d.z;
}

namespace {

void write_vtk_common(std::ostream& out, const VolumetricMesh& mesh) {
    std::string buf;
    out << "# vtk DataFile Version 3.0\n";
    out << "voxtherm volumetric mesh\n";
    out << "ASCII\n";
    out << "DATASET UNSTRUCTURED_GRID\n";
    out << "POINTS " << mesh.nodes.size() << " double\n";
    for (const Vec3& p : mesh.nodes) {
        buf.clear();
        format_double(buf, p.x);
        buf += ' ';
        format_double(buf, p.y);
        buf += ' ';
        format_double(buf, p.z);
        buf += '\n';
        out << buf;
    }
    const std::size_t m = mesh.cell_count();
    const int npc = mesh.nodes_per_cell();
    out << "CELLS " << m << " " << m * (npc + 1) << "\n";
    for (std::size_t c = 0; c < m; ++c) {
        out << npc;
        if (mesh.kind == CellKind::Hexahedron)
            for (int n : mesh.hexes[c]) out << " " << n;
        else
            for (int n : mesh.tets[c]) out << " " << n;
        out << "\n";
    }
    out << "CELL_TYPES " << m << "\n";
    const int vtk_type = mesh.kind == CellKind::Hexahedron ? 12 : 10;
    for (std::size_t c = 0; c < m; ++c) out << vtk_type << "\n";
}

}  // namespace

void write_vtk(const std::string& path, const VolumetricMesh& mesh) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open for writing: " + path);
    write_vtk_common(out, mesh);
    out << "CELL_DATA " << mesh.cell_count() << "\n";
    out << "SCALARS temperature_C double 1\n";
    out << "LOOKUP_TABLE default\n";
    std::string buf;
    for (double t : mesh.cell_temperature_c) {
        buf.clear();
        format_double(buf, t);
        buf += '\n';
        out << buf;
    }
    if (!out) throw DataError("write failed: " + path);
}

void write_vtk_point_data(const std::string& path, const VolumetricMesh& mesh,
                          const std::vector<double>& nodal_temperature) {
    if (nodal_temperature.size() != mesh.nodes.size())
        throw DataError("nodal temperature size mismatch");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open for writing: " + path);
    write_vtk_common(out, mesh);
    out << "POINT_DATA " << mesh.nodes.size() << "\n";
    out << "SCALARS temperature_C double 1\n";
    out << "LOOKUP_TABLE default\n";
    std::string buf;
    for (double t : nodal_temperature) {
        buf.clear();
        format_double(buf, t);
        buf += '\n';
        out << buf;
    }
    if (!out) throw DataError("write failed: " + path);
}

VolumetricMesh read_vtk(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open mesh: " + path);
    std::string line;
    auto next_line = [&]() {
        while (std::getline(in, line))
            if (!line.empty()) return true;
        return false;
    };
    if (!next_line() || line.rfind("# vtk", 0) != 0) throw DataError("not a VTK file: " + path);
    next_line();  // title
    if (!next_line() || line != "ASCII") throw DataError("expected ASCII VTK: " + path);
    if (!next_line() || line != "DATASET UNSTRUCTURED_GRID")
        throw DataError("expected unstructured grid: " + path);

    VolumetricMesh mesh;
    std::size_t n_points = 0;
    if (!next_line()) throw DataError("truncated VTK: " + path);
    {
        std::istringstream ss(line);
        std::string tag, type;
        ss >> tag >> n_points >> type;
        if (tag != "POINTS") throw DataError("expected POINTS in " + path);
    }
    mesh.nodes.resize(n_points);
    for (std::size_t i = 0; i < n_points; ++i)
        if (!(in >> mesh.nodes[i].x >> mesh.nodes[i].y >> mesh.nodes[i].z))
            throw DataError("truncated POINTS in " + path);
    std::getline(in, line);

    std::size_t n_cells = 0, list_len = 0;
    if (!next_line()) throw DataError("truncated VTK: " + path);
    {
        std::istringstream ss(line);
        std::string tag;
        ss >> tag >> n_cells >> list_len;
        if (tag != "CELLS") throw DataError("expected CELLS in " + path);
    }
    std::vector<std::vector<int>> raw_cells(n_cells);
    for (std::size_t c = 0; c < n_cells; ++c) {
        int npc = 0;
        if (!(in >> npc)) throw DataError("truncated CELLS in " + path);
        raw_cells[c].resize(npc);
        for (int n = 0; n < npc; ++n)
            if (!(in >> raw_cells[c][n])) throw DataError("truncated CELLS in " + path);
    }
    std::getline(in, line);

    if (!next_line()) throw DataError("truncated VTK: " + path);
    {
        std::istringstream ss(line);
        std::string tag;
        std::size_t n;
        ss >> tag >> n;
        if (tag != "CELL_TYPES" || n != n_cells) throw DataError("expected CELL_TYPES in " + path);
    }
    int kind = -1;
    for (std::size_t c = 0; c < n_cells; ++c) {
        int t = 0;
        if (!(in >> t)) throw DataError("truncated CELL_TYPES in " + path);
        if (t != 12 && t != 10) throw DataError("unsupported VTK cell type in " + path);
        if (kind == -1) kind = t;
        if (kind != t) throw DataError("mixed cell types are not supported: " + path);
    }
    std::getline(in, line);
    mesh.kind = kind == 12 ? CellKind::Hexahedron : CellKind::Tetrahedron;
    for (const auto& rc : raw_cells) {
        if (mesh.kind == CellKind::Hexahedron) {
            if (rc.size() != 8) throw DataError("hexahedron with wrong node count in " + path);
            std::array<int, 8> h{};
            std::copy(rc.begin(), rc.end(), h.begin());
            mesh.hexes.push_back(h);
        } else {
            if (rc.size() != 4) throw DataError("tetrahedron with wrong node count in " + path);
            std::array<int, 4> t{};
            std::copy(rc.begin(), rc.end(), t.begin());
            mesh.tets.push_back(t);
        }
    }

    // Optional CELL_DATA temperature_C block.
    while (next_line()) {
        if (line.rfind("CELL_DATA", 0) == 0) {
            if (!next_line() || line.rfind("SCALARS temperature_C", 0) != 0)
                throw DataError("expected SCALARS temperature_C in " + path);
            next_line();  // LOOKUP_TABLE
            mesh.cell_temperature_c.resize(n_cells);
            for (std::size_t c = 0; c < n_cells; ++c)
                if (!(in >> mesh.cell_temperature_c[c]))
                    throw DataError("truncated CELL_DATA in " + path);
            break;
        }
    }
    return mesh;
}

}  // namespace voxtherm
