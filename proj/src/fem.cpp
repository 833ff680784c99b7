// SPDX-License-Identifier: Apache-2.0
#include "voxtherm/fem.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>

#include "voxtherm/errors.hpp"
#include "voxtherm/threading.hpp"

namespace voxtherm {

void MaterialParams::validate() const {
    if (!(conductivity > 0.0) || !(density > 0.0) || !(specific_heat > 0.0))
        throw DataError("material parameters must be positive");
}

void SparseMatrix::multiply(const double* x, double* y) const {
#pragma omp parallel for schedule(static)
    for (int r = 0; r < n; ++r) {
        double acc = 0.0;
        for (int e = row_ptr[r]; e < row_ptr[r + 1]; ++e) acc += values[e] * x[cols[e]];
        y[r] = acc;
    }
}

double SparseMatrix::diagonal(int row) const {
    for (int e = row_ptr[row]; e < row_ptr[row + 1]; ++e)
        if (cols[e] == row) return values[e];
    return 0.0;
}

double HeatOperators::total_mass() const {
    return deterministic_sum(lumped_mass.data(), lumped_mass.size());
}

namespace {

// VTK hexahedron corner -> local (-1/+1)^3 coordinates.
constexpr double kHexSign[8][3] = {
    {-1, -1, -1}, {1, -1, -1}, {1, 1, -1}, {-1, 1, -1},
    {-1, -1, 1},  {1, -1, 1},  {1, 1, 1},  {-1, 1, 1},
};

struct ElementMatrices {
    double stiffness[8][8];
    double lumped[8];
    int n;  // 8 for hex, 4 for tet
};

// Trilinear hexahedron, 2x2x2 Gauss points. Exact for the box cells produced
// by mesh extraction and valid for any non-degenerate trilinear hex.
ElementMatrices hex_element(const VolumetricMesh& mesh, std::size_t cell,
                            const MaterialParams& mat) {
    ElementMatrices em{};
    em.n = 8;
    const auto& hx = mesh.hexes[cell];
    const double g = 1.0 / std::sqrt(3.0);

    for (int gz = 0; gz < 2; ++gz)
        for (int gy = 0; gy < 2; ++gy)
            for (int gx = 0; gx < 2; ++gx) {
                const double xi[3] = {g * (2 * gx - 1), g * (2 * gy - 1), g * (2 * gz - 1)};

                double dNdxi[8][3];
                double shape[8];
                for (int c = 0; c < 8; ++c) {
                    const double* s = kHexSign[c];
                    const double f[3] = {0.5 * (1.0 + s[0] * xi[0]), 0.5 * (1.0 + s[1] * xi[1]),
                                         0.5 * (1.0 + s[2] * xi[2])};
                    shape[c] = f[0] * f[1] * f[2];
                    dNdxi[c][0] = 0.5 * s[0] * f[1] * f[2];
                    dNdxi[c][1] = 0.5 * s[1] * f[0] * f[2];
                    dNdxi[c][2] = 0.5 * s[2] * f[0] * f[1];
                }

                double jac[3][3] = {};
                for (int c = 0; c < 8; ++c) {
                    const Vec3& p = mesh.nodes[hx[c]];
                    const double xyz[3] = {p.x, p.y, p.z};
                    for (int a = 0; a < 3; ++a)
                        for (int b = 0; b < 3; ++b) jac[a][b] += dNdxi[c][a] * xyz[b];
                }
                const double det = jac[0][0] * (jac[1][1] * jac[2][2] - jac[1][2] * jac[2][1]) -
                                   jac[0][1] * (jac[1][0] * jac[2][2] - jac[1][2] * jac[2][0]) +
                                   jac[0][2] * (jac[1][0] * jac[2][1] - jac[1][1] * jac[2][0]);
                if (!(det > 0.0))
                    throw DataError("degenerate cell " + std::to_string(cell));

                double inv[3][3];
                const double id = 1.0 / det;
                inv[0][0] = (jac[1][1] * jac[2][2] - jac[1][2] * jac[2][1]) * id;
                inv[0][1] = (jac[0][2] * jac[2][1] - jac[0][1] * jac[2][2]) * id;
                inv[0][2] = (jac[0][1] * jac[1][2] - jac[0][2] * jac[1][1]) * id;
                inv[1][0] = (jac[1][2] * jac[2][0] - jac[1][0] * jac[2][2]) * id;
                inv[1][1] = (jac[0][0] * jac[2][2] - jac[0][2] * jac[2][0]) * id;
                inv[1][2] = (jac[0][2] * jac[1][0] - jac[0][0] * jac[1][2]) * id;
                inv[2][0] = (jac[1][0] * jac[2][1] - jac[1][1] * jac[2][0]) * id;
                inv[2][1] = (jac[0][1] * jac[2][0] - jac[0][0] * jac[2][1]) * id;
                inv[2][2] = (jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0]) * id;

                double grad[8][3];
                for (int c = 0; c < 8; ++c)
                    for (int b = 0; b < 3; ++b)
                        grad[c][b] = inv[0][b] * dNdxi[c][0] + inv[1][b] * dNdxi[c][1] +
                                     inv[2][b] * dNdxi[c][2];

                for (int a = 0; a < 8; ++a) {
                    for (int b = 0; b < 8; ++b) {
                        double dot = grad[a][0] * grad[b][0] + grad[a][1] * grad[b][1] +
                                     grad[a][2] * grad[b][2];
                        em.stiffness[a][b] += mat.conductivity * dot * det;
                    }
                    em.lumped[a] += mat.density * mat.specific_heat * shape[a] * det;
                }
            }
    return em;
}

ElementMatrices tet_element(const VolumetricMesh& mesh, std::size_t cell,
                            const MaterialParams& mat) {
    ElementMatrices em{};
    em.n = 4;
    const auto& t = mesh.tets[cell];
    const Vec3& a = mesh.nodes[t[0]];
    Vec3 e1 = mesh.nodes[t[1]] - a;
    Vec3 e2 = mesh.nodes[t[2]] - a;
    Vec3 e3 = mesh.nodes[t[3]] - a;
    const double vol6 = e1.cross(e2).dot(e3);
    if (!(vol6 > 0.0)) throw DataError("degenerate cell " + std::to_string(cell));
    const double volume = vol6 / 6.0;

    // Barycentric gradients: rows of the inverse edge matrix.
    Vec3 g1 = e2.cross(e3) / vol6;
    Vec3 g2 = e3.cross(e1) / vol6;
    Vec3 g3 = e1.cross(e2) / vol6;
    Vec3 g0 = -(g1 + g2 + g3);
    const Vec3 grads[4] = {g0, g1, g2, g3};

    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j)
            em.stiffness[i][j] = mat.conductivity * grads[i].dot(grads[j]) * volume;
        em.lumped[i] = mat.density * mat.specific_heat * volume / 4.0;
    }
    return em;
}

ElementMatrices element_matrices(const VolumetricMesh& mesh, std::size_t cell,
                                 const MaterialParams& mat) {
    return mesh.kind == CellKind::Hexahedron ? hex_element(mesh, cell, mat)
                                             : tet_element(mesh, cell, mat);
}

const int* cell_nodes(const VolumetricMesh& mesh, std::size_t cell) {
    return mesh.kind == CellKind::Hexahedron ? mesh.hexes[cell].data() : mesh.tets[cell].data();
}

}  // namespace

HeatOperators assemble(const VolumetricMesh& mesh, const MaterialParams& material) {
    material.validate();
    const int n = static_cast<int>(mesh.nodes.size());
    const std::size_t m = mesh.cell_count();
    const int npc = mesh.nodes_per_cell();

    struct Triplet {
        int row, col;
        double value;
    };
    std::vector<Triplet> triplets;
    triplets.reserve(m * static_cast<std::size_t>(npc) * npc);

    HeatOperators ops;
    ops.lumped_mass.assign(n, 0.0);

    for (std::size_t c = 0; c < m; ++c) {
        ElementMatrices em = element_matrices(mesh, c, material);
        const int* nodes = cell_nodes(mesh, c);
        for (int a = 0; a < em.n; ++a) {
            ops.lumped_mass[nodes[a]] += em.lumped[a];
            for (int b = 0; b < em.n; ++b)
                triplets.push_back({nodes[a], nodes[b], em.stiffness[a][b]});
        }
    }

    std::sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });

    SparseMatrix& k = ops.stiffness;
    k.n = n;
    k.row_ptr.assign(n + 1, 0);
    for (std::size_t i = 0; i < triplets.size();) {
        std::size_t j = i;
        double acc = 0.0;
        while (j < triplets.size() && triplets[j].row == triplets[i].row &&
               triplets[j].col == triplets[i].col)
            acc += triplets[j++].value;
        k.cols.push_back(triplets[i].col);
        k.values.push_back(acc);
        ++k.row_ptr[triplets[i].row + 1];
        i = j;
    }
    for (int r = 0; r < n; ++r) k.row_ptr[r + 1] += k.row_ptr[r];
    return ops;
}

void apply_stiffness_matrix_free(const VolumetricMesh& mesh, const MaterialParams& material,
                                 const std::vector<double>& x, std::vector<double>& y) {
    material.validate();
    if (x.size() != mesh.nodes.size()) throw DataError("matrix-free apply: size mismatch");
    y.assign(mesh.nodes.size(), 0.0);
    const std::size_t m = mesh.cell_count();
    for (std::size_t c = 0; c < m; ++c) {
        ElementMatrices em = element_matrices(mesh, c, material);
        const int* nodes = cell_nodes(mesh, c);
        for (int a = 0; a < em.n; ++a) {
            double acc = 0.0;
            for (int b = 0; b < em.n; ++b) acc += em.stiffness[a][b] * x[nodes[b]];
            y[nodes[a]] += acc;
        }
    }
}

std::vector<double> cells_to_nodes(const VolumetricMesh& mesh) {
    if (mesh.cell_temperature_c.size() != mesh.cell_count())
        throw DataError("mesh has no per-cell temperature");
    std::vector<double> weighted(mesh.nodes.size(), 0.0);
    std::vector<double> weight(mesh.nodes.size(), 0.0);
    const int npc = mesh.nodes_per_cell();
    for (std::size_t c = 0; c < mesh.cell_count(); ++c) {
        const double vol = cell_volume(mesh, c);
        const int* nodes = cell_nodes(mesh, c);
        for (int a = 0; a < npc; ++a) {
            weighted[nodes[a]] += vol * mesh.cell_temperature_c[c];
            weight[nodes[a]] += vol;
        }
    }
    for (std::size_t i = 0; i < weighted.size(); ++i) {
        if (weight[i] <= 0.0) throw DataError("node not referenced by any cell");
        weighted[i] /= weight[i];
    }
    return weighted;
}

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double acc = 0.0;
    const std::size_t n = a.size();
    constexpr std::size_t kChunk = 4096;
    for (std::size_t begin = 0; begin < n; begin += kChunk) {
        std::size_t end = std::min(begin + kChunk, n);
        double partial = 0.0;
        for (std::size_t i = begin; i < end; ++i) partial += a[i] * b[i];
        acc += partial;
    }
    return acc;
}

}  // namespace

HeatState implicit_euler_step(const HeatState& state, const HeatOperators& ops, double dt,
                              const CgOptions& cg) {
    if (!(dt > 0.0)) throw DataError("time step must be positive");
    const int n = ops.stiffness.n;
    if (static_cast<int>(state.nodal_temperature.size()) != n)
        throw DataError("state size does not match operators");

    // A = M + dt K applied on the fly; b = M T_old.
    const std::vector<double>& t_old = state.nodal_temperature;
    std::vector<double> b(n);
    for (int i = 0; i < n; ++i) b[i] = ops.lumped_mass[i] * t_old[i];

    std::vector<double> inv_diag(n);
    for (int i = 0; i < n; ++i)
        inv_diag[i] = 1.0 / (ops.lumped_mass[i] + dt * ops.stiffness.diagonal(i));

    auto apply = [&](const std::vector<double>& x, std::vector<double>& y) {
        ops.stiffness.multiply(x.data(), y.data());
        for (int i = 0; i < n; ++i) y[i] = ops.lumped_mass[i] * x[i] + dt * y[i];
    };

    std::vector<double> x = t_old;  // warm start
    std::vector<double> r(n), z(n), p(n), q(n);
    apply(x, q);
    for (int i = 0; i < n; ++i) r[i] = b[i] - q[i];

    const double b_norm = std::sqrt(dot(b, b));
    const double stop = cg.tolerance * (b_norm > 0.0 ? b_norm : 1.0);
    const int max_it = cg.max_iterations > 0 ? cg.max_iterations : 10 * n + 100;

    double r_norm = std::sqrt(dot(r, r));
    if (r_norm > stop) {
        for (int i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
        p = z;
        double rz = dot(r, z);
        int it = 0;
        for (; it < max_it; ++it) {
            apply(p, q);
            const double pq = dot(p, q);
            if (!(pq > 0.0)) throw NumericalError("conjugate gradient breakdown (p.Ap <= 0)");
            const double alpha = rz / pq;
            for (int i = 0; i < n; ++i) x[i] += alpha * p[i];
            for (int i = 0; i < n; ++i) r[i] -= alpha * q[i];
            r_norm = std::sqrt(dot(r, r));
            if (r_norm <= stop) break;
            for (int i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
            const double rz_new = dot(r, z);
            const double beta = rz_new / rz;
            rz = rz_new;
            for (int i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
        }
        if (r_norm > stop)
            throw NumericalError("conjugate gradient did not converge: residual " +
                                 std::to_string(r_norm / (b_norm > 0.0 ? b_norm : 1.0)) +
                                 " after " + std::to_string(max_it) + " iterations");
    }

    HeatState next;
    next.nodal_temperature = std::move(x);
    next.time = state.time + dt;
    return next;
}

double default_time_step(const VolumetricMesh& mesh, const MaterialParams& material) {
    double total = 0.0;
    for (std::size_t c = 0; c < mesh.cell_count(); ++c) total += cell_volume(mesh, c);
    double per_voxel = mesh.kind == CellKind::Tetrahedron ? total * 6.0 / mesh.cell_count()
                                                          : total / mesh.cell_count();
    double edge = std::cbrt(per_voxel);
    return edge * edge * material.density * material.specific_heat /
           (6.0 * material.conductivity);
}

SimulationResult simulate(const VolumetricMesh& mesh, const MaterialParams& material, int steps,
                          double dt, const CgOptions& cg) {
    material.validate();
    if (steps < 0) throw DataError("steps must be non-negative");
    if (dt == 0.0) dt = default_time_step(mesh, material);

    HeatOperators ops = assemble(mesh, material);

    SimulationResult result;
    HeatState state;
    state.nodal_temperature = cells_to_nodes(mesh);
    state.time = 0.0;

    auto summarize = [&](int step, const HeatState& s, double max_change) {
        StepSummary row;
        row.step = step;
        row.time = s.time;
        const auto& t = s.nodal_temperature;
        row.t_min = *std::min_element(t.begin(), t.end());
        row.t_max = *std::max_element(t.begin(), t.end());
        row.t_mean = deterministic_sum(t.data(), t.size()) / static_cast<double>(t.size());
        double energy = 0.0;
        for (std::size_t i = 0; i < t.size(); ++i) energy += ops.lumped_mass[i] * t[i];
        row.energy = energy;
        row.max_change = max_change;
        return row;
    };

    result.summary.push_back(summarize(0, state, 0.0));
    result.history.push_back(state);

    for (int s = 1; s <= steps; ++s) {
        HeatState next = implicit_euler_step(state, ops, dt, cg);
        for (const double v : next.nodal_temperature)
            if (!std::isfinite(v))
                throw NumericalError("non-finite temperature at step " + std::to_string(s));
        double max_change = 0.0;
        for (std::size_t i = 0; i < next.nodal_temperature.size(); ++i)
            max_change = std::max(max_change, std::abs(next.nodal_temperature[i] -
                                                       state.nodal_temperature[i]));
        state = std::move(next);
        result.summary.push_back(summarize(s, state, max_change));
        result.history.push_back(state);
    }
    return result;
}

}  // namespace voxtherm
