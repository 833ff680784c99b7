// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "voxtherm/mesh.hpp"

namespace voxtherm {

// Uniform material over the whole mesh.
struct MaterialParams {
    double conductivity = 1.0;    // W/(m K)
    double density = 1.0;         // kg/m^3
    double specific_heat = 1.0;   // J/(kg K)
    void validate() const;
};

// CSR with both triangles stored; rows are complete so the matvec is
// conflict-free per row.
struct SparseMatrix {
    int n = 0;
    std::vector<int> row_ptr;
    std::vector<int> cols;
    std::vector<double> values;

    void multiply(const double* x, double* y) const;
    double diagonal(int row) const;
};

// Galerkin operators for transient conduction: stiffness K from
// k * grad(N) . grad(N) with 2x2x2 Gauss quadrature on trilinear hexes
// (exact constant gradients on linear tets), capacity M lumped by row sum.
// No boundary terms: every surface is insulated (zero flux).
struct HeatOperators {
    SparseMatrix stiffness;
    std::vector<double> lumped_mass;
    double total_mass() const;
};

HeatOperators assemble(const VolumetricMesh& mesh, const MaterialParams& material);

// Applies K without the assembled matrix (gather/scatter per cell); intended
// for meshes too large to assemble. Matches assemble().stiffness.multiply.
void apply_stiffness_matrix_free(const VolumetricMesh& mesh, const MaterialParams& material,
                                 const std::vector<double>& x, std::vector<double>& y);

// Nodal initial condition: volume-weighted mean of adjacent cell temperatures.
std::vector<double> cells_to_nodes(const VolumetricMesh& mesh);

struct HeatState {
    std::vector<double> nodal_temperature;  // degrees C
    double time = 0.0;
};

struct CgOptions {
    double tolerance = 1e-12;  // relative residual
    int max_iterations = 0;    // 0 -> 10n + 100
};

// One implicit Euler step: (M + dt K) T_new = M T_old, Jacobi-preconditioned
// conjugate gradient. Throws NumericalError when CG stalls.
HeatState implicit_euler_step(const HeatState& state, const HeatOperators& ops, double dt,
                              const CgOptions& cg = {});

struct StepSummary {
    int step = 0;
    double time = 0.0;
    double t_min = 0.0;
    double t_max = 0.0;
    double t_mean = 0.0;
    double energy = 0.0;      // sum of M_ii * T_i
    double max_change = 0.0;  // max |T_new - T_old| of this step
};

struct SimulationResult {
    std::vector<HeatState> history;  // steps + 1 entries, initial first
    std::vector<StepSummary> summary;
};

// dt = edge^2 * rho * c / (6 k) with edge inferred from the mean cell volume.
double default_time_step(const VolumetricMesh& mesh, const MaterialParams& material);

SimulationResult simulate(const VolumetricMesh& mesh, const MaterialParams& material,
                          int steps = 10, double dt = 0.0, const CgOptions& cg = {});

}  // namespace voxtherm
