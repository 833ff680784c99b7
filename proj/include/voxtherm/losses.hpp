// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <vector>

#include "voxtherm/background.hpp"
#include "voxtherm/camera.hpp"
#include "voxtherm/grid.hpp"
#include "voxtherm/image.hpp"

namespace voxtherm {

// Loss balance; lambda weighs thermal L2 against L1, the tv_* factors scale
// the total-variation terms.
struct LossWeights {
    double lambda = 0.5;
    double tv_rgb = 1e-4;
    double tv_thermal = 1e-4;
};

// Mean squared error over all pixels and channels.
double rgb_l2_loss(const ImageF& rendered, const ImageF& truth);

// lambda * MSE + (1 - lambda) * MAE on normalized thermal images.
double thermal_data_loss(const ImageF& rendered, const ImageF& truth, double lambda,
                         double* l2_out = nullptr, double* l1_out = nullptr);

// Total variation over corner values with forward differences to the +x/+y/+z
// corner neighbors; boundary corners skip missing neighbors. The sum of
// sqrt(dx^2+dy^2+dz^2) over all corners and field components is normalized by
// the total corner count. SH contributes 27 components, scalar fields one.
double tv_loss(const VoxelGrid& grid, GridField field);

// Fused value + gradient: adds weight * d(tv)/d(field) into `gradient`
// (field-shaped) and returns the unweighted TV value.
double tv_loss_with_gradient(const VoxelGrid& grid, GridField field, double weight,
                             std::vector<double>& gradient);

// One supervised ray: pixel-aligned RGB and thermal ground truth.
struct RayBatchEntry {
    Ray ray;
    Vec3 rgb_truth;
    double thermal_truth = 0.0;
};

struct LossBreakdown {
    double l2_rgb = 0.0;
    double tv_rgb = 0.0;
    double l2_thermal = 0.0;
    double l1_thermal = 0.0;
    double tv_thermal = 0.0;
    double total = 0.0;
    bool finite() const;
    // Name of the first non-finite term, empty when all are finite.
    const char* first_non_finite() const;
};

// Evaluates the full training loss over a ray batch:
//   L2_rgb + tv_rgb*TV_sh + lambda*L2_T + (1-lambda)*L1_T + tv_thermal*TV_T
// and, when `grads` is non-null, accumulates analytic gradients for every
// grid parameter and background texel touched by the batch. Per-ray work runs
// in parallel; reductions are ordered so results do not depend on scheduling.
// `include_tv` lets callers drop the TV terms (used by stride evaluation).
LossBreakdown evaluate_batch(const VoxelGrid& grid, const SphericalBackground* background,
                             std::span<const RayBatchEntry> batch, const LossWeights& weights,
                             double step, GridGradients* grads,
                             std::vector<double>* background_gradient, bool include_tv = true,
                             double tv_scale = 1.0);

}  // namespace voxtherm
