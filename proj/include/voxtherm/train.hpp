// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "voxtherm/losses.hpp"
#include "voxtherm/scene.hpp"

namespace voxtherm {

// All training knobs. Learning rates follow the per-field voxel-optimization
// defaults; they are exposed here because no published values pin them.
struct TrainConfig {
    std::array<int, 3> grid_dims{VoxelGrid::kDefaultResolution, VoxelGrid::kDefaultResolution,
                                 VoxelGrid::kDefaultResolution};
    int iterations = 2000;
    int rays_per_batch = 5000;
    double lr_density = 3e1;
    double lr_sh = 1e-2;
    double lr_temperature = 1e-2;
    double lr_background = 1e-2;
    double rms_smoothing = 0.95;
    double density_clamp_min = 0.0;
    double density_init = 0.1;
    double sh_dc_init = 0.01;
    double temperature_init = 0.5;
    double step_scale = 0.5;  // marching step as a fraction of the voxel edge
    int background_height = SphericalBackground::kDefaultHeight;
    int background_width = SphericalBackground::kDefaultWidth;
    LossWeights weights;
    std::uint64_t seed = 0;
    int threads = 0;  // 0 = hardware concurrency

    void validate() const;
};

std::string train_config_to_json(const TrainConfig& config);
TrainConfig train_config_from_json(const std::string& json_text);

struct LossRecord {
    int iteration = 0;
    LossBreakdown losses;
};

struct TrainResult {
    VoxelGrid grid;
    SphericalBackground background;
    std::vector<LossRecord> history;
};

// Initial grid state: density_init everywhere, SH zero except the DC term,
// temperature at temperature_init (0.5 normalized).
VoxelGrid initialize_grid(const Scene& scene, const TrainConfig& config);

// Joint optimization of density, SH color, temperature and the RGB
// background. Each iteration draws rays_per_batch pixels (with replacement)
// from one random training view and supervises both modalities through the
// shared density samples. Throws NumericalError when a loss term goes
// non-finite.
TrainResult train(const Scene& scene, const TrainConfig& config,
                  const std::function<void(const LossRecord&)>& on_iteration = {});

void write_loss_csv(const std::string& path, const std::vector<LossRecord>& history);

}  // namespace voxtherm
