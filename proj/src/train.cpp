// SPDX-License-Identifier: Apache-2.0
#include "voxtherm/train.hpp"

#include <cmath>
#include <fstream>
#include <random>

#include <json.hpp>

#include "voxtherm/errors.hpp"
#include "voxtherm/optimizer.hpp"
#include "voxtherm/renderer.hpp"
#include "voxtherm/threading.hpp"

using nlohmann::json;

namespace voxtherm {

void TrainConfig::validate() const {
    if (grid_dims[0] <= 0 || grid_dims[1] <= 0 || grid_dims[2] <= 0)
        throw DataError("config: grid dims must be positive");
    if (iterations < 0) throw DataError("config: iterations must be non-negative");
    if (rays_per_batch <= 0) throw DataError("config: rays_per_batch must be positive");
    if (!(rms_smoothing > 0.0) || rms_smoothing >= 1.0)
        throw DataError("config: rms_smoothing must be in (0, 1)");
    if (!(step_scale > 0.0)) throw DataError("config: step_scale must be positive");
    if (weights.lambda < 0.0 || weights.lambda > 1.0)
        throw DataError("config: lambda must be in [0, 1]");
    if (weights.tv_rgb < 0.0 || weights.tv_thermal < 0.0)
        throw DataError("config: TV weights must be non-negative");
}

std::string train_config_to_json(const TrainConfig& c) {
    json j;
    j["grid_dims"] = c.grid_dims;
    j["iterations"] = c.iterations;
    j["rays_per_batch"] = c.rays_per_batch;
    j["lr_density"] = c.lr_density;
    j["lr_sh"] = c.lr_sh;
    j["lr_temperature"] = c.lr_temperature;
    j["lr_background"] = c.lr_background;
    j["rms_smoothing"] = c.rms_smoothing;
    j["density_clamp_min"] = c.density_clamp_min;
    j["density_init"] = c.density_init;
    j["sh_dc_init"] = c.sh_dc_init;
    j["temperature_init"] = c.temperature_init;
    j["step_scale"] = c.step_scale;
    j["background_height"] = c.background_height;
    j["background_width"] = c.background_width;
    j["lambda"] = c.weights.lambda;
    j["tv_rgb_weight"] = c.weights.tv_rgb;
    j["tv_thermal_weight"] = c.weights.tv_thermal;
    j["seed"] = c.seed;
    j["threads"] = c.threads;
    return j.dump(2);
}

TrainConfig train_config_from_json(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw DataError(std::string("malformed train config: ") + e.what());
    }
    TrainConfig c;
    if (j.contains("grid_dims"))
        for (int a = 0; a < 3; ++a) c.grid_dims[a] = j["grid_dims"][a].get<int>();
    auto get = [&](const char* key, auto& field) {
        if (j.contains(key)) field = j[key].get<std::decay_t<decltype(field)>>();
    };
    get("iterations", c.iterations);
    get("rays_per_batch", c.rays_per_batch);
    get("lr_density", c.lr_density);
    get("lr_sh", c.lr_sh);
    get("lr_temperature", c.lr_temperature);
    get("lr_background", c.lr_background);
    get("rms_smoothing", c.rms_smoothing);
    get("density_clamp_min", c.density_clamp_min);
    get("density_init", c.density_init);
    get("sh_dc_init", c.sh_dc_init);
    get("temperature_init", c.temperature_init);
    get("step_scale", c.step_scale);
    get("background_height", c.background_height);
    get("background_width", c.background_width);
    get("lambda", c.weights.lambda);
    get("tv_rgb_weight", c.weights.tv_rgb);
    get("tv_thermal_weight", c.weights.tv_thermal);
    get("seed", c.seed);
    get("threads", c.threads);
    c.validate();
    return c;
}

VoxelGrid initialize_grid(const Scene& scene, const TrainConfig& config) {
    config.validate();
    VoxelGrid grid(config.grid_dims, scene.bounds, scene.temp_range);
    std::fill(grid.density().begin(), grid.density().end(), config.density_init);
    std::fill(grid.temperature().begin(), grid.temperature().end(), config.temperature_init);
    auto& sh = grid.sh_coeffs();
    for (std::size_t c = 0; c < grid.corner_count(); ++c)
        for (int ch = 0; ch < 3; ++ch)
            sh[c * VoxelGrid::kShPerCorner + ch * kShBasisDim] = config.sh_dc_init;
    return grid;
}

TrainResult train(const Scene& scene, const TrainConfig& config,
                  const std::function<void(const LossRecord&)>& on_iteration) {
    config.validate();
    if (scene.train_split.empty()) throw DataError("scene has no training frames");
    if (config.threads > 0) set_thread_count(config.threads);

    TrainResult result{initialize_grid(scene, config),
                       SphericalBackground(config.background_height, config.background_width),
                       {}};
    VoxelGrid& grid = result.grid;
    SphericalBackground& background = result.background;
    background.fill({0.5, 0.5, 0.5});

    const double step = default_step(grid, config.step_scale);

    GridGradients grads(grid);
    std::vector<double> bg_grad(background.rgb().size(), 0.0);

    RmsProp opt_density(grid.density().size(), config.lr_density, config.rms_smoothing);
    RmsProp opt_sh(grid.sh_coeffs().size(), config.lr_sh, config.rms_smoothing);
    RmsProp opt_temp(grid.temperature().size(), config.lr_temperature, config.rms_smoothing);
    RmsProp opt_bg(background.rgb().size(), config.lr_background, config.rms_smoothing);

    std::mt19937_64 rng(config.seed);
    std::vector<RayBatchEntry> batch(static_cast<std::size_t>(config.rays_per_batch));

    result.history.reserve(config.iterations);
    for (int iter = 0; iter < config.iterations; ++iter) {
        const int view =
            scene.train_split[std::uniform_int_distribution<std::size_t>(
                0, scene.train_split.size() - 1)(rng)];
        const SceneFrame& frame = scene.frames[view];
        std::uniform_int_distribution<int> pick_x(0, scene.intrinsics.width - 1);
        std::uniform_int_distribution<int> pick_y(0, scene.intrinsics.height - 1);
        for (auto& entry : batch) {
            const int u = pick_x(rng);
            const int v = pick_y(rng);
            entry.ray = generate_ray(scene.intrinsics, frame.pose, u, v);
            entry.rgb_truth = {frame.rgb.at(u, v, 0), frame.rgb.at(u, v, 1),
                               frame.rgb.at(u, v, 2)};
            entry.thermal_truth = frame.thermal.at(u, v);
        }

        LossBreakdown losses =
            evaluate_batch(grid, &background, batch, config.weights, step, &grads, &bg_grad);
        if (!losses.finite())
            throw NumericalError(std::string("non-finite loss term '") +
                                 losses.first_non_finite() + "' at iteration " +
                                 std::to_string(iter));

        opt_density.step_and_clear(grid.density(), grads.density);
        opt_sh.step_and_clear(grid.sh_coeffs(), grads.sh);
        opt_temp.step_and_clear(grid.temperature(), grads.temperature);
        opt_bg.step_and_clear(background.rgb(), bg_grad);
        grid.clamp_density(config.density_clamp_min);

        LossRecord record{iter, losses};
        if (on_iteration) on_iteration(record);
        result.history.push_back(record);
    }
    return result;
}

void write_loss_csv(const std::string& path, const std::vector<LossRecord>& history) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot open for writing: " + path);
    out << "iteration,l2_rgb,tv_rgb,l2_thermal,l1_thermal,tv_thermal,total\n";
    char buf[256];
    for (const LossRecord& r : history) {
        std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", r.iteration,
                      r.losses.l2_rgb, r.losses.tv_rgb, r.losses.l2_thermal, r.losses.l1_thermal,
                      r.losses.tv_thermal, r.losses.total);
        out << buf;
    }
    if (!out) throw DataError("write failed: " + path);
}

}  // namespace voxtherm
