// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "voxtherm/background.hpp"
#include "voxtherm/camera.hpp"
#include "voxtherm/grid.hpp"
#include "voxtherm/image.hpp"

namespace voxtherm {

// One RGB+thermal pair. Both modalities are pixel-aligned and share the pose
// and intrinsics; thermal pixels are normalized to [0,1] via the scene
// temperature range.
struct SceneFrame {
    std::string name;
    std::string rgb_path;
    std::string thermal_path;
    CameraPose pose;
    ImageF rgb;
    ImageF thermal;
};

struct Scene {
    CameraIntrinsics intrinsics;
    std::array<double, 2> temp_range{0.0, 1.0};  // degrees C
    GridBounds bounds;
    std::vector<SceneFrame> frames;
    std::vector<int> train_split;
    std::vector<int> test_split;
};

// Dataset layout: rgb/NNN.png (8-bit RGB), thermal/NNN.png (16-bit gray,
// normalized), poses.json, meta.json. Key names are pinned by the parser
// round-trip tests.
Scene load_scene(const std::string& dir);

// Axis-aligned box primitive rasterized into the ground-truth grid.
struct SyntheticPrimitive {
    Vec3 min_corner;
    Vec3 max_corner;
    double density = 40.0;
    Vec3 color{0.8, 0.3, 0.2};
    double temperature_c = 35.0;
};

struct SyntheticSpec {
    std::array<int, 3> grid_dims{64, 64, 64};
    GridBounds bounds{{-1.0, -1.0, -1.0}, {1.0, 1.0, 1.0}};
    std::array<double, 2> temp_range{20.0, 40.0};
    std::vector<SyntheticPrimitive> primitives;
    int n_views = 25;
    int test_every = 5;  // every k-th view goes to the test split
    int image_width = 96;
    int image_height = 96;
    double focal_px = 110.0;
    double orbit_radius = 2.6;
    double orbit_elevation = 0.35;  // radians above the equator
    Vec3 background_color{0.55, 0.60, 0.65};
    double noise_level = 0.0;  // gaussian sigma added to images before quantization
    std::uint64_t seed = 0;

    void validate() const;
};

SyntheticSpec synthetic_spec_from_json(const std::string& json_text);
std::string synthetic_spec_to_json(const SyntheticSpec& spec);

// Default single-slab scene used by tests and the CLI preset.
SyntheticSpec default_slab_spec();

struct SyntheticScene {
    Scene scene;
    VoxelGrid truth_grid;
    SphericalBackground truth_background;
};

// Rasterizes the primitives into a ground-truth grid, renders every pose with
// the production renderer, and writes a loadable dataset plus the truth grid
// checkpoint and truth mesh. Returns the in-memory scene and grid.
SyntheticScene generate_synthetic(const SyntheticSpec& spec, const std::string& out_dir);

// Builds only the in-memory truth grid/background for a spec (no files).
SyntheticScene build_synthetic_truth(const SyntheticSpec& spec);

// Orbit pose k of n looking at the bounds center.
CameraPose orbit_pose(const SyntheticSpec& spec, int k);

}  // namespace voxtherm
