// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "voxtherm/background.hpp"
#include "voxtherm/grid.hpp"

namespace voxtherm {

// Grid checkpoint container. Binary, little-endian, self-describing:
//   magic "VXTHGRID", u32 version,
//   i32 dims[3], f64 bounds[6] (min xyz, max xyz), f64 temp_range[2],
//   i32 sh_per_corner, u8 has_background, (i32 bg_height, i32 bg_width),
//   u64 meta_length, meta bytes (UTF-8 JSON: config echo, seed),
//   f64 density[corners], f64 sh[27*corners], f64 temperature[corners],
//   (f64 background_rgb[3*h*w]).
// Corner arrays are x-fastest: index = i + (nx+1)*(j + (ny+1)*k).
struct Checkpoint {
    VoxelGrid grid;
    SphericalBackground background;
    bool has_background = false;
    std::string meta_json;
};

void save_checkpoint(const std::string& path, const VoxelGrid& grid,
                     const SphericalBackground* background, const std::string& meta_json);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace voxtherm
