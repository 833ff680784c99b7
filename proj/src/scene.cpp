// SPDX-License-Identifier: Apache-2.0
#include "voxtherm/scene.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "voxtherm/checkpoint.hpp"
#include "voxtherm/errors.hpp"
#include "voxtherm/mesh.hpp"
#include "voxtherm/renderer.hpp"
#include "voxtherm/sh.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace voxtherm {

namespace {

json load_json_file(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw DataError("malformed JSON in " + path.string() + ": " + e.what());
    }
    return j;
}

Vec3 vec3_from(const json& j) {
    if (!j.is_array() || j.size() != 3) throw DataError("expected a 3-element array");
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

json vec3_to(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

CameraPose pose_from_transform(const json& rows) {
    if (!rows.is_array() || rows.size() != 4) throw DataError("pose transform must be 4x4");
    CameraPose pose;
    for (int r = 0; r < 3; ++r) {
        const json& row = rows[r];
        if (!row.is_array() || row.size() != 4) throw DataError("pose transform must be 4x4");
        for (int c = 0; c < 3; ++c) pose.rotation(r, c) = row[c].get<double>();
    }
    pose.translation = {rows[0][3].get<double>(), rows[1][3].get<double>(),
                        rows[2][3].get<double>()};
    return pose;
}

json transform_from_pose(const CameraPose& pose) {
    json rows = json::array();
    const double t[3] = {pose.translation.x, pose.translation.y, pose.translation.z};
    for (int r = 0; r < 3; ++r)
        rows.push_back(json::array(
            {pose.rotation(r, 0), pose.rotation(r, 1), pose.rotation(r, 2), t[r]}));
    rows.push_back(json::array({0.0, 0.0, 0.0, 1.0}));
    return rows;
}

std::string frame_id(int k) {
    char buf[8];
    std::snprintf(buf, sizeof(buf), "%03d", k);
    return buf;
}

}  // namespace

Scene load_scene(const std::string& dir) {
    const fs::path root(dir);
    if (!fs::is_directory(root)) throw DataError("scene directory not found: " + dir);

    json poses = load_json_file(root / "poses.json");
    json meta = load_json_file(root / "meta.json");

    Scene scene;
    const json& intr = poses.at("intrinsics");
    scene.intrinsics.fx = intr.at("fx").get<double>();
    scene.intrinsics.fy = intr.at("fy").get<double>();
    scene.intrinsics.cx = intr.at("cx").get<double>();
    scene.intrinsics.cy = intr.at("cy").get<double>();
    scene.intrinsics.width = intr.at("width").get<int>();
    scene.intrinsics.height = intr.at("height").get<int>();
    scene.intrinsics.validate();

    scene.temp_range[0] = meta.at("t_min").get<double>();
    scene.temp_range[1] = meta.at("t_max").get<double>();
    if (!(scene.temp_range[0] < scene.temp_range[1]))
        throw DataError("meta: t_min must be below t_max");
    scene.bounds.min_corner = vec3_from(meta.at("bounds").at("min"));
    scene.bounds.max_corner = vec3_from(meta.at("bounds").at("max"));
    scene.bounds.validate();

    std::vector<std::string> names;
    for (const json& f : poses.at("frames")) {
        SceneFrame frame;
        frame.name = f.at("name").get<std::string>();
        frame.rgb_path = f.at("rgb").get<std::string>();
        frame.thermal_path = f.at("thermal").get<std::string>();
        try {
            frame.pose = pose_from_transform(f.at("transform"));
            frame.pose.validate();
        } catch (const DataError& e) {
            throw DataError("unreadable pose for " + frame.name + ": " + e.what());
        }

        fs::path rgb_file = root / frame.rgb_path;
        fs::path thermal_file = root / frame.thermal_path;
        if (!fs::exists(rgb_file)) throw DataError("missing rgb pair for " + frame.name);
        if (!fs::exists(thermal_file)) throw DataError("missing thermal pair for " + frame.name);
        frame.rgb = load_png(rgb_file.string());
        frame.thermal = load_png(thermal_file.string());
        if (frame.rgb.channels != 3) throw DataError("rgb image must have 3 channels: " + frame.name);
        if (frame.thermal.channels != 1)
            throw DataError("thermal image must have 1 channel: " + frame.name);

        names.push_back(frame.name);
        scene.frames.push_back(std::move(frame));
    }
    if (scene.frames.empty()) throw DataError("scene has no frames");

    // All frames must match the shared intrinsics per modality.
    for (const SceneFrame& f : scene.frames) {
        if (f.rgb.width != scene.intrinsics.width || f.rgb.height != scene.intrinsics.height ||
            f.thermal.width != scene.intrinsics.width ||
            f.thermal.height != scene.intrinsics.height)
            throw DataError("image dimensions do not match intrinsics for " + f.name);
    }

    auto resolve_split = [&](const char* key) {
        std::vector<int> out;
        for (const json& n : meta.at(key)) {
            auto it = std::find(names.begin(), names.end(), n.get<std::string>());
            if (it == names.end())
                throw DataError(std::string("split references unknown frame ") +
                                n.get<std::string>());
            out.push_back(static_cast<int>(it - names.begin()));
        }
        return out;
    };
    scene.train_split = resolve_split("train");
    scene.test_split = resolve_split("test");
    if (scene.train_split.empty()) throw DataError("train split is empty");
    return scene;
}

void SyntheticSpec::validate() const {
    bounds.validate();
    if (grid_dims[0] <= 0 || grid_dims[1] <= 0 || grid_dims[2] <= 0)
        throw DataError("synthetic spec: grid dims must be positive");
    if (n_views < 2) throw DataError("synthetic spec: need at least 2 views");
    if (image_width < 8 || image_height < 8) throw DataError("synthetic spec: image too small");
    if (!(temp_range[0] < temp_range[1]))
        throw DataError("synthetic spec: t_min must be below t_max");
    for (const auto& p : primitives) {
        if (!bounds.contains(p.min_corner) || !bounds.contains(p.max_corner))
            throw DataError("synthetic spec: primitive outside grid bounds");
        if (p.temperature_c < temp_range[0] || p.temperature_c > temp_range[1])
            throw DataError("synthetic spec: primitive temperature outside temp_range");
    }
}

SyntheticSpec default_slab_spec() {
    SyntheticSpec spec;
    SyntheticPrimitive slab;
    slab.min_corner = {-0.55, -0.55, -0.12};
    slab.max_corner = {0.55, 0.55, 0.12};
    slab.density = 40.0;
    slab.color = {0.80, 0.30, 0.20};
    slab.temperature_c = 35.0;
    spec.primitives.push_back(slab);
    return spec;
}

SyntheticSpec synthetic_spec_from_json(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw DataError(std::string("malformed synthetic spec: ") + e.what());
    }
    SyntheticSpec spec;
    if (j.contains("grid_dims"))
        for (int a = 0; a < 3; ++a) spec.grid_dims[a] = j["grid_dims"][a].get<int>();
    if (j.contains("bounds")) {
        spec.bounds.min_corner = vec3_from(j["bounds"]["min"]);
        spec.bounds.max_corner = vec3_from(j["bounds"]["max"]);
    }
    if (j.contains("temp_range")) {
        spec.temp_range[0] = j["temp_range"][0].get<double>();
        spec.temp_range[1] = j["temp_range"][1].get<double>();
    }
    if (j.contains("primitives")) {
        for (const json& p : j["primitives"]) {
            SyntheticPrimitive prim;
            prim.min_corner = vec3_from(p.at("min"));
            prim.max_corner = vec3_from(p.at("max"));
            if (p.contains("density")) prim.density = p["density"].get<double>();
            if (p.contains("color")) prim.color = vec3_from(p["color"]);
            if (p.contains("temperature_c")) prim.temperature_c = p["temperature_c"].get<double>();
            spec.primitives.push_back(prim);
        }
    }
    if (j.contains("n_views")) spec.n_views = j["n_views"].get<int>();
    if (j.contains("test_every")) spec.test_every = j["test_every"].get<int>();
    if (j.contains("image_width")) spec.image_width = j["image_width"].get<int>();
    if (j.contains("image_height")) spec.image_height = j["image_height"].get<int>();
    if (j.contains("focal_px")) spec.focal_px = j["focal_px"].get<double>();
    if (j.contains("orbit_radius")) spec.orbit_radius = j["orbit_radius"].get<double>();
    if (j.contains("orbit_elevation")) spec.orbit_elevation = j["orbit_elevation"].get<double>();
    if (j.contains("background_color")) spec.background_color = vec3_from(j["background_color"]);
    if (j.contains("noise_level")) spec.noise_level = j["noise_level"].get<double>();
    if (j.contains("seed")) spec.seed = j["seed"].get<std::uint64_t>();
    spec.validate();
    return spec;
}

std::string synthetic_spec_to_json(const SyntheticSpec& spec) {
    json j;
    j["grid_dims"] = spec.grid_dims;
    j["bounds"] = {{"min", vec3_to(spec.bounds.min_corner)},
                   {"max", vec3_to(spec.bounds.max_corner)}};
    j["temp_range"] = spec.temp_range;
    j["primitives"] = json::array();
    for (const auto& p : spec.primitives)
        j["primitives"].push_back({{"min", vec3_to(p.min_corner)},
                                   {"max", vec3_to(p.max_corner)},
                                   {"density", p.density},
                                   {"color", vec3_to(p.color)},
                                   {"temperature_c", p.temperature_c}});
    j["n_views"] = spec.n_views;
    j["test_every"] = spec.test_every;
    j["image_width"] = spec.image_width;
    j["image_height"] = spec.image_height;
    j["focal_px"] = spec.focal_px;
    j["orbit_radius"] = spec.orbit_radius;
    j["orbit_elevation"] = spec.orbit_elevation;
    j["background_color"] = vec3_to(spec.background_color);
    j["noise_level"] = spec.noise_level;
    j["seed"] = spec.seed;
    return j.dump(2);
}

CameraPose orbit_pose(const SyntheticSpec& spec, int k) {
    const Vec3 center = (spec.bounds.min_corner + spec.bounds.max_corner) * 0.5;
    const double phi = 2.0 * 3.14159265358979323846 * k / spec.n_views;
    const double ce = std::cos(spec.orbit_elevation);
    const double se = std::sin(spec.orbit_elevation);
    Vec3 eye = center + Vec3(std::cos(phi) * ce, std::sin(phi) * ce, se) * spec.orbit_radius;

    Vec3 forward = (center - eye).normalized();
    Vec3 up{0.0, 0.0, 1.0};
    Vec3 right = forward.cross(up).normalized();
    Vec3 down = forward.cross(right);

    CameraPose pose;
    for (int r = 0; r < 3; ++r) {
        const double cols[3] = {r == 0 ? right.x : (r == 1 ? right.y : right.z),
                                r == 0 ? down.x : (r == 1 ? down.y : down.z),
                                r == 0 ? forward.x : (r == 1 ? forward.y : forward.z)};
        pose.rotation(r, 0) = cols[0];
        pose.rotation(r, 1) = cols[1];
        pose.rotation(r, 2) = cols[2];
    }
    pose.translation = eye;
    pose.validate();
    return pose;
}

SyntheticScene build_synthetic_truth(const SyntheticSpec& spec) {
    spec.validate();
    SyntheticScene out{Scene{}, VoxelGrid(spec.grid_dims, spec.bounds, spec.temp_range),
                       SphericalBackground()};
    VoxelGrid& grid = out.truth_grid;

    const double y00 = eval_sh_basis({0.0, 0.0, 1.0})[0];
    for (int k = 0; k <= spec.grid_dims[2]; ++k)
        for (int j = 0; j <= spec.grid_dims[1]; ++j)
            for (int i = 0; i <= spec.grid_dims[0]; ++i) {
                Vec3 p = grid.corner_position(i, j, k);
                for (const auto& prim : spec.primitives) {
                    if (p.x < prim.min_corner.x || p.x > prim.max_corner.x ||
                        p.y < prim.min_corner.y || p.y > prim.max_corner.y ||
                        p.z < prim.min_corner.z || p.z > prim.max_corner.z)
                        continue;
                    std::size_t c = grid.corner_index(i, j, k);
                    grid.density()[c] = prim.density;
                    double* sh = grid.sh_coeffs().data() + c * VoxelGrid::kShPerCorner;
                    sh[0] = prim.color.x / y00;
                    sh[kShBasisDim] = prim.color.y / y00;
                    sh[2 * kShBasisDim] = prim.color.z / y00;
                    grid.temperature()[c] = grid.normalize_temperature(prim.temperature_c);
                }
            }

    out.truth_background.fill(spec.background_color);

    Scene& scene = out.scene;
    scene.intrinsics.fx = scene.intrinsics.fy = spec.focal_px;
    scene.intrinsics.cx = spec.image_width / 2.0;
    scene.intrinsics.cy = spec.image_height / 2.0;
    scene.intrinsics.width = spec.image_width;
    scene.intrinsics.height = spec.image_height;
    scene.temp_range = spec.temp_range;
    scene.bounds = spec.bounds;
    return out;
}

SyntheticScene generate_synthetic(const SyntheticSpec& spec, const std::string& out_dir) {
    SyntheticScene built = build_synthetic_truth(spec);
    Scene& scene = built.scene;

    const fs::path root(out_dir);
    fs::create_directories(root / "rgb");
    fs::create_directories(root / "thermal");

    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> noise(0.0, spec.noise_level);
    const double step = default_step(built.truth_grid);

    json frames = json::array();
    json train_names = json::array();
    json test_names = json::array();

    for (int k = 0; k < spec.n_views; ++k) {
        SceneFrame frame;
        frame.name = frame_id(k);
        frame.rgb_path = "rgb/" + frame.name + ".png";
        frame.thermal_path = "thermal/" + frame.name + ".png";
        frame.pose = orbit_pose(spec, k);

        ImageF rgb = render_image(built.truth_grid, &built.truth_background, scene.intrinsics,
                                  frame.pose, RenderChannel::Rgb, step);
        ImageF thermal = render_image(built.truth_grid, nullptr, scene.intrinsics, frame.pose,
                                      RenderChannel::Thermal, step);
        if (spec.noise_level > 0.0) {
            for (double& v : rgb.data) v = clamp01(v + noise(rng));
            for (double& v : thermal.data) v = clamp01(v + noise(rng));
        }
        save_png_rgb8((root / frame.rgb_path).string(), rgb);
        save_png_gray16((root / frame.thermal_path).string(), thermal);

        // Keep the in-memory scene identical to what a reload would see.
        frame.rgb = load_png((root / frame.rgb_path).string());
        frame.thermal = load_png((root / frame.thermal_path).string());

        frames.push_back({{"name", frame.name},
                          {"rgb", frame.rgb_path},
                          {"thermal", frame.thermal_path},
                          {"transform", transform_from_pose(frame.pose)}});
        const bool is_test = spec.test_every > 0 && (k % spec.test_every) == spec.test_every - 1;
        if (is_test) {
            scene.test_split.push_back(k);
            test_names.push_back(frame.name);
        } else {
            scene.train_split.push_back(k);
            train_names.push_back(frame.name);
        }
        scene.frames.push_back(std::move(frame));
    }

    json poses;
    poses["intrinsics"] = {{"fx", scene.intrinsics.fx}, {"fy", scene.intrinsics.fy},
                           {"cx", scene.intrinsics.cx}, {"cy", scene.intrinsics.cy},
                           {"width", scene.intrinsics.width}, {"height", scene.intrinsics.height}};
    poses["frames"] = frames;
    std::ofstream(root / "poses.json") << poses.dump(2) << "\n";

    json meta;
    meta["t_min"] = spec.temp_range[0];
    meta["t_max"] = spec.temp_range[1];
    meta["bounds"] = {{"min", vec3_to(spec.bounds.min_corner)},
                      {"max", vec3_to(spec.bounds.max_corner)}};
    meta["train"] = train_names;
    meta["test"] = test_names;
    std::ofstream(root / "meta.json") << meta.dump(2) << "\n";

    std::ofstream(root / "spec.json") << synthetic_spec_to_json(spec) << "\n";

    save_checkpoint((root / "truth_grid.vxgrid").string(), built.truth_grid,
                    &built.truth_background, "{\"source\":\"synthetic\"}");

    auto samples = sample_cell_centers(built.truth_grid);
    auto kept = filter_densest(samples, 100.0);
    auto component = largest_connected_component(kept, built.truth_grid.dims());
    VolumetricMesh mesh = build_mesh(component, built.truth_grid);
    write_vtk((root / "truth_mesh.vtk").string(), mesh);

    return built;
}

}  // namespace voxtherm
