// SPDX-License-Identifier: Apache-2.0
//
// voxtherm: reconstruct a joint geometry+temperature voxel field from paired
// RGB/thermal images, extract a simulation-ready mesh, and run heat
// conduction on it.
//
// Exit codes: 0 success, 2 usage error, 3 data error, 4 numerical failure.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "voxtherm/checkpoint.hpp"
#include "voxtherm/errors.hpp"
#include "voxtherm/fem.hpp"
#include "voxtherm/mesh.hpp"
#include "voxtherm/metrics.hpp"
#include "voxtherm/renderer.hpp"
#include "voxtherm/scene.hpp"
#include "voxtherm/threading.hpp"
#include "voxtherm/train.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace voxtherm;

namespace {

std::string fnv1a_hex(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

// Tracks every write of one command run. On success the manifest lists all
// artifacts; on failure the partial outputs are removed.
class RunContext {
  public:
    RunContext(std::string command, std::string manifest_path)
        : command_(std::move(command)),
          manifest_path_(std::move(manifest_path)),
          start_(std::chrono::steady_clock::now()) {}

    void set_params(json params) { params_ = std::move(params); }
    void set_seed(std::uint64_t seed) { seed_ = seed; }
    void note_input(const std::string& path) { inputs_.push_back(path); }
    void note_output(const std::string& path) { outputs_.push_back(path); }

    void write_manifest() {
        const auto elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                                           start_)
                                 .count();
        json m;
        m["command"] = command_;
        m["config_hash"] = fnv1a_hex(params_.dump());
        m["seed"] = seed_;
        m["inputs"] = inputs_;
        m["outputs"] = outputs_;
        m["manifest"] = manifest_path_;
        m["wall_time_seconds"] = elapsed;
        fs::create_directories(fs::path(manifest_path_).parent_path());
        std::ofstream out(manifest_path_);
        out << m.dump(2) << "\n";
        if (!out) throw DataError("cannot write manifest: " + manifest_path_);
    }

    void remove_partial_outputs() {
        std::error_code ec;
        for (const std::string& p : outputs_) fs::remove(p, ec);
    }

  private:
    std::string command_;
    std::string manifest_path_;
    json params_;
    std::uint64_t seed_ = 0;
    std::vector<std::string> inputs_;
    std::vector<std::string> outputs_;
    std::chrono::steady_clock::time_point start_;
};

std::string read_text_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct GenArgs {
    std::string out_dir;
    std::string spec_file;
    int grid_dim = 0;
    int views = 0;
    int image_size = 0;
    double noise = -1.0;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int threads = 0;
};

int run_gen_synthetic(const GenArgs& a) {
    set_thread_count(a.threads);
    SyntheticSpec spec = a.spec_file.empty() ? default_slab_spec()
                                             : synthetic_spec_from_json(read_text_file(a.spec_file));
    if (a.grid_dim > 0) spec.grid_dims = {a.grid_dim, a.grid_dim, a.grid_dim};
    if (a.views > 0) spec.n_views = a.views;
    if (a.image_size > 0) spec.image_width = spec.image_height = a.image_size;
    if (a.noise >= 0.0) spec.noise_level = a.noise;
    if (a.seed_set) spec.seed = a.seed;
    spec.validate();

    RunContext ctx("gen-synthetic", (fs::path(a.out_dir) / "manifest.json").string());
    ctx.set_params(json::parse(synthetic_spec_to_json(spec)));
    ctx.set_seed(spec.seed);
    if (!a.spec_file.empty()) ctx.note_input(a.spec_file);
    try {
        SyntheticScene built = generate_synthetic(spec, a.out_dir);
        for (const SceneFrame& f : built.scene.frames) {
            ctx.note_output((fs::path(a.out_dir) / f.rgb_path).string());
            ctx.note_output((fs::path(a.out_dir) / f.thermal_path).string());
        }
        for (const char* name : {"poses.json", "meta.json", "spec.json", "truth_grid.vxgrid",
                                 "truth_mesh.vtk"})
            ctx.note_output((fs::path(a.out_dir) / name).string());
        ctx.write_manifest();
        std::cout << "wrote synthetic scene with " << built.scene.frames.size() << " views to "
                  << a.out_dir << "\n";
        return 0;
    } catch (...) {
        ctx.remove_partial_outputs();
        throw;
    }
}

struct TrainArgs {
    std::string scene_dir;
    std::string out_dir;
    TrainConfig config;
    int grid_dim = 0;
    int log_every = 100;
};

int run_train(const TrainArgs& a0) {
    TrainArgs a = a0;
    if (a.grid_dim > 0) a.config.grid_dims = {a.grid_dim, a.grid_dim, a.grid_dim};
    a.config.validate();
    set_thread_count(a.config.threads);

    RunContext ctx("train", (fs::path(a.out_dir) / "manifest.json").string());
    ctx.set_params(json::parse(train_config_to_json(a.config)));
    ctx.set_seed(a.config.seed);
    ctx.note_input(a.scene_dir);

    const std::string checkpoint_path = (fs::path(a.out_dir) / "checkpoint.vxgrid").string();
    const std::string loss_path = (fs::path(a.out_dir) / "loss.csv").string();
    try {
        Scene scene = load_scene(a.scene_dir);
        fs::create_directories(a.out_dir);

        auto progress = [&](const LossRecord& r) {
            if (a.log_every > 0 && (r.iteration % a.log_every == 0))
                std::cout << "iter " << r.iteration << " total " << r.losses.total << " l2_rgb "
                          << r.losses.l2_rgb << " l2_T " << r.losses.l2_thermal << "\n";
        };
        TrainResult result = train(scene, a.config, progress);

        json meta;
        meta["config"] = json::parse(train_config_to_json(a.config));
        meta["seed"] = a.config.seed;
        meta["scene"] = a.scene_dir;
        meta["final_loss"] = result.history.empty() ? 0.0 : result.history.back().losses.total;
        ctx.note_output(checkpoint_path);
        ctx.note_output(loss_path);
        save_checkpoint(checkpoint_path, result.grid, &result.background, meta.dump());
        write_loss_csv(loss_path, result.history);
        ctx.write_manifest();
        std::cout << "checkpoint: " << checkpoint_path << "\n";
        return 0;
    } catch (...) {
        ctx.remove_partial_outputs();
        throw;
    }
}

struct RenderArgs {
    std::string checkpoint;
    std::string scene_dir;
    std::string out_dir;
    std::string split = "test";
    std::string channel = "both";
    double step_scale = 0.5;
    int threads = 0;
};

std::vector<int> split_indices(const Scene& scene, const std::string& split) {
    if (split == "train") return scene.train_split;
    if (split == "test") return scene.test_split;
    if (split == "all") {
        std::vector<int> all(scene.frames.size());
        for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
        return all;
    }
    throw DataError("unknown split '" + split + "' (expected train|test|all)");
}

int run_render(const RenderArgs& a) {
    set_thread_count(a.threads);
    RunContext ctx("render", (fs::path(a.out_dir) / "manifest.json").string());
    ctx.set_params({{"checkpoint", a.checkpoint},
                    {"scene", a.scene_dir},
                    {"split", a.split},
                    {"channel", a.channel},
                    {"step_scale", a.step_scale}});
    ctx.note_input(a.checkpoint);
    ctx.note_input(a.scene_dir);
    try {
        Checkpoint ck = load_checkpoint(a.checkpoint);
        Scene scene = load_scene(a.scene_dir);
        const double step = default_step(ck.grid, a.step_scale);
        const bool do_rgb = a.channel == "rgb" || a.channel == "both";
        const bool do_thermal = a.channel == "thermal" || a.channel == "both";
        if (!do_rgb && !do_thermal)
            throw DataError("unknown channel '" + a.channel + "' (expected rgb|thermal|both)");

        if (do_rgb) fs::create_directories(fs::path(a.out_dir) / "rgb");
        if (do_thermal) {
            fs::create_directories(fs::path(a.out_dir) / "thermal");
            fs::create_directories(fs::path(a.out_dir) / "thermal_c");
        }

        for (int idx : split_indices(scene, a.split)) {
            const SceneFrame& frame = scene.frames[idx];
            if (do_rgb) {
                ImageF rgb = render_image(ck.grid, ck.has_background ? &ck.background : nullptr,
                                          scene.intrinsics, frame.pose, RenderChannel::Rgb, step);
                std::string p = (fs::path(a.out_dir) / "rgb" / (frame.name + ".png")).string();
                save_png_rgb8(p, rgb);
                ctx.note_output(p);
            }
            if (do_thermal) {
                ImageF th = render_image(ck.grid, nullptr, scene.intrinsics, frame.pose,
                                         RenderChannel::Thermal, step);
                std::string p16 =
                    (fs::path(a.out_dir) / "thermal" / (frame.name + ".png")).string();
                save_png_gray16(p16, th);
                ctx.note_output(p16);
                ImageF celsius = th;
                for (double& v : celsius.data) v = ck.grid.denormalize_temperature(v);
                std::string ptxt =
                    (fs::path(a.out_dir) / "thermal_c" / (frame.name + ".txt")).string();
                save_float_grid(ptxt, celsius);
                ctx.note_output(ptxt);
            }
        }
        ctx.write_manifest();
        return 0;
    } catch (...) {
        ctx.remove_partial_outputs();
        throw;
    }
}

struct ExtractArgs {
    std::string checkpoint;
    std::string out_file;
    double t_percent = 40.0;
    bool tets = false;
    int threads = 0;
};

int run_extract_mesh(const ExtractArgs& a) {
    set_thread_count(a.threads);
    RunContext ctx("extract-mesh",
                   (fs::path(a.out_file).parent_path() / "manifest.json").string());
    ctx.set_params({{"checkpoint", a.checkpoint},
                    {"out", a.out_file},
                    {"t_percent", a.t_percent},
                    {"tets", a.tets}});
    ctx.note_input(a.checkpoint);
    try {
        Checkpoint ck = load_checkpoint(a.checkpoint);
        auto samples = sample_cell_centers(ck.grid);
        auto kept = filter_densest(samples, a.t_percent);
        auto component = largest_connected_component(kept, ck.grid.dims());
        VolumetricMesh mesh = build_mesh(component, ck.grid);
        if (a.tets) mesh = hex_to_tet(mesh);
        if (!fs::path(a.out_file).parent_path().empty())
            fs::create_directories(fs::path(a.out_file).parent_path());
        ctx.note_output(a.out_file);
        write_vtk(a.out_file, mesh);
        ctx.write_manifest();
        std::cout << "mesh: " << mesh.cell_count() << " cells, " << mesh.nodes.size()
                  << " nodes -> " << a.out_file << "\n";
        return 0;
    } catch (...) {
        ctx.remove_partial_outputs();
        throw;
    }
}

struct SimulateArgs {
    std::string mesh_file;
    std::string out_dir;
    int steps = 10;
    double dt = 0.0;
    MaterialParams material;
    bool write_steps = true;
    int threads = 0;
};

int run_simulate(const SimulateArgs& a) {
    set_thread_count(a.threads);
    RunContext ctx("simulate", (fs::path(a.out_dir) / "manifest.json").string());
    ctx.set_params({{"mesh", a.mesh_file},
                    {"steps", a.steps},
                    {"dt", a.dt},
                    {"conductivity", a.material.conductivity},
                    {"density", a.material.density},
                    {"specific_heat", a.material.specific_heat},
                    {"write_steps", a.write_steps}});
    ctx.note_input(a.mesh_file);
    try {
        VolumetricMesh mesh = read_vtk(a.mesh_file);
        fs::create_directories(a.out_dir);
        SimulationResult result = simulate(mesh, a.material, a.steps, a.dt);

        const std::string summary_path = (fs::path(a.out_dir) / "summary.csv").string();
        ctx.note_output(summary_path);
        std::ofstream csv(summary_path);
        csv << "step,time,t_min,t_max,t_mean,energy\n";
        char buf[256];
        for (const StepSummary& s : result.summary) {
            std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g,%.17g,%.17g,%.17g\n", s.step, s.time,
                          s.t_min, s.t_max, s.t_mean, s.energy);
            csv << buf;
        }
        if (!csv) throw DataError("write failed: " + summary_path);

        if (a.write_steps) {
            for (std::size_t s = 0; s < result.history.size(); ++s) {
                char name[32];
                std::snprintf(name, sizeof(name), "step_%04zu.vtk", s);
                std::string p = (fs::path(a.out_dir) / name).string();
                ctx.note_output(p);
                write_vtk_point_data(p, mesh, result.history[s].nodal_temperature);
            }
        }
        for (std::size_t s = 1; s < result.summary.size(); ++s)
            std::cout << "step " << s << " max nodal change "
                      << result.summary[s].max_change << "\n";
        ctx.write_manifest();
        return 0;
    } catch (...) {
        ctx.remove_partial_outputs();
        throw;
    }
}

struct EvaluateArgs {
    std::string scene_dir;
    std::string checkpoint;
    std::string renders_dir;
    std::string out_dir;
    std::string split = "test";
    double step_scale = 0.5;
    int threads = 0;
};

int run_evaluate(const EvaluateArgs& a) {
    set_thread_count(a.threads);
    RunContext ctx("evaluate", (fs::path(a.out_dir) / "manifest.json").string());
    ctx.set_params({{"scene", a.scene_dir},
                    {"checkpoint", a.checkpoint},
                    {"renders", a.renders_dir},
                    {"split", a.split},
                    {"step_scale", a.step_scale}});
    ctx.note_input(a.scene_dir);
    if (a.checkpoint.empty() == a.renders_dir.empty())
        throw DataError("evaluate needs exactly one of --checkpoint or --renders");
    try {
        Scene scene = load_scene(a.scene_dir);
        Checkpoint ck;
        if (!a.checkpoint.empty()) {
            ctx.note_input(a.checkpoint);
            ck = load_checkpoint(a.checkpoint);
        }
        fs::create_directories(a.out_dir);

        const double trange = scene.temp_range[1] - scene.temp_range[0];
        struct Row {
            std::string name;
            double psnr_rgb, ssim_rgb, psnr_thermal, ssim_thermal, mae_c;
        };
        std::vector<Row> rows;
        for (int idx : split_indices(scene, a.split)) {
            const SceneFrame& frame = scene.frames[idx];
            ImageF rgb, thermal;
            if (!a.checkpoint.empty()) {
                const double step = default_step(ck.grid, a.step_scale);
                rgb = render_image(ck.grid, ck.has_background ? &ck.background : nullptr,
                                   scene.intrinsics, frame.pose, RenderChannel::Rgb, step);
                thermal = render_image(ck.grid, nullptr, scene.intrinsics, frame.pose,
                                       RenderChannel::Thermal, step);
            } else {
                std::string rp = (fs::path(a.renders_dir) / "rgb" / (frame.name + ".png")).string();
                std::string tp =
                    (fs::path(a.renders_dir) / "thermal" / (frame.name + ".png")).string();
                if (!fs::exists(rp)) throw DataError("missing rendered rgb for " + frame.name);
                if (!fs::exists(tp)) throw DataError("missing rendered thermal for " + frame.name);
                rgb = load_png(rp);
                thermal = load_png(tp);
            }
            Row r;
            r.name = frame.name;
            r.psnr_rgb = psnr(rgb, frame.rgb);
            r.ssim_rgb = ssim(rgb, frame.rgb);
            r.psnr_thermal = psnr(thermal, frame.thermal);
            r.ssim_thermal = ssim(thermal, frame.thermal);
            r.mae_c = mae(thermal, frame.thermal, trange);
            rows.push_back(r);
        }
        if (rows.empty()) throw DataError("split '" + a.split + "' has no frames");

        Row mean{"mean", 0, 0, 0, 0, 0};
        for (const Row& r : rows) {
            mean.psnr_rgb += r.psnr_rgb;
            mean.ssim_rgb += r.ssim_rgb;
            mean.psnr_thermal += r.psnr_thermal;
            mean.ssim_thermal += r.ssim_thermal;
            mean.mae_c += r.mae_c;
        }
        const double n = static_cast<double>(rows.size());
        mean.psnr_rgb /= n;
        mean.ssim_rgb /= n;
        mean.psnr_thermal /= n;
        mean.ssim_thermal /= n;
        mean.mae_c /= n;
        rows.push_back(mean);

        const std::string metrics_path = (fs::path(a.out_dir) / "metrics.csv").string();
        ctx.note_output(metrics_path);
        std::ofstream csv(metrics_path);
        csv << "frame,psnr_rgb,ssim_rgb,psnr_thermal,ssim_thermal,mae_c\n";
        char buf[256];
        std::printf("%-8s %9s %9s %9s %9s %9s\n", "frame", "psnr_rgb", "ssim_rgb", "psnr_th",
                    "ssim_th", "mae_C");
        for (const Row& r : rows) {
            std::snprintf(buf, sizeof(buf), "%s,%.17g,%.17g,%.17g,%.17g,%.17g\n", r.name.c_str(),
                          r.psnr_rgb, r.ssim_rgb, r.psnr_thermal, r.ssim_thermal, r.mae_c);
            csv << buf;
            std::printf("%-8s %9.3f %9.4f %9.3f %9.4f %9.4f\n", r.name.c_str(), r.psnr_rgb,
                        r.ssim_rgb, r.psnr_thermal, r.ssim_thermal, r.mae_c);
        }
        if (!csv) throw DataError("write failed: " + metrics_path);
        ctx.write_manifest();
        return 0;
    } catch (...) {
        ctx.remove_partial_outputs();
        throw;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"voxel-based RGB+thermal reconstruction, mesh extraction and heat simulation"};
    app.require_subcommand(1);

    GenArgs gen;
    auto* sub_gen = app.add_subcommand("gen-synthetic", "generate a synthetic RGB+thermal scene");
    sub_gen->add_option("--out", gen.out_dir, "output scene directory")->required();
    sub_gen->add_option("--spec", gen.spec_file, "synthetic spec JSON (default: slab preset)");
    sub_gen->add_option("--grid-dim", gen.grid_dim, "truth grid resolution override");
    sub_gen->add_option("--views", gen.views, "number of orbit views");
    sub_gen->add_option("--image-size", gen.image_size, "square image size override");
    sub_gen->add_option("--noise", gen.noise, "gaussian image noise sigma");
    sub_gen->add_option("--seed", gen.seed, "rng seed")->each([&](const std::string&) {
        gen.seed_set = true;
    });
    sub_gen->add_option("--threads", gen.threads, "worker cap (0 = hardware)");

    TrainArgs tr;
    auto* sub_train = app.add_subcommand("train", "optimize a voxel grid on a scene");
    sub_train->add_option("--scene", tr.scene_dir, "scene directory")->required();
    sub_train->add_option("--out", tr.out_dir, "output directory")->required();
    sub_train->set_config("--config", "", "flat key=value config file; flags win");
    sub_train->add_option("--grid_dim,--grid-dim", tr.grid_dim, "cubic grid resolution");
    sub_train->add_option("--iterations", tr.config.iterations, "optimization steps");
    sub_train->add_option("--rays_per_batch,--rays-per-batch", tr.config.rays_per_batch,
                          "rays per iteration");
    sub_train->add_option("--lr_density", tr.config.lr_density, "density learning rate");
    sub_train->add_option("--lr_sh", tr.config.lr_sh, "SH learning rate");
    sub_train->add_option("--lr_temperature", tr.config.lr_temperature,
                          "temperature learning rate");
    sub_train->add_option("--lr_background", tr.config.lr_background,
                          "background learning rate");
    sub_train->add_option("--rms_smoothing", tr.config.rms_smoothing,
                          "optimizer smoothing constant");
    sub_train->add_option("--density_clamp_min", tr.config.density_clamp_min,
                          "density clamp floor");
    sub_train->add_option("--density_init", tr.config.density_init, "initial density");
    sub_train->add_option("--sh_dc_init", tr.config.sh_dc_init, "initial SH DC coefficient");
    sub_train->add_option("--temperature_init", tr.config.temperature_init,
                          "initial normalized temperature");
    sub_train->add_option("--step_scale", tr.config.step_scale,
                          "march step as fraction of voxel edge");
    sub_train->add_option("--background_height", tr.config.background_height,
                          "background image height");
    sub_train->add_option("--background_width", tr.config.background_width,
                          "background image width");
    sub_train->add_option("--lambda", tr.config.weights.lambda, "thermal L2 vs L1 balance");
    sub_train->add_option("--tv_rgb_weight", tr.config.weights.tv_rgb, "SH TV weight");
    sub_train->add_option("--tv_thermal_weight", tr.config.weights.tv_thermal,
                          "thermal TV weight");
    sub_train->add_option("--seed", tr.config.seed, "rng seed");
    sub_train->add_option("--threads", tr.config.threads, "worker cap (0 = hardware)");
    sub_train->add_option("--log-every", tr.log_every, "progress print interval (0 = quiet)");

    RenderArgs rd;
    auto* sub_render = app.add_subcommand("render", "render images from a checkpoint");
    sub_render->add_option("--checkpoint", rd.checkpoint, "grid checkpoint")->required();
    sub_render->add_option("--scene", rd.scene_dir, "scene directory (poses)")->required();
    sub_render->add_option("--out", rd.out_dir, "output directory")->required();
    sub_render->add_option("--split", rd.split, "train|test|all (default test)");
    sub_render->add_option("--channel", rd.channel, "rgb|thermal|both (default both)");
    sub_render->add_option("--step-scale", rd.step_scale, "march step fraction");
    sub_render->add_option("--threads", rd.threads, "worker cap (0 = hardware)");

    ExtractArgs ex;
    auto* sub_extract = app.add_subcommand("extract-mesh", "extract a volumetric mesh");
    sub_extract->add_option("--checkpoint", ex.checkpoint, "grid checkpoint")->required();
    sub_extract->add_option("--out", ex.out_file, "output VTK file")->required();
    sub_extract->add_option("--t-percent", ex.t_percent, "keep the t% densest voxels");
    sub_extract->add_flag("--tets", ex.tets, "split hexahedra into tetrahedra");
    sub_extract->add_option("--threads", ex.threads, "worker cap (0 = hardware)");

    SimulateArgs sim;
    auto* sub_sim = app.add_subcommand("simulate", "run heat conduction on a mesh");
    sub_sim->add_option("--mesh", sim.mesh_file, "VTK mesh with cell temperature")->required();
    sub_sim->add_option("--out", sim.out_dir, "output directory")->required();
    sub_sim->add_option("--steps", sim.steps, "number of implicit Euler steps");
    sub_sim->add_option("--dt", sim.dt, "time step (0 = physically scaled default)");
    sub_sim->add_option("--conductivity", sim.material.conductivity, "thermal conductivity");
    sub_sim->add_option("--density", sim.material.density, "mass density");
    sub_sim->add_option("--specific-heat", sim.material.specific_heat, "specific heat");
    sub_sim->add_flag("--write-steps,!--no-write-steps", sim.write_steps,
                      "write per-step VTK files");
    sub_sim->add_option("--threads", sim.threads, "worker cap (0 = hardware)");

    EvaluateArgs ev;
    auto* sub_eval = app.add_subcommand("evaluate", "compute PSNR/SSIM/MAE against ground truth");
    sub_eval->add_option("--scene", ev.scene_dir, "scene directory")->required();
    sub_eval->add_option("--checkpoint", ev.checkpoint, "render from this checkpoint");
    sub_eval->add_option("--renders", ev.renders_dir, "use pre-rendered images from a directory");
    sub_eval->add_option("--out", ev.out_dir, "output directory")->required();
    sub_eval->add_option("--split", ev.split, "train|test|all (default test)");
    sub_eval->add_option("--step-scale", ev.step_scale, "march step fraction");
    sub_eval->add_option("--threads", ev.threads, "worker cap (0 = hardware)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (sub_gen->parsed()) return run_gen_synthetic(gen);
        if (sub_train->parsed()) return run_train(tr);
        if (sub_render->parsed()) return run_render(rd);
        if (sub_extract->parsed()) return run_extract_mesh(ex);
        if (sub_sim->parsed()) return run_simulate(sim);
        if (sub_eval->parsed()) return run_evaluate(ev);
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "failure: " << e.what() << "\n";
        return 4;
    }
    return 2;
}
