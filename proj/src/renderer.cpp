// SPDX-License-Identifier: Apache-2.0
#include "voxtherm/renderer.hpp"

#include <cmath>

#include "voxtherm/errors.hpp"

namespace voxtherm {

RaySampleSet sample_ray(const VoxelGrid& grid, const Ray& ray, double step) {
    if (!(step > 0.0)) throw DataError("sample_ray: step must be positive");
    RaySampleSet set;
    auto hit = intersect_bounds(ray, grid.bounds());
    if (!hit) return set;
    auto [t_near, t_far] = *hit;
    double span = t_far - t_near;
    int n = static_cast<int>(std::floor(span / step));
    if (n == 0) {
        set.positions.push_back(ray.origin + ray.direction * (0.5 * (t_near + t_far)));
        set.deltas.push_back(step);
        return set;
    }
    set.positions.reserve(n);
    set.deltas.assign(n, step);
    for (int k = 0; k < n; ++k)
        set.positions.push_back(ray.origin + ray.direction * (t_near + (k + 0.5) * step));
    return set;
}

Vec3 composite_color(std::span<const double> sigmas, std::span<const Vec3> colors,
                     std::span<const double> deltas, const Vec3& background,
                     double* residual_transmittance) {
    Vec3 out;
    double trans = 1.0;
    for (std::size_t i = 0; i < sigmas.size(); ++i) {
        double att = std::exp(-sigmas[i] * deltas[i]);
        out += colors[i] * (trans * (1.0 - att));
        trans *= att;
    }
    out += background * trans;
    if (residual_transmittance) *residual_transmittance = trans;
    return out;
}

double composite_temperature(std::span<const double> sigmas, std::span<const double> temps,
                             std::span<const double> deltas, double background_temperature,
                             double* residual_transmittance) {
    double out = 0.0;
    double trans = 1.0;
    for (std::size_t i = 0; i < sigmas.size(); ++i) {
        double att = std::exp(-sigmas[i] * deltas[i]);
        out += temps[i] * (trans * (1.0 - att));
        trans *= att;
    }
    out += background_temperature * trans;
    if (residual_transmittance) *residual_transmittance = trans;
    return out;
}

void RayTrace::clear() {
    positions.clear();
    sigma.clear();
    attenuation.clear();
    transmittance.clear();
    temp.clear();
    color.clear();
    skipped.clear();
    count = 0;
    rgb = rgb_unclamped = background_color = Vec3();
    temperature = 0.0;
    residual = 1.0;
}

void trace_ray(const VoxelGrid& grid, const SphericalBackground* background, const Ray& ray,
               double step, TraceMode mode, RayTrace& out) {
    out.clear();
    out.direction = ray.direction;
    out.delta = step;

    const bool want_rgb = mode != TraceMode::Thermal;
    const bool want_thermal = mode != TraceMode::Rgb;
    if (want_rgb) out.sh_basis = eval_sh_basis(ray.direction);

    auto hit = intersect_bounds(ray, grid.bounds());
    int n = 0;
    double t_near = 0.0, t_far = 0.0;
    bool midpoint_only = false;
    if (hit) {
        t_near = hit->first;
        t_far = hit->second;
        n = static_cast<int>(std::floor((t_far - t_near) / step));
        if (n == 0) {
            n = 1;
            midpoint_only = true;
        }
    }

    out.count = n;
    out.positions.resize(n);
    out.sigma.assign(n, 0.0);
    out.attenuation.assign(n, 1.0);
    out.transmittance.assign(n, 1.0);
    out.temp.assign(n, 0.0);
    out.color.assign(n, Vec3());
    out.skipped.assign(n, 0);

    const auto& density = grid.density();
    const auto& temps = grid.temperature();
    const auto& sh = grid.sh_coeffs();

    double trans = 1.0;
    Vec3 rgb_accum;
    double temp_accum = 0.0;
    for (int i = 0; i < n; ++i) {
        double t = midpoint_only ? 0.5 * (t_near + t_far) : t_near + (i + 0.5) * step;
        Vec3 p = ray.origin + ray.direction * t;
        out.positions[i] = p;
        out.transmittance[i] = trans;

        TrilinearStencil s = grid.stencil_at(p);
        double sig = 0.0;
        bool all_zero = true;
        for (int c = 0; c < 8; ++c) {
            double d = density[s.corner[c]];
            sig += s.weight[c] * d;
            all_zero &= (d == 0.0);
        }
        if (all_zero) {
            out.skipped[i] = 1;
            continue;
        }

        double att = std::exp(-sig * step);
        double weight = trans * (1.0 - att);
        out.sigma[i] = sig;
        out.attenuation[i] = att;

        if (want_thermal) {
            double tv = 0.0;
            for (int c = 0; c < 8; ++c) tv += s.weight[c] * temps[s.corner[c]];
            out.temp[i] = tv;
            temp_accum += weight * tv;
        }
        if (want_rgb) {
            double acc[VoxelGrid::kShPerCorner] = {};
            for (int c = 0; c < 8; ++c) {
                const double w = s.weight[c];
                const double* src = sh.data() + s.corner[c] * VoxelGrid::kShPerCorner;
                for (int k = 0; k < VoxelGrid::kShPerCorner; ++k) acc[k] += w * src[k];
            }
            Vec3 col = eval_sh_color(acc, out.sh_basis);
            out.color[i] = col;
            rgb_accum += col * weight;
        }
        trans *= att;
    }

    out.residual = trans;
    if (want_rgb) {
        out.background_color = background ? background->sample(ray.direction) : Vec3();
        rgb_accum += out.background_color * trans;
        out.rgb_unclamped = rgb_accum;
        out.rgb = {clamp01(rgb_accum.x), clamp01(rgb_accum.y), clamp01(rgb_accum.z)};
    }
    if (want_thermal) out.temperature = temp_accum;  // thermal background is 0 normalized
}

void backprop_ray(const VoxelGrid& grid, const SphericalBackground* background,
                  const RayTrace& trace, const RayUpstream& upstream, GridGradients& grads,
                  std::vector<double>* bg_gradient) {
    // Clamp passes gradients only where the unclamped composite is in [0,1].
    Vec3 g_rgb{
        (trace.rgb_unclamped.x >= 0.0 && trace.rgb_unclamped.x <= 1.0) ? upstream.d_rgb.x : 0.0,
        (trace.rgb_unclamped.y >= 0.0 && trace.rgb_unclamped.y <= 1.0) ? upstream.d_rgb.y : 0.0,
        (trace.rgb_unclamped.z >= 0.0 && trace.rgb_unclamped.z <= 1.0) ? upstream.d_rgb.z : 0.0};
    const double g_temp = upstream.d_temperature;
    const bool want_rgb = g_rgb.x != 0.0 || g_rgb.y != 0.0 || g_rgb.z != 0.0;
    const bool want_thermal = g_temp != 0.0;
    if (!want_rgb && !want_thermal) return;

    if (want_rgb && background && bg_gradient)
        background->scatter_gradient(trace.direction, g_rgb * trace.residual, *bg_gradient);

    // Suffix sums over later samples plus background, maintained in reverse.
    Vec3 suffix_rgb = trace.background_color * trace.residual;
    double suffix_temp = 0.0;  // thermal background is 0
    const double delta = trace.delta;

    for (int i = trace.count - 1; i >= 0; --i) {
        if (trace.skipped[i]) continue;
        const double alpha = trace.transmittance[i];
        const double att = trace.attenuation[i];
        const double weight = alpha * (1.0 - att);

        TrilinearStencil s = grid.stencil_at(trace.positions[i]);

        double d_sigma = 0.0;
        if (want_rgb) {
            d_sigma += delta * (alpha * att * g_rgb.dot(trace.color[i]) - g_rgb.dot(suffix_rgb));
            double up27[VoxelGrid::kShPerCorner];
            const double gch[3] = {g_rgb.x * weight, g_rgb.y * weight, g_rgb.z * weight};
            for (int ch = 0; ch < 3; ++ch)
                for (int k = 0; k < kShBasisDim; ++k)
                    up27[ch * kShBasisDim + k] = gch[ch] * trace.sh_basis[k];
            grid.scatter_sh(s, up27, grads.sh);
            suffix_rgb += trace.color[i] * weight;
        }
        if (want_thermal) {
            d_sigma += g_temp * delta * (alpha * att * trace.temp[i] - suffix_temp);
            grid.scatter_scalar(s, g_temp * weight, grads.temperature);
            suffix_temp += trace.temp[i] * weight;
        }
        grid.scatter_scalar(s, d_sigma, grads.density);
    }
}

double default_step(const VoxelGrid& grid, double scale) {
    Vec3 e = grid.voxel_edge();
    return scale * std::min({e.x, e.y, e.z});
}

ImageF render_image(const VoxelGrid& grid, const SphericalBackground* background,
                    const CameraIntrinsics& intr, const CameraPose& pose, RenderChannel channel,
                    double step) {
    intr.validate();
    pose.validate();
    const int channels = channel == RenderChannel::Rgb ? 3 : 1;
    ImageF img(intr.width, intr.height, channels);
    const TraceMode mode = channel == RenderChannel::Rgb ? TraceMode::Rgb : TraceMode::Thermal;

#pragma omp parallel
    {
        RayTrace trace;
#pragma omp for schedule(static)
        for (int v = 0; v < intr.height; ++v) {
            for (int u = 0; u < intr.width; ++u) {
                trace_ray(grid, background, generate_ray(intr, pose, u, v), step, mode, trace);
                if (channel == RenderChannel::Rgb) {
                    img.at(u, v, 0) = trace.rgb.x;
                    img.at(u, v, 1) = trace.rgb.y;
                    img.at(u, v, 2) = trace.rgb.z;
                } else {
                    img.at(u, v, 0) = trace.temperature;
                }
            }
        }
    }
    return img;
}

}  // namespace voxtherm
