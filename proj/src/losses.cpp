// SPDX-License-Identifier: Apache-2.0
#include "voxtherm/losses.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "voxtherm/errors.hpp"
#include "voxtherm/renderer.hpp"
#include "voxtherm/threading.hpp"

namespace voxtherm {

double rgb_l2_loss(const ImageF& rendered, const ImageF& truth) {
    if (!rendered.same_shape(truth)) throw DataError("rgb_l2_loss: image shape mismatch");
    double sum = 0.0;
    for (std::size_t i = 0; i < rendered.data.size(); ++i) {
        double d = rendered.data[i] - truth.data[i];
        sum += d * d;
    }
    return sum / static_cast<double>(rendered.data.size());
}

double thermal_data_loss(const ImageF& rendered, const ImageF& truth, double lambda,
                         double* l2_out, double* l1_out) {
    if (!rendered.same_shape(truth)) throw DataError("thermal_data_loss: image shape mismatch");
    double l2 = 0.0, l1 = 0.0;
    for (std::size_t i = 0; i < rendered.data.size(); ++i) {
        double d = rendered.data[i] - truth.data[i];
        l2 += d * d;
        l1 += std::abs(d);
    }
    l2 /= static_cast<double>(rendered.data.size());
    l1 /= static_cast<double>(rendered.data.size());
    if (l2_out) *l2_out = l2;
    if (l1_out) *l1_out = l1;
    return lambda * l2 + (1.0 - lambda) * l1;
}

namespace {

// Shared TV kernel. Forward differences live on the corner lattice; the
// gradient is gathered per corner from its own stencil and the three stencils
// that reference it as a +axis neighbor, so threads never write the same slot.
struct TvContext {
    const double* field;
    double* gradient;  // may be null
    int nx, ny, nz;    // corner counts
    int comps;
    double grad_scale;
    std::vector<double> norms;  // per corner*comp, sqrt of squared diffs
};

double tv_run(TvContext& ctx) {
    const int nx = ctx.nx, ny = ctx.ny, nz = ctx.nz, comps = ctx.comps;
    const std::size_t corner_total = static_cast<std::size_t>(nx) * ny * nz;
    auto idx = [nx, ny](int i, int j, int k) {
        return static_cast<std::size_t>(i) +
               static_cast<std::size_t>(nx) * (static_cast<std::size_t>(j) +
                                               static_cast<std::size_t>(ny) * k);
    };

    ctx.norms.assign(corner_total * comps, 0.0);
    std::vector<double> slice_sums(nz, 0.0);

#pragma omp parallel for schedule(static)
    for (int k = 0; k < nz; ++k) {
        double acc = 0.0;
        for (int j = 0; j < ny; ++j)
            for (int i = 0; i < nx; ++i) {
                const std::size_t c = idx(i, j, k);
                const double* f = ctx.field + c * comps;
                const double* fx = i + 1 < nx ? ctx.field + idx(i + 1, j, k) * comps : nullptr;
                const double* fy = j + 1 < ny ? ctx.field + idx(i, j + 1, k) * comps : nullptr;
                const double* fz = k + 1 < nz ? ctx.field + idx(i, j, k + 1) * comps : nullptr;
                double* nrm = ctx.norms.data() + c * comps;
                for (int d = 0; d < comps; ++d) {
                    double dx = fx ? fx[d] - f[d] : 0.0;
                    double dy = fy ? fy[d] - f[d] : 0.0;
                    double dz = fz ? fz[d] - f[d] : 0.0;
                    double n = std::sqrt(dx * dx + dy * dy + dz * dz);
                    nrm[d] = n;
                    acc += n;
                }
            }
        slice_sums[k] = acc;
    }

    double value = 0.0;
    for (int k = 0; k < nz; ++k) value += slice_sums[k];
    value /= static_cast<double>(corner_total);

    if (ctx.gradient) {
        const double scale = ctx.grad_scale / static_cast<double>(corner_total);
#pragma omp parallel for schedule(static)
        for (int k = 0; k < nz; ++k) {
            for (int j = 0; j < ny; ++j)
                for (int i = 0; i < nx; ++i) {
                    const std::size_t c = idx(i, j, k);
                    const double* f = ctx.field + c * comps;
                    double* g = ctx.gradient + c * comps;
                    const double* fx = i + 1 < nx ? ctx.field + idx(i + 1, j, k) * comps : nullptr;
                    const double* fy = j + 1 < ny ? ctx.field + idx(i, j + 1, k) * comps : nullptr;
                    const double* fz = k + 1 < nz ? ctx.field + idx(i, j, k + 1) * comps : nullptr;
                    const std::size_t cmx = i > 0 ? idx(i - 1, j, k) : 0;
                    const std::size_t cmy = j > 0 ? idx(i, j - 1, k) : 0;
                    const std::size_t cmz = k > 0 ? idx(i, j, k - 1) : 0;
                    const double* nrm = ctx.norms.data() + c * comps;
                    for (int d = 0; d < comps; ++d) {
                        double acc = 0.0;
                        if (nrm[d] > 0.0) {
                            double dx = fx ? fx[d] - f[d] : 0.0;
                            double dy = fy ? fy[d] - f[d] : 0.0;
                            double dz = fz ? fz[d] - f[d] : 0.0;
                            acc -= (dx + dy + dz) / nrm[d];
                        }
                        if (i > 0) {
                            double n = ctx.norms[cmx * comps + d];
                            if (n > 0.0) acc += (f[d] - ctx.field[cmx * comps + d]) / n;
                        }
                        if (j > 0) {
                            double n = ctx.norms[cmy * comps + d];
                            if (n > 0.0) acc += (f[d] - ctx.field[cmy * comps + d]) / n;
                        }
                        if (k > 0) {
                            double n = ctx.norms[cmz * comps + d];
                            if (n > 0.0) acc += (f[d] - ctx.field[cmz * comps + d]) / n;
                        }
                        g[d] += scale * acc;
                    }
                }
        }
    }
    return value;
}

const std::vector<double>& field_of(const VoxelGrid& grid, GridField field) {
    switch (field) {
        case GridField::Density:
            return grid.density();
        case GridField::Temperature:
            return grid.temperature();
        case GridField::Sh:
            return grid.sh_coeffs();
    }
    throw std::logic_error("unknown field");
}

}  // namespace

double tv_loss(const VoxelGrid& grid, GridField field) {
    TvContext ctx;
    const auto& f = field_of(grid, field);
    ctx.field = f.data();
    ctx.gradient = nullptr;
    ctx.nx = grid.dims()[0] + 1;
    ctx.ny = grid.dims()[1] + 1;
    ctx.nz = grid.dims()[2] + 1;
    ctx.comps = field == GridField::Sh ? VoxelGrid::kShPerCorner : 1;
    ctx.grad_scale = 0.0;
    return tv_run(ctx);
}

double tv_loss_with_gradient(const VoxelGrid& grid, GridField field, double weight,
                             std::vector<double>& gradient) {
    const auto& f = field_of(grid, field);
    if (gradient.size() != f.size()) throw DataError("tv gradient buffer shape mismatch");
    TvContext ctx;
    ctx.field = f.data();
    ctx.gradient = gradient.data();
    ctx.nx = grid.dims()[0] + 1;
    ctx.ny = grid.dims()[1] + 1;
    ctx.nz = grid.dims()[2] + 1;
    ctx.comps = field == GridField::Sh ? VoxelGrid::kShPerCorner : 1;
    ctx.grad_scale = weight;
    return tv_run(ctx);
}

bool LossBreakdown::finite() const { return first_non_finite() == nullptr; }

const char* LossBreakdown::first_non_finite() const {
    if (!std::isfinite(l2_rgb)) return "l2_rgb";
    if (!std::isfinite(tv_rgb)) return "tv_rgb";
    if (!std::isfinite(l2_thermal)) return "l2_thermal";
    if (!std::isfinite(l1_thermal)) return "l1_thermal";
    if (!std::isfinite(tv_thermal)) return "tv_thermal";
    if (!std::isfinite(total)) return "total";
    return nullptr;
}

LossBreakdown evaluate_batch(const VoxelGrid& grid, const SphericalBackground* background,
                             std::span<const RayBatchEntry> batch, const LossWeights& weights,
                             double step, GridGradients* grads,
                             std::vector<double>* background_gradient, bool include_tv,
                             double tv_scale) {
    const std::int64_t b = static_cast<std::int64_t>(batch.size());
    const double inv_b = b ? 1.0 / static_cast<double>(b) : 0.0;

    std::vector<double> sq_rgb(batch.size(), 0.0), sq_t(batch.size(), 0.0),
        abs_t(batch.size(), 0.0);

    // Rays are split into one contiguous chunk per worker; each worker owns a
    // gradient buffer and buffers merge in fixed order afterwards, so the
    // accumulated sums match a sequential pass for a given worker count.
    const int workers = grads ? std::min<std::int64_t>(thread_count(), std::max<std::int64_t>(b, 1))
                              : thread_count();
    std::vector<GridGradients> extra_grads;
    std::vector<std::vector<double>> extra_bg;
    if (grads && workers > 1) {
        extra_grads.assign(static_cast<std::size_t>(workers - 1), GridGradients(grid));
        if (background_gradient)
            extra_bg.assign(static_cast<std::size_t>(workers - 1),
                            std::vector<double>(background_gradient->size(), 0.0));
    }

#pragma omp parallel num_threads(workers)
    {
        RayTrace trace;
#ifdef _OPENMP
        const int tid = omp_get_thread_num();
#else
        const int tid = 0;
#endif
        GridGradients* local = grads ? (tid == 0 ? grads : &extra_grads[tid - 1]) : nullptr;
        std::vector<double>* local_bg =
            background_gradient ? (tid == 0 ? background_gradient : &extra_bg[tid - 1]) : nullptr;
        const std::int64_t chunk = (b + workers - 1) / workers;
        const std::int64_t begin = tid * chunk;
        const std::int64_t end = std::min(b, begin + chunk);
        for (std::int64_t i = begin; i < end; ++i) {
            const RayBatchEntry& e = batch[i];
            trace_ray(grid, background, e.ray, step, TraceMode::Both, trace);
            Vec3 dr = trace.rgb - e.rgb_truth;
            double dt = trace.temperature - e.thermal_truth;
            sq_rgb[i] = dr.dot(dr);
            sq_t[i] = dt * dt;
            abs_t[i] = std::abs(dt);
            if (local) {
                RayUpstream up;
                // d/drgb of mean over B pixels and 3 channels; thermal terms
                // are means over B pixels.
                up.d_rgb = dr * (2.0 * inv_b / 3.0);
                up.d_temperature = inv_b * (weights.lambda * 2.0 * dt +
                                            (1.0 - weights.lambda) * (dt > 0.0   ? 1.0
                                                                      : dt < 0.0 ? -1.0
                                                                                 : 0.0));
                backprop_ray(grid, background, trace, up, *local, local_bg);
            }
        }
    }

    for (std::size_t t = 0; t < extra_grads.size(); ++t) {
        grads->add(extra_grads[t]);
        if (background_gradient)
            for (std::size_t i = 0; i < background_gradient->size(); ++i)
                (*background_gradient)[i] += extra_bg[t][i];
    }

    LossBreakdown out;
    out.l2_rgb = deterministic_sum(sq_rgb.data(), batch.size()) * inv_b / 3.0;
    out.l2_thermal = deterministic_sum(sq_t.data(), batch.size()) * inv_b;
    out.l1_thermal = deterministic_sum(abs_t.data(), batch.size()) * inv_b;

    if (include_tv) {
        if (grads) {
            out.tv_rgb = tv_loss_with_gradient(grid, GridField::Sh, weights.tv_rgb * tv_scale,
                                               grads->sh);
            out.tv_thermal = tv_loss_with_gradient(grid, GridField::Temperature,
                                                   weights.tv_thermal * tv_scale,
                                                   grads->temperature);
        } else {
            out.tv_rgb = tv_loss(grid, GridField::Sh);
            out.tv_thermal = tv_loss(grid, GridField::Temperature);
        }
    }

    out.total = out.l2_rgb + weights.tv_rgb * out.tv_rgb + weights.lambda * out.l2_thermal +
                (1.0 - weights.lambda) * out.l1_thermal + weights.tv_thermal * out.tv_thermal;
    return out;
}

}  // namespace voxtherm
