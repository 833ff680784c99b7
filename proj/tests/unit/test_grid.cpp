// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cstdio>
#include <random>
#include <stdexcept>

#include "voxtherm/checkpoint.hpp"
#include "voxtherm/errors.hpp"
#include "voxtherm/grid.hpp"

using namespace voxtherm;

namespace {

VoxelGrid random_grid(std::array<int, 3> dims, std::uint64_t seed) {
    VoxelGrid grid(dims, GridBounds{{-1, -1, -1}, {1, 1, 1}}, {10.0, 30.0});
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (double& v : grid.density()) v = uni(rng) * 5.0;
    for (double& v : grid.sh_coeffs()) v = uni(rng) - 0.5;
    for (double& v : grid.temperature()) v = uni(rng);
    return grid;
}

Vec3 random_point_inside(const GridBounds& b, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> uni(0.02, 0.98);
    Vec3 e = b.extent();
    return {b.min_corner.x + uni(rng) * e.x, b.min_corner.y + uni(rng) * e.y,
            b.min_corner.z + uni(rng) * e.z};
}

}  // namespace

TEST_SUITE("grid") {

TEST_CASE("world_to_grid maps bounds onto [0, dims]") {
    VoxelGrid grid({4, 8, 2}, GridBounds{{-2, 0, 1}, {2, 4, 3}}, {0, 1});
    Vec3 lo = grid.world_to_grid({-2, 0, 1});
    CHECK(lo.x == doctest::Approx(0.0));
    CHECK(lo.y == doctest::Approx(0.0));
    CHECK(lo.z == doctest::Approx(0.0));
    Vec3 hi = grid.world_to_grid({2, 4, 3});
    CHECK(hi.x == doctest::Approx(4.0));
    CHECK(hi.y == doctest::Approx(8.0));
    CHECK(hi.z == doctest::Approx(2.0));
    Vec3 mid = grid.world_to_grid({0, 2, 2});
    CHECK(mid.x == doctest::Approx(2.0));
    CHECK(mid.y == doctest::Approx(4.0));
    CHECK(mid.z == doctest::Approx(1.0));
}

TEST_CASE("sampling at a corner returns that corner's value") {
    VoxelGrid grid = random_grid({3, 3, 3}, 1);
    for (int k = 0; k <= 3; ++k)
        for (int j = 0; j <= 3; ++j)
            for (int i = 0; i <= 3; ++i) {
                Vec3 p = grid.corner_position(i, j, k);
                CHECK(grid.sample_density(p) ==
                      doctest::Approx(grid.density()[grid.corner_index(i, j, k)]).epsilon(1e-12));
            }
}

TEST_CASE("sampling at a cell center averages the 8 corners") {
    VoxelGrid grid = random_grid({2, 2, 2}, 2);
    Vec3 center = grid.corner_position(0, 0, 0) + grid.voxel_edge() * 0.5;
    double mean = 0.0;
    for (int dz = 0; dz < 2; ++dz)
        for (int dy = 0; dy < 2; ++dy)
            for (int dx = 0; dx < 2; ++dx)
                mean += grid.density()[grid.corner_index(dx, dy, dz)];
    mean /= 8.0;
    CHECK(grid.sample_density(center) == doctest::Approx(mean).epsilon(1e-12));
}

TEST_CASE("random samples match an independently coded 8-term expansion") {
    VoxelGrid grid = random_grid({2, 2, 2}, 3);
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 200; ++trial) {
        Vec3 p = random_point_inside(grid.bounds(), rng);
        Vec3 g = grid.world_to_grid(p);
        int ci = std::min(static_cast<int>(g.x), 1);
        int cj = std::min(static_cast<int>(g.y), 1);
        int ck = std::min(static_cast<int>(g.z), 1);
        double fx = g.x - ci, fy = g.y - cj, fz = g.z - ck;
        double expected = 0.0;
        for (int dz = 0; dz < 2; ++dz)
            for (int dy = 0; dy < 2; ++dy)
                for (int dx = 0; dx < 2; ++dx) {
                    double w = (dx ? fx : 1.0 - fx) * (dy ? fy : 1.0 - fy) * (dz ? fz : 1.0 - fz);
                    expected += w * grid.density()[grid.corner_index(ci + dx, cj + dy, ck + dz)];
                }
        CHECK(grid.sample_density(p) == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("trilinear weights are non-negative and sum to one") {
    VoxelGrid grid = random_grid({5, 4, 3}, 4);
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 500; ++trial) {
        TrilinearStencil s = grid.stencil_at(random_point_inside(grid.bounds(), rng));
        double sum = 0.0;
        for (int n = 0; n < 8; ++n) {
            CHECK(s.weight[n] >= 0.0);
            sum += s.weight[n];
        }
        CHECK(std::abs(sum - 1.0) <= 1e-12);
    }
}

TEST_CASE("sampling is linear in corner values") {
    VoxelGrid a = random_grid({3, 3, 3}, 5);
    VoxelGrid b = random_grid({3, 3, 3}, 6);
    VoxelGrid sum = a;
    for (std::size_t i = 0; i < sum.density().size(); ++i) sum.density()[i] += b.density()[i];
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 100; ++trial) {
        Vec3 p = random_point_inside(a.bounds(), rng);
        CHECK(sum.sample_density(p) ==
              doctest::Approx(a.sample_density(p) + b.sample_density(p)).epsilon(1e-12));
    }
}

TEST_CASE("out-of-bounds samples throw") {
    VoxelGrid grid = random_grid({2, 2, 2}, 7);
    CHECK_THROWS_AS(grid.sample_density({1.5, 0.0, 0.0}), std::out_of_range);
    CHECK_THROWS_AS(grid.sample_density({0.0, -1.1, 0.0}), std::out_of_range);
}

TEST_CASE("scatter at a corner adds only to that corner") {
    VoxelGrid grid = random_grid({2, 2, 2}, 8);
    std::vector<double> buffer(grid.corner_count(), 0.0);
    Vec3 p = grid.corner_position(1, 0, 1);
    double upstream = 1.0;
    grid.scatter_gradient(p, GridField::Density, &upstream, buffer);
    for (int k = 0; k <= 2; ++k)
        for (int j = 0; j <= 2; ++j)
            for (int i = 0; i <= 2; ++i) {
                double expected = (i == 1 && j == 0 && k == 1) ? 1.0 : 0.0;
                CHECK(buffer[grid.corner_index(i, j, k)] == doctest::Approx(expected));
            }
}

TEST_CASE("two scatters at one point double the buffer") {
    VoxelGrid grid = random_grid({2, 2, 2}, 9);
    std::mt19937_64 rng(41);
    Vec3 p = random_point_inside(grid.bounds(), rng);
    std::vector<double> once(grid.corner_count(), 0.0), twice(grid.corner_count(), 0.0);
    double upstream = 0.7;
    grid.scatter_gradient(p, GridField::Density, &upstream, once);
    grid.scatter_gradient(p, GridField::Temperature, &upstream, twice);  // same weights
    grid.scatter_gradient(p, GridField::Temperature, &upstream, twice);
    for (std::size_t i = 0; i < once.size(); ++i)
        CHECK(twice[i] == doctest::Approx(2.0 * once[i]).epsilon(1e-12));
}

TEST_CASE("scatter is the adjoint of sampling (finite differences)") {
    VoxelGrid grid = random_grid({2, 2, 2}, 10);
    std::mt19937_64 rng(43);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        Vec3 p = random_point_inside(grid.bounds(), rng);
        const double g = uni(rng);
        std::vector<double> scattered(grid.corner_count(), 0.0);
        grid.scatter_gradient(p, GridField::Density, &g, scattered);

        const double h = 1e-4;
        for (std::size_t c = 0; c < grid.corner_count(); ++c) {
            double saved = grid.density()[c];
            grid.density()[c] = saved + h;
            double up = g * grid.sample_density(p);
            grid.density()[c] = saved - h;
            double dn = g * grid.sample_density(p);
            grid.density()[c] = saved;
            double fd = (up - dn) / (2.0 * h);
            double denom = std::max({std::abs(fd), std::abs(scattered[c]), 1e-9});
            CHECK(std::abs(fd - scattered[c]) / denom <= 1e-6);
        }
    }
}

TEST_CASE("sh sampling and scattering use all 27 components") {
    VoxelGrid grid = random_grid({2, 2, 2}, 11);
    std::mt19937_64 rng(47);
    Vec3 p = random_point_inside(grid.bounds(), rng);
    auto sampled = grid.sample_sh(p);
    auto via_enum = grid.sample_trilinear(p, GridField::Sh);
    REQUIRE(via_enum.size() == 27);
    for (int c = 0; c < 27; ++c) CHECK(sampled[c] == doctest::Approx(via_enum[c]));

    std::vector<double> buffer(grid.corner_count() * VoxelGrid::kShPerCorner, 0.0);
    std::array<double, 27> upstream{};
    for (int c = 0; c < 27; ++c) upstream[c] = 0.1 * (c + 1);
    grid.scatter_gradient(p, GridField::Sh, upstream.data(), buffer);
    // dot(upstream, sample(v)) gradient w.r.t. corner coefficients is
    // weight * upstream at each of the 8 corners.
    TrilinearStencil s = grid.stencil_at(p);
    for (int n = 0; n < 8; ++n)
        for (int c = 0; c < 27; ++c)
            CHECK(buffer[s.corner[n] * 27 + c] ==
                  doctest::Approx(s.weight[n] * upstream[c]).epsilon(1e-12));
}

TEST_CASE("invalid construction is rejected") {
    CHECK_THROWS_AS(VoxelGrid({0, 2, 2}, GridBounds{}, {0, 1}), DataError);
    CHECK_THROWS_AS(VoxelGrid({2, 2, 2}, GridBounds{{1, 0, 0}, {0, 1, 1}}, {0, 1}), DataError);
    CHECK_THROWS_AS(VoxelGrid({2, 2, 2}, GridBounds{}, {5, 5}), DataError);
}

TEST_CASE("checkpoint round trip preserves every field") {
    VoxelGrid grid = random_grid({3, 2, 4}, 12);
    SphericalBackground bg(8, 16);
    std::mt19937_64 rng(53);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (double& v : bg.rgb()) v = uni(rng);

    std::string path = "checkpoint_roundtrip_test.vxgrid";
    save_checkpoint(path, grid, &bg, "{\"seed\":7}");
    Checkpoint ck = load_checkpoint(path);
    std::remove(path.c_str());

    CHECK(ck.grid.dims() == grid.dims());
    CHECK(ck.grid.temp_range() == grid.temp_range());
    CHECK(ck.grid.density() == grid.density());
    CHECK(ck.grid.sh_coeffs() == grid.sh_coeffs());
    CHECK(ck.grid.temperature() == grid.temperature());
    CHECK(ck.has_background);
    CHECK(ck.background.rgb() == bg.rgb());
    CHECK(ck.meta_json == "{\"seed\":7}");
}

}  // TEST_SUITE
