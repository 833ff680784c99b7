// SPDX-License-Identifier: Apache-2.0
#include "voxtherm/checkpoint.hpp"

#include <array>
#include <cstring>
#include <fstream>

#include "voxtherm/errors.hpp"

namespace voxtherm {

namespace {

constexpr char kMagic[8] = {'V', 'X', 'T', 'H', 'G', 'R', 'I', 'D'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void write_pod(std::ostream& out, const T& v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_pod(std::istream& in) {
    T v{};
    in.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!in) throw DataError("truncated checkpoint");
    return v;
}

void write_doubles(std::ostream& out, const std::vector<double>& v) {
    out.write(reinterpret_cast<const char*>(v.data()),
              static_cast<std::streamsize>(v.size() * sizeof(double)));
}

void read_doubles(std::istream& in, std::vector<double>& v) {
    in.read(reinterpret_cast<char*>(v.data()),
            static_cast<std::streamsize>(v.size() * sizeof(double)));
    if (!in) throw DataError("truncated checkpoint");
}

}  // namespace

void save_checkpoint(const std::string& path, const VoxelGrid& grid,
                     const SphericalBackground* background, const std::string& meta_json) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open checkpoint for writing: " + path);

    out.write(kMagic, sizeof(kMagic));
    write_pod(out, kVersion);
    for (int a = 0; a < 3; ++a) write_pod(out, static_cast<std::int32_t>(grid.dims()[a]));
    const GridBounds& b = grid.bounds();
    for (double v : {b.min_corner.x, b.min_corner.y, b.min_corner.z, b.max_corner.x,
                     b.max_corner.y, b.max_corner.z})
        write_pod(out, v);
    write_pod(out, grid.temp_range()[0]);
    write_pod(out, grid.temp_range()[1]);
    write_pod(out, static_cast<std::int32_t>(VoxelGrid::kShPerCorner));
    write_pod(out, static_cast<std::uint8_t>(background ? 1 : 0));
    if (background) {
        write_pod(out, static_cast<std::int32_t>(background->height()));
        write_pod(out, static_cast<std::int32_t>(background->width()));
    }
    write_pod(out, static_cast<std::uint64_t>(meta_json.size()));
    out.write(meta_json.data(), static_cast<std::streamsize>(meta_json.size()));

    write_doubles(out, grid.density());
    write_doubles(out, grid.sh_coeffs());
    write_doubles(out, grid.temperature());
    if (background) write_doubles(out, background->rgb());
    if (!out) throw DataError("checkpoint write failed: " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open checkpoint: " + path);

    char magic[8];
    in.read(magic, sizeof(magic));
    if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
        throw DataError("not a grid checkpoint: " + path);
    auto version = read_pod<std::uint32_t>(in);
    if (version != kVersion) throw DataError("unsupported checkpoint version");

    std::array<int, 3> dims;
    for (int a = 0; a < 3; ++a) dims[a] = read_pod<std::int32_t>(in);
    GridBounds bounds;
    bounds.min_corner = {read_pod<double>(in), read_pod<double>(in), read_pod<double>(in)};
    bounds.max_corner = {read_pod<double>(in), read_pod<double>(in), read_pod<double>(in)};
    std::array<double, 2> temp_range{read_pod<double>(in), read_pod<double>(in)};
    auto sh_per_corner = read_pod<std::int32_t>(in);
    if (sh_per_corner != VoxelGrid::kShPerCorner)
        throw DataError("unsupported SH layout in checkpoint");
    auto has_bg = read_pod<std::uint8_t>(in);
    int bg_h = SphericalBackground::kDefaultHeight;
    int bg_w = SphericalBackground::kDefaultWidth;
    if (has_bg) {
        bg_h = read_pod<std::int32_t>(in);
        bg_w = read_pod<std::int32_t>(in);
    }
    auto meta_len = read_pod<std::uint64_t>(in);
    std::string meta(meta_len, '\0');
    in.read(meta.data(), static_cast<std::streamsize>(meta_len));
    if (!in) throw DataError("truncated checkpoint");

    Checkpoint ck{VoxelGrid(dims, bounds, temp_range), SphericalBackground(bg_h, bg_w),
                  has_bg != 0, std::move(meta)};
    read_doubles(in, ck.grid.density());
    read_doubles(in, ck.grid.sh_coeffs());
    read_doubles(in, ck.grid.temperature());
    if (ck.has_background) read_doubles(in, ck.background.rgb());
    return ck;
}

}  // namespace voxtherm
