// SPDX-License-Identifier: Apache-2.0
#include "voxtherm/sh.hpp"

namespace voxtherm {

namespace {
constexpr double kC0 = 0.28209479177387814;  // 1/(2 sqrt(pi))
constexpr double kC1 = 0.4886025119029199;   // sqrt(3/(4 pi))
constexpr double kC2_0 = 1.0925484305920792;
constexpr double kC2_1 = 0.31539156525252005;
constexpr double kC2_2 = 0.5462742152960396;
}  // namespace

std::array<double, kShBasisDim> eval_sh_basis(const Vec3& d) {
    const double x = d.x, y = d.y, z = d.z;
    return {
        kC0,
        -kC1 * y,
        kC1 * z,
        -kC1 * x,
        kC2_0 * x * y,
        -kC2_0 * y * z,
        kC2_1 * (3.0 * z * z - 1.0),
        -kC2_0 * x * z,
        kC2_2 * (x * x - y * y),
    };
}

Vec3 eval_sh_color(const double* coeffs27, const std::array<double, kShBasisDim>& basis) {
    double out[3];
    for (int ch = 0; ch < 3; ++ch) {
        const double* c = coeffs27 + ch * kShBasisDim;
        double v = 0.0;
        for (int i = 0; i < kShBasisDim; ++i) v += c[i] * basis[i];
        out[ch] = v;
    }
    return {out[0], out[1], out[2]};
}

}  // namespace voxtherm
