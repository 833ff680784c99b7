// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>

#include "voxtherm/math.hpp"

namespace voxtherm {

inline constexpr int kShBasisDim = 9;

// Real spherical-harmonic basis up to degree 2 evaluated at a unit direction,
// in the (l,m) order 00, 1-1, 10, 11, 2-2, 2-1, 20, 21, 22.
std::array<double, kShBasisDim> eval_sh_basis(const Vec3& dir);

// Per-channel dot product of the 9 basis values with 9 coefficients; layout is
// 9 coefficients for R, then G, then B. No clamping here: the renderer clamps
// after compositing.
Vec3 eval_sh_color(const double* coeffs27, const std::array<double, kShBasisDim>& basis);

}  // namespace voxtherm
