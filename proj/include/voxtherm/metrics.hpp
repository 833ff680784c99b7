// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "voxtherm/image.hpp"

namespace voxtherm {

// PSNR is reported in dB and capped here when the images are identical.
inline constexpr double kPsnrCap = 100.0;

// 10 log10(max^2 / MSE); identical images return kPsnrCap.
double psnr(const ImageF& a, const ImageF& b, double max_value = 1.0);

// Structural similarity with the standard constants (K1=0.01, K2=0.03) and an
// 11x11 Gaussian window, sigma 1.5; windows fully inside the image, channels
// averaged. Images must be at least 11x11.
double ssim(const ImageF& a, const ImageF& b);

// Mean absolute difference times `scale` (pass t_max - t_min for degrees C).
double mae(const ImageF& a, const ImageF& b, double scale = 1.0);

}  // namespace voxtherm
