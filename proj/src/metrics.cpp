// SPDX-License-Identifier: Apache-2.0
#include "voxtherm/metrics.hpp"

#include <cmath>
#include <vector>

#include "voxtherm/errors.hpp"

namespace voxtherm {

namespace {
constexpr int kWindow = 11;
constexpr double kSigma = 1.5;
constexpr double kK1 = 0.01;
constexpr double kK2 = 0.03;

std::vector<double> gaussian_kernel() {
    std::vector<double> k(kWindow);
    const int half = kWindow / 2;
    double sum = 0.0;
    for (int i = 0; i < kWindow; ++i) {
        double d = i - half;
        k[i] = std::exp(-d * d / (2.0 * kSigma * kSigma));
        sum += k[i];
    }
    for (double& v : k) v /= sum;
    return k;
}

// Separable Gaussian filter over one channel, valid region only. Output is
// (w - 10) x (h - 10).
void gauss_valid(const ImageF& img, int channel, const std::vector<double>& kernel,
                 std::vector<double>& out, int& ow, int& oh) {
    const int half = kWindow / 2;
    ow = img.width - 2 * half;
    oh = img.height - 2 * half;
    std::vector<double> rows(static_cast<std::size_t>(ow) * img.height);
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < ow; ++x) {
            double acc = 0.0;
            for (int t = 0; t < kWindow; ++t) acc += kernel[t] * img.at(x + t, y, channel);
            rows[static_cast<std::size_t>(y) * ow + x] = acc;
        }
    out.assign(static_cast<std::size_t>(ow) * oh, 0.0);
    for (int y = 0; y < oh; ++y)
        for (int x = 0; x < ow; ++x) {
            double acc = 0.0;
            for (int t = 0; t < kWindow; ++t)
                acc += kernel[t] * rows[static_cast<std::size_t>(y + t) * ow + x];
            out[static_cast<std::size_t>(y) * ow + x] = acc;
        }
}

}  // namespace

double psnr(const ImageF& a, const ImageF& b, double max_value) {
    if (!a.same_shape(b)) throw DataError("psnr: image shape mismatch");
    double mse = 0.0;
    for (std::size_t i = 0; i < a.data.size(); ++i) {
        double d = a.data[i] - b.data[i];
        mse += d * d;
    }
    mse /= static_cast<double>(a.data.size());
    if (mse <= 0.0) return kPsnrCap;
    double value = 10.0 * std::log10(max_value * max_value / mse);
    return std::min(value, kPsnrCap);
}

double ssim(const ImageF& a, const ImageF& b) {
    if (!a.same_shape(b)) throw DataError("ssim: image shape mismatch");
    if (a.width < kWindow || a.height < kWindow)
        throw DataError("ssim: image smaller than the 11x11 window");

    const double c1 = kK1 * kK1;  // (K1 * L)^2 with L = 1
    const double c2 = kK2 * kK2;
    const auto kernel = gaussian_kernel();

    ImageF aa(a.width, a.height, a.channels), bb(a.width, a.height, a.channels),
        ab(a.width, a.height, a.channels);
    for (std::size_t i = 0; i < a.data.size(); ++i) {
        aa.data[i] = a.data[i] * a.data[i];
        bb.data[i] = b.data[i] * b.data[i];
        ab.data[i] = a.data[i] * b.data[i];
    }

    double total = 0.0;
    std::size_t count = 0;
    std::vector<double> mu_a, mu_b, m_aa, m_bb, m_ab;
    for (int ch = 0; ch < a.channels; ++ch) {
        int ow = 0, oh = 0;
        gauss_valid(a, ch, kernel, mu_a, ow, oh);
        gauss_valid(b, ch, kernel, mu_b, ow, oh);
        gauss_valid(aa, ch, kernel, m_aa, ow, oh);
        gauss_valid(bb, ch, kernel, m_bb, ow, oh);
        gauss_valid(ab, ch, kernel, m_ab, ow, oh);
        for (std::size_t i = 0; i < mu_a.size(); ++i) {
            const double ma = mu_a[i], mb = mu_b[i];
            const double va = m_aa[i] - ma * ma;
            const double vb = m_bb[i] - mb * mb;
            const double cov = m_ab[i] - ma * mb;
            total += ((2.0 * ma * mb + c1) * (2.0 * cov + c2)) /
                     ((ma * ma + mb * mb + c1) * (va + vb + c2));
        }
        count += mu_a.size();
    }
    return total / static_cast<double>(count);
}

double mae(const ImageF& a, const ImageF& b, double scale) {
    if (!a.same_shape(b)) throw DataError("mae: image shape mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < a.data.size(); ++i) acc += std::abs(a.data[i] - b.data[i]);
    return scale * acc / static_cast<double>(a.data.size());
}

}  // namespace voxtherm
