// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <vector>

namespace voxtherm {

// RMSProp with a running mean of squared gradients:
//   e <- s * e + (1 - s) * g^2 ; p <- p - lr * g / (sqrt(e) + eps)
class RmsProp {
  public:
    RmsProp(std::size_t n, double lr, double smoothing, double eps = 1e-8)
        : lr_(lr), smoothing_(smoothing), eps_(eps), mean_sq_(n, 0.0) {}

    // Consumes and zeroes the gradient buffer in the same pass.
    void step_and_clear(std::vector<double>& params, std::vector<double>& grads);

    double learning_rate() const { return lr_; }

  private:
    double lr_;
    double smoothing_;
    double eps_;
    std::vector<double> mean_sq_;
};

}  // namespace voxtherm
