// SPDX-License-Identifier: Apache-2.0
#include "voxtherm/optimizer.hpp"

#include <cmath>
#include <cstdint>

#include "voxtherm/errors.hpp"

namespace voxtherm {

void RmsProp::step_and_clear(std::vector<double>& params, std::vector<double>& grads) {
    if (params.size() != mean_sq_.size() || grads.size() != mean_sq_.size())
        throw DataError("optimizer state shape mismatch");
    const double s = smoothing_;
    const double one_minus = 1.0 - s;
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(params.size()); ++i) {
        const double g = grads[i];
        double e = s * mean_sq_[i] + one_minus * g * g;
        mean_sq_[i] = e;
        params[i] -= lr_ * g / (std::sqrt(e) + eps_);
        grads[i] = 0.0;
    }
}

}  // namespace voxtherm
