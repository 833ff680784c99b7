// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>

namespace voxtherm {

// Invalid or missing input data. The CLI maps this to exit code 3.
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Solver breakdown, non-finite values and the like. CLI exit code 4.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace voxtherm
