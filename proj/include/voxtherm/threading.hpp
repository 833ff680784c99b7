// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>

namespace voxtherm {

// Worker cap for all parallel regions. 0 restores the hardware default.
void set_thread_count(int n);
int thread_count();

// Sum in fixed chunk order so the result does not depend on how chunks were
// scheduled across threads.
double deterministic_sum(const double* values, std::size_t n);

}  // namespace voxtherm
