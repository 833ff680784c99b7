// SPDX-License-Identifier: Apache-2.0
#include "voxtherm/threading.hpp"

#include <algorithm>
#include <thread>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace voxtherm {

namespace {
int g_thread_cap = 0;
}

void set_thread_count(int n) {
    g_thread_cap = n < 0 ? 0 : n;
#ifdef _OPENMP
    omp_set_num_threads(thread_count());
#endif
}

int thread_count() {
    int hw = static_cast<int>(std::thread::hardware_concurrency());
    if (hw <= 0) hw = 1;
    if (g_thread_cap > 0) return std::min(g_thread_cap, hw);
    return hw;
}

double deterministic_sum(const double* values, std::size_t n) {
    constexpr std::size_t kChunk = 4096;
    double total = 0.0;
    for (std::size_t begin = 0; begin < n; begin += kChunk) {
        std::size_t end = std::min(begin + kChunk, n);
        double partial = 0.0;
        for (std::size_t i = begin; i < end; ++i) partial += values[i];
        total += partial;
    }
    return total;
}

}  // namespace voxtherm
