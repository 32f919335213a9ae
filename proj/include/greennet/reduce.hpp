#pragma once

#include <cstddef>
#include <span>

namespace greennet {

// Sum with a fixed binary reduction tree (midpoint splits, serial base case of
// 8 elements). The summation order depends only on the element count, never on
// the thread count, so parallel code that fills a buffer and reduces it here is
// bit-stable across OMP_NUM_THREADS. Also better conditioned than a left fold.
inline double pairwise_sum(std::span<const double> v) {
    const std::size_t n = v.size();
    if (n <= 8) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

inline double pairwise_sum(const double* data, std::size_t n) {
    return pairwise_sum(std::span<const double>(data, n));
}

}  // namespace greennet
