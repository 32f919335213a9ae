// Test-only oracles, kept independent of the library code paths they check.
#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "greennet/grid.hpp"

namespace oracles {

// Brute-force Jensen-Shannon divergence straight from the defining integral,
// written against probability masses (base-2 logs, 0*log0 = 0).
inline double js_bruteforce(const std::vector<double>& c, const std::vector<double>& d,
                            double weight) {
    double c_tot = 0.0, d_tot = 0.0;
    for (double v : c) c_tot += v * weight;
    for (double v : d) d_tot += v * weight;
    double xi = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) {
        const double p = c[i] * weight / c_tot;
        const double q = d[i] * weight / d_tot;
        const double mix = 0.5 * (p + q);
        if (p > 0.0) xi += 0.5 * p * (std::log2(p) - std::log2(mix));
        if (q > 0.0) xi += 0.5 * q * (std::log2(q) - std::log2(mix));
    }
    return xi;
}

// Bisection root of f on [lo, hi] (f increasing, f(lo) <= 0 <= f(hi)).
inline double bisect(const std::function<double(double)>& f, double lo, double hi,
                     int iterations = 200) {
    for (int i = 0; i < iterations; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (f(mid) < 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace oracles
