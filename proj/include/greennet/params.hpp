#pragma once

#include <vector>

#include "greennet/metrics.hpp"

namespace greennet {

// Positivity floors applied after every optimizer step (clamping keeps the
// gradient interpretable against the physical symbols).
inline constexpr double kBandwidthFloor = 1.0;   // Hz
inline constexpr double kPowerFloor = 1e-9;      // W

// Flat layout [x_1,y_1,...,x_N,y_N, B_1,...,B_N, P_1,...,P_N].
struct ParamLayout {
    int n_bs = 0;

    std::size_t size() const { return 4 * static_cast<std::size_t>(n_bs); }
    std::size_t x(int n) const { return 2 * static_cast<std::size_t>(n); }
    std::size_t y(int n) const { return 2 * static_cast<std::size_t>(n) + 1; }
    std::size_t bw(int n) const { return 2 * static_cast<std::size_t>(n_bs) + n; }
    std::size_t pw(int n) const { return 3 * static_cast<std::size_t>(n_bs) + n; }
};

struct ParamVector {
    ParamLayout layout;
    std::vector<double> values;  // units (m, m, Hz, W) per layout

    double x(int n) const { return values[layout.x(n)]; }
    double y(int n) const { return values[layout.y(n)]; }
    double bw(int n) const { return values[layout.bw(n)]; }
    double pw(int n) const { return values[layout.pw(n)]; }

    bool finite() const {
        for (double v : values)
            if (!std::isfinite(v)) return false;
        return true;
    }

    void apply_floors() {
        for (int n = 0; n < layout.n_bs; ++n) {
            double& b = values[layout.bw(n)];
            double& p = values[layout.pw(n)];
            if (b < kBandwidthFloor) b = kBandwidthFloor;
            if (p < kPowerFloor) p = kPowerFloor;
        }
    }
};

ParamVector pack_design(const NetworkDesign& design);

// Stations take their propagation parameters from the scenario defaults.
NetworkDesign unpack_design(const ParamVector& params, const Scenario& scenario);

// Per-coordinate scales mapping physical units onto O(1) optimizer variables:
// locations by the area edge, bandwidths by B_max, powers by P_max.
std::vector<double> param_scales(const ParamLayout& layout, const Scenario& scenario);

}  // namespace greennet
