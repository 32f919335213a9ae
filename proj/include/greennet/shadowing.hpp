#pragma once

#include <cstdint>

#include "greennet/metrics.hpp"

namespace greennet {

struct ShadowingStats {
    MetricReport mean;
    MetricReport stddev;  // sample standard deviation over draws (0 for one draw)
    int n_draws = 0;
    double sigma_db = 0.0;
};

// Monte Carlo evaluation of a fixed design under multiplicative log-normal
// shadowing: each (station, sample) path loss is scaled by 10^(X/10) with
// X ~ N(0, sigma_db^2), drawn once per draw. Shadowing is evaluation-only;
// optimization always uses the mean path loss. sigma_db = 0 reproduces the
// deterministic report exactly.
ShadowingStats shadowing_eval(const NetworkDesign& design, const Scenario& scenario,
                              double sigma_db, int n_draws, std::uint64_t seed,
                              CapacityModel model = CapacityModel::lower_bound);

}  // namespace greennet
