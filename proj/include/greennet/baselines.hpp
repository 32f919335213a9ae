#pragma once

#include "greennet/dinkelbach.hpp"

namespace greennet {

// Objective-swapped reference designs on the same parameterization and
// trainer, so comparisons isolate the metric. The EE baseline drops the
// zeta_min penalty (a pure-EE design has no traffic-matching term); the SE
// baseline keeps only the budget penalties and trains in a single stage.

// Dinkelbach on EE = C_Tot / P_T with inner objective C_Tot - eta*P_T.
SolveResult maximize_ee(const Scenario& scenario, const DinkelbachConfig& config,
                        std::uint64_t seed);

// Single-stage maximization of C_Tot under budget penalties.
SolveResult maximize_se(const Scenario& scenario, const DinkelbachConfig& config,
                        std::uint64_t seed);

struct ComparisonRow {
    ObjectiveKind objective = ObjectiveKind::iree;
    double p_max_dbw = 0.0;
    double b_max_hz = 0.0;
    std::uint64_t seed = 0;
    MetricReport report;
    bool converged = false;
};

// One solve per (objective, p_max, seed) cell, reported with the lower-bound
// capacity model; rows ordered objective-major, then p_max, then seed.
std::vector<ComparisonRow> compare(const Scenario& scenario, const DinkelbachConfig& config,
                                   const std::vector<double>& p_max_dbw_values,
                                   const std::vector<std::uint64_t>& seeds,
                                   const std::vector<ObjectiveKind>& objectives);

const char* objective_name(ObjectiveKind kind);

}  // namespace greennet
