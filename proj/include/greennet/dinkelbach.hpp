#pragma once

#include <cstdint>

#include "greennet/trainer.hpp"

namespace greennet {

struct DinkelbachConfig {
    double epsilon = 1e-4;    // convergence tolerance on the scaled loss
    int max_iterations = 30;  // outer iterations
    AdamConfig inner;
    StageSchedule schedule;

    void validate() const {
        if (!(epsilon > 0.0)) throw invalid_input("dinkelbach: epsilon must be > 0");
        if (max_iterations < 1) throw invalid_input("dinkelbach: need at least one iteration");
        inner.validate();
        schedule.validate();
    }
};

// One outer iteration: the ratio parameter used, the inner solution quality
// and the refreshed ratio computed from the returned design.
struct DinkelbachIteration {
    int k = 0;
    double eta = 0.0;       // bit/J used by the inner solve
    double eta_next = 0.0;  // update_iree of the returned design
    double loss_total = 0.0;  // scaled inner loss at the returned design
    FeasibilityResidual residuals;
    MetricReport report;  // lower-bound capacity model (the trained surrogate)
    ParamVector params;
};

struct DinkelbachTrace {
    std::vector<DinkelbachIteration> iterations;
};

struct SolveResult {
    NetworkDesign design;
    ParamVector params;
    double eta_star = 0.0;  // bit/J
    bool converged = false;
    DinkelbachTrace trace;
    std::vector<EpochRecord> epoch_trace;  // concatenated inner traces
    long long loss_evaluations = 0;        // fused loss+gradient evaluations
};

// eta = min{C_Tot, D_Tot} (1 - xi) / P_T of the design, evaluated with the
// trained (lower-bound) capacity model; identical to metrics::iree on it.
double update_iree(const NetworkDesign& design, const Scenario& scenario);

// F(eta) = min{C,D}(1-xi) - eta * P_T at the design (unscaled, bit/s); zero at
// eta = update_iree(design).
double optimal_condition_residual(const NetworkDesign& design, const Scenario& scenario,
                                  double eta);

// Algorithm: alternate the two-stage inner solve with the ratio update until
// the scaled loss magnitude drops below epsilon or iterations run out (the
// result is then flagged unconverged). Iteration k+1 warm-starts from k.
SolveResult solve(const Scenario& scenario, const DinkelbachConfig& config, std::uint64_t seed);

// Deterministic initial design: locations i.i.d. uniform over the area,
// B_n = B_max/N, P_n = P_max/(2N).
ParamVector initial_params(const Scenario& scenario, std::uint64_t seed);

}  // namespace greennet
