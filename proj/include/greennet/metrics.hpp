#pragma once

#include "greennet/grid.hpp"
#include "greennet/propagation.hpp"

namespace greennet {

// Linear BS power model P = lambda * P_tx + P_circuit (lambda = 1/PA efficiency).
struct PowerModel {
    double lambda = 1.0 / 0.38;  // dimensionless, >= 1
    double p_circuit = 5.0;      // W per BS, >= 0

    void validate() const {
        if (!(lambda >= 1.0)) throw invalid_input("power model: lambda must be >= 1");
        if (!(p_circuit >= 0.0)) throw invalid_input("power model: circuit power must be >= 0");
    }
};

// Immutable problem instance: area, budgets, QoS floor, noise, power model,
// traffic requirement and default propagation parameters.
struct Scenario {
    std::shared_ptr<const SampleGrid> grid;
    ScalarField traffic;     // D_T samples, bit/s/m^2
    double b_max = 0.0;      // Hz
    double p_max = 0.0;      // W
    double zeta_min = 0.0;   // in [0, 1]
    double noise_psd = 0.0;  // W/Hz
    PowerModel power_model;
    int n_bs = 1;
    PathLossParams loss_defaults;

    double d_tot = 0.0;  // cached total(traffic), bit/s

    RadioEnv radio() const { return {b_max, noise_psd}; }
    void validate() const;
    void refresh_totals() { d_tot = total(traffic); }
};

// Which capacity expression backs a metric evaluation. The optimizer and its
// reports use the RBF lower bound throughout (that is what it trains); the
// exact model is evaluated alongside for the optimality-gap analysis.
enum class CapacityModel { lower_bound, exact };

// All figures of merit for one design on one scenario.
struct MetricReport {
    double c_tot = 0.0;  // bit/s
    double d_tot = 0.0;  // bit/s
    double xi = 0.0;     // JS divergence, [0,1]
    double zeta = 0.0;   // network utility indicator, [0,1]
    double p_t = 0.0;    // W
    double iree = 0.0;   // bit/J
    double ee = 0.0;     // bit/J
    double se = 0.0;     // bit/s/Hz
};

// Jensen-Shannon divergence (base 2) between the normalized fields,
// p_m = c_m * w / C_Tot, q_m = d_m * w / D_Tot. Throws undefined_divergence
// when either field has zero total.
double js_divergence(const ScalarField& c, const ScalarField& d);

// P_T = sum_n (lambda * P_n + P_circuit), W.
double power_total(const NetworkDesign& design, const PowerModel& model);

// eta_IREE = min(C_Tot, D_Tot) * (1 - xi) / P_T, bit/J.
double iree(const ScalarField& c_field, const ScalarField& d_field,
            const NetworkDesign& design, const Scenario& scenario);

// zeta = min(C_Tot, D_Tot) * (1 - xi) / D_Tot, in [0,1]; equals 1 - xi exactly
// whenever C_Tot >= D_Tot.
double utility_indicator(const ScalarField& c_field, const ScalarField& d_field);

// The parametric subtractive objective  min(C,D)(1-xi) - eta * P_T  whose zero
// characterizes the optimal IREE.
double given_iree_utility(const NetworkDesign& design, const Scenario& scenario, double eta);

// Constraint residuals (delta_zeta, delta_B in Hz, delta_P in W); all zero iff
// the design is feasible for the scenario.
struct FeasibilityResidual {
    double d_zeta = 0.0;
    double d_bandwidth = 0.0;  // Hz
    double d_power = 0.0;      // W

    bool feasible(double zeta_tol = 0.0, double b_tol = 0.0, double p_tol = 0.0) const {
        return d_zeta <= zeta_tol && d_bandwidth <= b_tol && d_power <= p_tol;
    }
};

FeasibilityResidual feasibility_residual(const NetworkDesign& design, const Scenario& scenario);

// Sample the chosen capacity expression over the scenario grid. Values are
// stored as densities C(L_m)/w so that total() returns sum_m C(L_m), the
// sample-sum totals used everywhere in the objective.
ScalarField capacity_field(const NetworkDesign& design, const Scenario& scenario,
                           CapacityModel model);

// Full per-design report under the chosen capacity model.
MetricReport report_for_design(const NetworkDesign& design, const Scenario& scenario,
                               CapacityModel model);

}  // namespace greennet
