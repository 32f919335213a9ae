#pragma once

#include "greennet/dinkelbach.hpp"

namespace greennet {

// Closed-form checkers for the converged optimizer: optimal-IREE bounds, the
// surrogate optimality gap, the smoothness criterion and the complexity count.
// Area integrals use the scenario's own sample grid, in the same discrete
// measure as the training objective (totals are sample sums).

struct IreeBounds {
    double lower = 0.0;    // bit/J
    double upper = 0.0;    // bit/J
    double p_dt = 0.0;     // W, minimum central-BS power meeting D_Tot
    double mean_loss = 0.0;  // mean path loss to the area center
};

// lower = D_Tot(1-xi)/(lambda P_max + N P_c),
// upper = D_Tot(1-xi)/(lambda P_D^t + N P_c), with the Jensen-relaxed
// P_D^t = B_max sigma^2 Lbar (2^(D_Tot/(M B_max)) - 1).
IreeBounds iree_bounds(const Scenario& scenario, double xi_bar);

struct BoundsCheck {
    bool applicable = false;  // only when the converged C_Tot >= D_Tot
    bool pass = false;
    double eta_star = 0.0;
    IreeBounds bounds;
};

// Lemma-2 containment of the converged ratio, evaluated at the achieved
// divergence; tolerance 1e-6 * upper.
BoundsCheck check_bounds(const DinkelbachTrace& trace, const Scenario& scenario);

struct GapReport {
    double bound = 0.0;         // bit/J
    double measured_gap = 0.0;  // |eta_T - eta_S|, bit/J
    double eta_s = 0.0;
    double eta_t = 0.0;
    double xi_s = 0.0;   // JS(C_S, D)
    double xi_t = 0.0;   // JS(C_T, D)
    double xi_st = 0.0;  // JS(C_S, C_T)
    double c_s_tot = 0.0;
    double c_t_tot = 0.0;
};

// Surrogate optimality gap: both ratios evaluated on the same design with the
// two capacity expressions, against the closed-form bound (branching on
// C_S_Tot vs D_Tot).
GapReport optimality_gap_bound(const NetworkDesign& design, const Scenario& scenario);

struct SmoothnessCriterion {
    bool satisfied = false;
    double margin = 0.0;  // W; LHS - RHS of the criterion
};

// (L0,L1)-smoothness criterion of the capacity surrogate at one sample:
// sum_n Lambda_n(loc) >= sum_n 2 B_n/(sqrt((B_n L1)^2 + 4 ln2 L0) + B_n L1) - P_max.
SmoothnessCriterion smoothness_criterion(const NetworkDesign& design, const Point2D& loc,
                                         double l0, double l1, const Scenario& scenario);

// Predicted operation count N_epoch * N_ite * (N_BS^2 + M * N_BS).
double complexity_estimate(const Scenario& scenario, const DinkelbachConfig& config);

}  // namespace greennet
