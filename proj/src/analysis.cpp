#include "greennet/analysis.hpp"

#include <cmath>

#include "greennet/reduce.hpp"

namespace greennet {

namespace {
constexpr double kLn2 = 0.69314718055994530942;
}

IreeBounds iree_bounds(const Scenario& scenario, double xi_bar) {
    scenario.validate();
    if (!(xi_bar >= 0.0 && xi_bar <= 1.0))
        throw invalid_input("iree_bounds: xi_bar must be in [0,1]");

    const auto& grid = *scenario.grid;
    const Point2D center{0.5 * grid.edge, 0.5 * grid.edge};

    std::vector<double> losses(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        losses[i] = detail::path_loss_raw(grid.points[i], center, scenario.loss_defaults);
    const double mean_loss = pairwise_sum(losses.data(), losses.size()) /
                             static_cast<double>(grid.size());

    const double samples = static_cast<double>(grid.size());  // discrete area measure
    const double se_needed = scenario.d_tot / (samples * scenario.b_max);
    const double p_dt =
        scenario.b_max * scenario.noise_psd * mean_loss * (std::exp2(se_needed) - 1.0);

    const PowerModel& pm = scenario.power_model;
    const double circuit = pm.p_circuit * scenario.n_bs;
    IreeBounds b;
    b.p_dt = p_dt;
    b.mean_loss = mean_loss;
    b.lower = scenario.d_tot * (1.0 - xi_bar) / (pm.lambda * scenario.p_max + circuit);
    b.upper = scenario.d_tot * (1.0 - xi_bar) / (pm.lambda * p_dt + circuit);
    return b;
}

BoundsCheck check_bounds(const DinkelbachTrace& trace, const Scenario& scenario) {
    BoundsCheck out;
    if (trace.iterations.empty()) return out;
    const DinkelbachIteration& last = trace.iterations.back();
    if (!(last.report.c_tot >= last.report.d_tot)) return out;  // Lemma 2 premise

    out.applicable = true;
    out.eta_star = last.eta_next;
    out.bounds = iree_bounds(scenario, last.report.xi);
    const double tol = 1e-6 * out.bounds.upper;
    out.pass = out.bounds.lower - tol <= out.eta_star && out.eta_star <= out.bounds.upper + tol;
    return out;
}

GapReport optimality_gap_bound(const NetworkDesign& design, const Scenario& scenario) {
    const ScalarField cs = capacity_field(design, scenario, CapacityModel::lower_bound);
    const ScalarField ct = capacity_field(design, scenario, CapacityModel::exact);
    const double p_t = power_total(design, scenario.power_model);
    const double d_tot = scenario.d_tot;

    GapReport g;
    g.c_s_tot = total(cs);
    g.c_t_tot = total(ct);
    g.xi_s = js_divergence(cs, scenario.traffic);
    g.xi_t = js_divergence(ct, scenario.traffic);
    g.xi_st = js_divergence(cs, ct);
    g.eta_s = std::min(g.c_s_tot, d_tot) * (1.0 - g.xi_s) / p_t;
    g.eta_t = std::min(g.c_t_tot, d_tot) * (1.0 - g.xi_t) / p_t;
    g.measured_gap = std::abs(g.eta_t - g.eta_s);

    if (g.c_s_tot <= d_tot) {
        g.bound = ((1.0 - g.xi_s) * (g.c_t_tot - g.c_s_tot) + g.xi_st * g.c_t_tot) /
                  ((1.0 - g.xi_s + g.xi_st) * p_t);
    } else {
        g.bound = d_tot * g.xi_st / p_t;
    }
    return g;
}

SmoothnessCriterion smoothness_criterion(const NetworkDesign& design, const Point2D& loc,
                                         double l0, double l1, const Scenario& scenario) {
    design.validate();
    if (!(l0 >= 0.0) || !(l1 >= 0.0))
        throw invalid_input("smoothness_criterion: L0 and L1 must be >= 0");

    double lhs = 0.0;
    double rhs = -scenario.p_max;
    const double b_sigma = scenario.b_max * scenario.noise_psd;
    for (const auto& bs : design.stations) {
        const double loss = detail::path_loss_raw(loc, bs.location, bs.loss);
        lhs += b_sigma * loss;  // Lambda_n
        const double bl1 = bs.bandwidth * l1;
        rhs += 2.0 * bs.bandwidth / (std::sqrt(bl1 * bl1 + 4.0 * kLn2 * l0) + bl1);
    }

    SmoothnessCriterion out;
    out.margin = lhs - rhs;
    out.satisfied = out.margin >= 0.0;
    return out;
}

double complexity_estimate(const Scenario& scenario, const DinkelbachConfig& config) {
    const double n = static_cast<double>(scenario.n_bs);
    const double m = static_cast<double>(scenario.grid->size());
    const double epochs = static_cast<double>(config.inner.n_epoch);
    const double iters = static_cast<double>(config.max_iterations);
    return epochs * iters * (n * n + m * n);
}

}  // namespace greennet
