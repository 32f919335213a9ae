#include "greennet/metrics.hpp"

#include <algorithm>

#include "greennet/reduce.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace greennet {

namespace {

constexpr double kLogFloor = 1e-300;  // applied inside logs only

inline double log2_floored(double x) { return std::log2(std::max(x, kLogFloor)); }

}  // namespace

void Scenario::validate() const {
    if (!grid || grid->size() < 2) throw invalid_input("scenario: missing grid");
    traffic.validate();
    if (traffic.grid != grid) throw invalid_input("scenario: traffic field on a different grid");
    if (!(b_max > 0.0)) throw invalid_input("scenario: b_max must be > 0");
    if (!(p_max > 0.0)) throw invalid_input("scenario: p_max must be > 0");
    if (!(zeta_min >= 0.0 && zeta_min <= 1.0))
        throw invalid_input("scenario: zeta_min must be in [0,1]");
    if (!(noise_psd > 0.0)) throw invalid_input("scenario: noise_psd must be > 0");
    power_model.validate();
    if (n_bs < 1) throw invalid_input("scenario: need at least one BS");
    loss_defaults.validate();
    if (!(d_tot > 0.0)) throw invalid_input("scenario: traffic total must be > 0");
}

double js_divergence(const ScalarField& c, const ScalarField& d) {
    c.validate();
    d.validate();
    if (c.values.size() != d.values.size())
        throw length_mismatch("js_divergence: fields have different lengths");

    const double c_tot = total(c);
    const double d_tot = total(d);
    if (!(c_tot > 0.0) || !(d_tot > 0.0))
        throw undefined_divergence("js_divergence: zero-total field");

    const std::size_t m = c.values.size();
    const double wc = c.grid->weight / c_tot;
    const double wd = d.grid->weight / d_tot;
    std::vector<double> terms(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double p = c.values[i] * wc;
        const double q = d.values[i] * wd;
        const double mix = 0.5 * (p + q);
        double t = 0.0;
        if (p > 0.0) t += 0.5 * p * log2_floored(p / mix);  // 0*log0 := 0
        if (q > 0.0) t += 0.5 * q * log2_floored(q / mix);
        terms[i] = t;
    }
    const double xi = pairwise_sum(terms.data(), m);
    return std::clamp(xi, 0.0, 1.0);
}

double power_total(const NetworkDesign& design, const PowerModel& model) {
    design.validate();
    model.validate();
    double sum = 0.0;
    for (const auto& bs : design.stations) sum += model.lambda * bs.tx_power + model.p_circuit;
    return sum;
}

ScalarField capacity_field(const NetworkDesign& design, const Scenario& scenario,
                           CapacityModel model) {
    design.validate();
    const auto& grid = *scenario.grid;
    const RadioEnv env = scenario.radio();

    ScalarField field;
    field.grid = scenario.grid;
    field.values.resize(grid.size());
    const double inv_w = 1.0 / grid.weight;

    const auto n = static_cast<std::ptrdiff_t>(grid.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        double c = 0.0;
        for (const auto& bs : design.stations) {
            const double loss = detail::path_loss_raw(grid.points[i], bs.location, bs.loss);
            if (model == CapacityModel::lower_bound)
                c += bs.bandwidth * detail::se_rbf_raw(bs.tx_power, loss, env);
            else
                c += detail::shannon_term_raw(bs.bandwidth, bs.tx_power, loss, env.noise_psd);
        }
        field.values[i] = c * inv_w;
    }
    return field;
}

double iree(const ScalarField& c_field, const ScalarField& d_field,
            const NetworkDesign& design, const Scenario& scenario) {
    const double c_tot = total(c_field);
    const double d_tot = total(d_field);
    const double xi = js_divergence(c_field, d_field);
    const double p_t = power_total(design, scenario.power_model);
    return std::min(c_tot, d_tot) * (1.0 - xi) / p_t;
}

double utility_indicator(const ScalarField& c_field, const ScalarField& d_field) {
    const double c_tot = total(c_field);
    const double d_tot = total(d_field);
    const double xi = js_divergence(c_field, d_field);
    return std::min(c_tot, d_tot) * (1.0 - xi) / d_tot;
}

double given_iree_utility(const NetworkDesign& design, const Scenario& scenario, double eta) {
    const ScalarField c = capacity_field(design, scenario, CapacityModel::lower_bound);
    const double c_tot = total(c);
    const double xi = js_divergence(c, scenario.traffic);
    const double p_t = power_total(design, scenario.power_model);
    return std::min(c_tot, scenario.d_tot) * (1.0 - xi) - eta * p_t;
}

FeasibilityResidual feasibility_residual(const NetworkDesign& design, const Scenario& scenario) {
    design.validate();
    double b_sum = 0.0;
    double p_sum = 0.0;
    for (const auto& bs : design.stations) {
        b_sum += bs.bandwidth;
        p_sum += bs.tx_power;
    }
    const ScalarField c = capacity_field(design, scenario, CapacityModel::lower_bound);
    const double zeta = utility_indicator(c, scenario.traffic);
    FeasibilityResidual r;
    r.d_zeta = std::max(scenario.zeta_min - zeta, 0.0);
    r.d_bandwidth = std::max(b_sum - scenario.b_max, 0.0);
    r.d_power = std::max(p_sum - scenario.p_max, 0.0);
    return r;
}

MetricReport report_for_design(const NetworkDesign& design, const Scenario& scenario,
                               CapacityModel model) {
    const ScalarField c = capacity_field(design, scenario, model);
    MetricReport rep;
    rep.c_tot = total(c);
    rep.d_tot = scenario.d_tot;
    rep.xi = js_divergence(c, scenario.traffic);
    rep.p_t = power_total(design, scenario.power_model);
    const double matched = std::min(rep.c_tot, rep.d_tot) * (1.0 - rep.xi);
    rep.zeta = matched / rep.d_tot;
    rep.iree = matched / rep.p_t;
    rep.ee = rep.c_tot / rep.p_t;
    rep.se = rep.c_tot / scenario.b_max;
    return rep;
}

}  // namespace greennet
