#include "greennet/propagation.hpp"

namespace greennet {

double path_loss(const Point2D& loc, const Point2D& bs_loc, const PathLossParams& params) {
    if (!loc.finite() || !bs_loc.finite())
        throw invalid_input("path_loss: non-finite coordinates");
    params.validate();
    return detail::path_loss_raw(loc, bs_loc, params);
}

double se_rbf(const BaseStation& bs, const Point2D& loc, const RadioEnv& env) {
    if (!(env.b_max > 0.0)) throw invalid_input("se_rbf: b_max must be > 0");
    if (!(env.noise_psd > 0.0)) throw invalid_input("se_rbf: noise_psd must be > 0");
    const double loss = path_loss(loc, bs.location, bs.loss);
    return detail::se_rbf_raw(bs.tx_power, loss, env);
}

double capacity_lower_bound(const NetworkDesign& design, const Point2D& loc,
                            const RadioEnv& env) {
    design.validate();
    double sum = 0.0;
    for (const auto& bs : design.stations) sum += bs.bandwidth * se_rbf(bs, loc, env);
    return sum;
}

double capacity_exact(const NetworkDesign& design, const Point2D& loc, const RadioEnv& env) {
    design.validate();
    if (!(env.noise_psd > 0.0)) throw invalid_input("capacity_exact: noise_psd must be > 0");
    double sum = 0.0;
    for (const auto& bs : design.stations) {
        const double loss = path_loss(loc, bs.location, bs.loss);
        sum += detail::shannon_term_raw(bs.bandwidth, bs.tx_power, loss, env.noise_psd);
    }
    return sum;
}

}  // namespace greennet
