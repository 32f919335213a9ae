#include "greennet/shadowing.hpp"

#include <cmath>

#include "greennet/reduce.hpp"
#include "greennet/traffic.hpp"

namespace greennet {

ShadowingStats shadowing_eval(const NetworkDesign& design, const Scenario& scenario,
                              double sigma_db, int n_draws, std::uint64_t seed,
                              CapacityModel model) {
    design.validate();
    scenario.validate();
    if (!(sigma_db >= 0.0)) throw invalid_input("shadowing: sigma must be >= 0");
    if (n_draws < 1) throw invalid_input("shadowing: need at least one draw");

    const auto& grid = *scenario.grid;
    const std::size_t m = grid.size();
    const std::size_t n = design.size();
    const RadioEnv env = scenario.radio();

    // All shadow factors are drawn up front in a fixed order (draw, station,
    // sample) so evaluation order cannot affect the result.
    std::vector<double> factors(static_cast<std::size_t>(n_draws) * n * m);
    {
        detail::NormalStream rng(seed);
        const double k = sigma_db / 10.0;
        for (double& f : factors) f = std::pow(10.0, k * rng.normal());
    }

    std::vector<MetricReport> reports(n_draws);
    const auto draws = static_cast<std::ptrdiff_t>(n_draws);
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t d = 0; d < draws; ++d) {
        const double* fd = factors.data() + static_cast<std::size_t>(d) * n * m;
        ScalarField c;
        c.grid = scenario.grid;
        c.values.resize(m);
        const double inv_w = 1.0 / grid.weight;
        for (std::size_t i = 0; i < m; ++i) {
            double cap = 0.0;
            for (std::size_t s = 0; s < n; ++s) {
                const auto& bs = design.stations[s];
                const double loss =
                    detail::path_loss_raw(grid.points[i], bs.location, bs.loss) *
                    fd[s * m + i];
                if (model == CapacityModel::lower_bound)
                    cap += bs.bandwidth * detail::se_rbf_raw(bs.tx_power, loss, env);
                else
                    cap += detail::shannon_term_raw(bs.bandwidth, bs.tx_power, loss,
                                                    env.noise_psd);
            }
            c.values[i] = cap * inv_w;
        }

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
        reports[d] = rep;
    }

    const auto stat = [&](double MetricReport::*field, double& mean_out, double& std_out) {
        std::vector<double> vals(reports.size());
        for (std::size_t i = 0; i < reports.size(); ++i) vals[i] = reports[i].*field;
        const double mean = pairwise_sum(vals.data(), vals.size()) / vals.size();
        double var = 0.0;
        if (vals.size() > 1) {
            for (double v : vals) var += (v - mean) * (v - mean);
            var /= static_cast<double>(vals.size() - 1);
        }
        mean_out = mean;
        std_out = std::sqrt(var);
    };

    ShadowingStats out;
    out.n_draws = n_draws;
    out.sigma_db = sigma_db;
    stat(&MetricReport::c_tot, out.mean.c_tot, out.stddev.c_tot);
    stat(&MetricReport::d_tot, out.mean.d_tot, out.stddev.d_tot);
    stat(&MetricReport::xi, out.mean.xi, out.stddev.xi);
    stat(&MetricReport::zeta, out.mean.zeta, out.stddev.zeta);
    stat(&MetricReport::p_t, out.mean.p_t, out.stddev.p_t);
    stat(&MetricReport::iree, out.mean.iree, out.stddev.iree);
    stat(&MetricReport::ee, out.mean.ee, out.stddev.ee);
    stat(&MetricReport::se, out.mean.se, out.stddev.se);
    return out;
}

}  // namespace greennet
