#include "greennet/loss.hpp"

#include <algorithm>
#include <cmath>

#include "greennet/reduce.hpp"

namespace greennet {

namespace {

constexpr double kLn2 = 0.69314718055994530942;
constexpr double kLogFloor = 1e-300;

inline double log2_floored(double x) { return std::log2(std::max(x, kLogFloor)); }

}  // namespace

LossEvaluator::LossEvaluator(const Scenario& scenario, EvalBackend backend)
    : scenario_(&scenario), backend_(backend) {
    scenario.validate();
    const std::size_t m = scenario.grid->size();
    traffic_mass_.resize(m);
    const double k = scenario.grid->weight / scenario.d_tot;
    for (std::size_t i = 0; i < m; ++i) traffic_mass_[i] = scenario.traffic.values[i] * k;
    u_.resize(m);
    coef_.resize(m);
    scratch_.resize(m);
}

LossEval LossEvaluator::operator()(const ParamVector& params, const LossSettings& settings,
                                   bool with_grad) {
    if (!params.finite()) throw invalid_input("loss: non-finite parameter");
    if (!std::isfinite(settings.eta) || !std::isfinite(settings.omega))
        throw invalid_input("loss: non-finite eta/omega");

    ++eval_count_;

    const Scenario& sc = *scenario_;
    const ParamLayout& lay = params.layout;
    const int n_bs = lay.n_bs;
    const std::size_t m = sc.grid->size();
    const bool par = backend_ == EvalBackend::openmp;
    const bool iree_objective = settings.objective == ObjectiveKind::iree;

    const std::size_t nm = static_cast<std::size_t>(n_bs) * m;
    if (se_.size() != nm) {
        se_.resize(nm);
        inv_ppl_.resize(nm);
        pos_x_.resize(nm);
        pos_y_.resize(nm);
    }

    const PathLossParams& pl = sc.loss_defaults;
    const double alpha = pl.alpha, beta = pl.beta, gamma = pl.gamma;
    const double b_sigma = sc.b_max * sc.noise_psd;  // B_max * sigma^2
    const double inv_dtot = 1.0 / sc.d_tot;

    // Forward pass: RBF values, capacity masses and (if needed) the per-term
    // derivative factors, all written element-wise into fixed slots.
    const auto msz = static_cast<std::ptrdiff_t>(m);
#pragma omp parallel for schedule(static) if (par)
    for (std::ptrdiff_t i = 0; i < msz; ++i) {
        const Point2D loc = sc.grid->points[i];
        double cap = 0.0;
        for (int n = 0; n < n_bs; ++n) {
            const double dx = loc.x - params.x(n);
            const double dy = loc.y - params.y(n);
            const double q = pl.shape[0][0] * dx * dx + 2.0 * pl.shape[0][1] * dx * dy +
                             pl.shape[1][1] * dy * dy;
            const double q_pow = std::pow(q, 0.5 * alpha - 1.0);  // q^(a/2-1), 0 at q=0
            const double L = gamma * q_pow * q + beta;            // gamma*q^(a/2) + beta
            const double lam = b_sigma * L;
            const double p_n = params.pw(n);
            const double s = std::log2(1.0 + p_n / lam);
            const std::size_t idx = static_cast<std::size_t>(n) * m + i;
            se_[idx] = s;
            if (with_grad) {
                inv_ppl_[idx] = 1.0 / (kLn2 * (p_n + lam));
                const double pc = p_n * gamma * alpha * q_pow / (kLn2 * L * (lam + p_n));
                pos_x_[idx] = pc * (pl.shape[0][0] * dx + pl.shape[0][1] * dy);
                pos_y_[idx] = pc * (pl.shape[1][0] * dx + pl.shape[1][1] * dy);
            }
            cap += params.bw(n) * s;
        }
        u_[i] = cap * inv_dtot;
    }

    const double c_scaled = pairwise_sum(u_.data(), m);

    // JS divergence of the scaled masses (p_m = u_m / C~, q_m = traffic mass).
    double xi = 0.0;
    double kl_p = 0.0;  // KL(p || mix) in bits
    if (iree_objective) {
        const double inv_c = 1.0 / c_scaled;
#pragma omp parallel for schedule(static) if (par)
        for (std::ptrdiff_t i = 0; i < msz; ++i) {
            const double p = u_[i] * inv_c;
            const double q = traffic_mass_[i];
            const double mix = 0.5 * (p + q);
            const double plp = p > 0.0 ? p * log2_floored(p / mix) : 0.0;
            const double qlq = q > 0.0 ? q * log2_floored(q / mix) : 0.0;
            scratch_[i] = 0.5 * (plp + qlq);
            coef_[i] = plp;
        }
        xi = std::clamp(pairwise_sum(scratch_.data(), m), 0.0, 1.0);
        kl_p = pairwise_sum(coef_.data(), m);
    }

    double b_sum = 0.0, p_sum = 0.0;
    for (int n = 0; n < n_bs; ++n) {
        b_sum += params.bw(n);
        p_sum += params.pw(n);
    }
    const double p_total = sc.power_model.lambda * p_sum + sc.power_model.p_circuit * n_bs;

    const bool c_branch = c_scaled <= 1.0;  // min{C,D} takes the C branch at ties
    const double min_cd = c_branch ? c_scaled : 1.0;
    const double zeta = min_cd * (1.0 - xi);

    LossEval out;
    out.c_scaled = c_scaled;
    out.xi = xi;
    out.zeta = zeta;
    out.residuals.d_zeta = iree_objective ? std::max(sc.zeta_min - zeta, 0.0) : 0.0;
    out.residuals.d_bandwidth = std::max(b_sum - sc.b_max, 0.0);
    out.residuals.d_power = std::max(p_sum - sc.p_max, 0.0);

    const double eta_scaled = settings.objective == ObjectiveKind::se
                                  ? 0.0
                                  : settings.eta * sc.p_max / sc.d_tot;
    const double p_scaled = p_total / sc.p_max;
    const double omega_sum = out.residuals.d_zeta + out.residuals.d_bandwidth / sc.b_max +
                             out.residuals.d_power / sc.p_max;

    out.breakdown.utility_term = iree_objective ? -zeta : -c_scaled;
    out.breakdown.power_term = eta_scaled * p_scaled;
    out.breakdown.penalty_term = settings.omega * omega_sum;
    out.breakdown.total =
        out.breakdown.utility_term + out.breakdown.power_term + out.breakdown.penalty_term;
    if (!std::isfinite(out.breakdown.total))
        throw invalid_input("loss: non-finite loss value");

    if (!with_grad) return out;

    // Per-sample utility coefficients gn_m = d(utility)/d(u_m).
    if (iree_objective) {
        const double inv_c = 1.0 / c_scaled;
        const double branch = c_branch ? (1.0 - xi) : 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            const double p = u_[i] * inv_c;
            const double q = traffic_mass_[i];
            const double mix = 0.5 * (p + q);
            const double dxi_dp = 0.5 * log2_floored(p / mix);
            const double dxi_du = (dxi_dp - 0.5 * kl_p) * inv_c;
            coef_[i] = branch - min_cd * dxi_du;
        }
    } else {
        std::fill(coef_.begin(), coef_.end(), 1.0);
    }

    // Subgradient convention: max{u,0} contributes only when strictly violated.
    const double w_zeta =
        (iree_objective && out.residuals.d_zeta > 0.0) ? settings.omega : 0.0;
    const double util_weight = 1.0 + w_zeta;  // zeta is the scaled utility itself
    const double w_bw = out.residuals.d_bandwidth > 0.0 ? settings.omega / sc.b_max : 0.0;
    const double w_pw = out.residuals.d_power > 0.0 ? settings.omega / sc.p_max : 0.0;
    const double power_grad = eta_scaled * sc.power_model.lambda / sc.p_max;

    if (grad_terms_.size() != 4 * nm) grad_terms_.resize(4 * nm);
    double* tb = grad_terms_.data();           // bandwidth terms
    double* tp = grad_terms_.data() + nm;      // power terms
    double* tx = grad_terms_.data() + 2 * nm;  // location-x terms
    double* ty = grad_terms_.data() + 3 * nm;  // location-y terms

#pragma omp parallel for schedule(static) if (par)
    for (std::ptrdiff_t i = 0; i < msz; ++i) {
        const double k = coef_[i];
        for (int n = 0; n < n_bs; ++n) {
            const std::size_t idx = static_cast<std::size_t>(n) * m + i;
            tb[idx] = k * se_[idx];
            tp[idx] = k * inv_ppl_[idx];
            tx[idx] = k * pos_x_[idx];
            ty[idx] = k * pos_y_[idx];
        }
    }

    out.gradient.assign(lay.size(), 0.0);
    const auto nbs_sz = static_cast<std::ptrdiff_t>(n_bs);
#pragma omp parallel for schedule(static) if (par)
    for (std::ptrdiff_t n = 0; n < nbs_sz; ++n) {
        const int ni = static_cast<int>(n);
        const double bn = params.bw(ni);
        const std::size_t row = static_cast<std::size_t>(n) * m;
        const double scale = util_weight * inv_dtot;
        out.gradient[lay.x(ni)] = -scale * bn * pairwise_sum(tx + row, m);
        out.gradient[lay.y(ni)] = -scale * bn * pairwise_sum(ty + row, m);
        out.gradient[lay.bw(ni)] = -scale * pairwise_sum(tb + row, m) + w_bw;
        out.gradient[lay.pw(ni)] =
            -scale * bn * pairwise_sum(tp + row, m) + power_grad + w_pw;
    }

    return out;
}

LossBreakdown loss(const ParamVector& params, double eta, double omega,
                   const Scenario& scenario) {
    LossEvaluator eval(scenario);
    return eval(params, {ObjectiveKind::iree, eta, omega}, false).breakdown;
}

std::vector<double> grad_loss(const ParamVector& params, double eta, double omega,
                              const Scenario& scenario) {
    LossEvaluator eval(scenario);
    return eval(params, {ObjectiveKind::iree, eta, omega}, true).gradient;
}

std::vector<double> finite_diff_grad(const ParamVector& params, double eta, double omega,
                                     const Scenario& scenario, double step) {
    LossEvaluator eval(scenario, EvalBackend::serial);
    const LossSettings settings{ObjectiveKind::iree, eta, omega};
    ParamVector probe = params;
    std::vector<double> grad(params.values.size());
    for (std::size_t i = 0; i < params.values.size(); ++i) {
        const double saved = probe.values[i];
        const double h = step * (1.0 + std::abs(saved));
        probe.values[i] = saved + h;
        const double up = eval(probe, settings, false).breakdown.total;
        probe.values[i] = saved - h;
        const double down = eval(probe, settings, false).breakdown.total;
        probe.values[i] = saved;
        grad[i] = (up - down) / (2.0 * h);
    }
    return grad;
}

double second_order_norm(const ParamVector& params, double eta, double omega,
                         const Scenario& scenario, double step) {
    LossEvaluator eval(scenario);
    const LossSettings settings{ObjectiveKind::iree, eta, omega};
    const ParamLayout& lay = params.layout;
    ParamVector probe = params;
    double sq = 0.0;
    for (int n = 0; n < lay.n_bs; ++n) {
        const std::size_t i = lay.pw(n);
        const double saved = probe.values[i];
        const double h = step * (1.0 + std::abs(saved));
        probe.values[i] = saved + h;
        const double up = eval(probe, settings, true).gradient[i];
        probe.values[i] = saved - h;
        const double down = eval(probe, settings, true).gradient[i];
        probe.values[i] = saved;
        const double d2 = (up - down) / (2.0 * h);
        sq += d2 * d2;
    }
    return std::sqrt(sq);
}

namespace fd {

std::vector<double> gradient(const std::function<double(const std::vector<double>&)>& f,
                             std::vector<double> x, double step) {
    std::vector<double> g(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double saved = x[i];
        const double h = step * (1.0 + std::abs(saved));
        x[i] = saved + h;
        const double up = f(x);
        x[i] = saved - h;
        const double down = f(x);
        x[i] = saved;
        g[i] = (up - down) / (2.0 * h);
    }
    return g;
}

double second_difference(const std::function<double(const std::vector<double>&)>& f,
                         std::vector<double> x, std::size_t i, double step) {
    const double saved = x[i];
    const double h = step * (1.0 + std::abs(saved));
    const double mid = f(x);
    x[i] = saved + h;
    const double up = f(x);
    x[i] = saved - h;
    const double down = f(x);
    return (up - 2.0 * mid + down) / (h * h);
}

}  // namespace fd

}  // namespace greennet
