#include "greennet/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace greennet {

TrainerState TrainerState::fresh(ParamVector params, std::vector<double> scales) {
    TrainerState s;
    s.first_moment.assign(params.values.size(), 0.0);
    s.second_moment.assign(params.values.size(), 0.0);
    if (scales.empty()) scales.assign(params.values.size(), 1.0);
    if (scales.size() != params.values.size())
        throw invalid_input("trainer: scales length does not match params");
    s.scales = std::move(scales);
    s.params = std::move(params);
    return s;
}

void adam_step(TrainerState& state, std::span<const double> gradient, const AdamConfig& config) {
    config.validate();
    const std::size_t n = state.params.values.size();
    if (gradient.size() != n) throw invalid_input("adam: gradient length mismatch");
    if (state.first_moment.size() != n || state.second_moment.size() != n ||
        state.scales.size() != n)
        throw invalid_input("adam: state buffers out of sync");

    state.step_count += 1;
    const double c1 = 1.0 - std::pow(config.beta1, static_cast<double>(state.step_count));
    const double c2 = 1.0 - std::pow(config.beta2, static_cast<double>(state.step_count));

    const ParamLayout& lay = state.params.layout;
    for (std::size_t i = 0; i < n; ++i) {
        double g = gradient[i] * state.scales[i];  // gradient w.r.t. scaled coordinate
        if (config.freeze_locations && i < 2 * static_cast<std::size_t>(lay.n_bs)) g = 0.0;
        double& m = state.first_moment[i];
        double& v = state.second_moment[i];
        m = config.beta1 * m + (1.0 - config.beta1) * g;
        v = config.beta2 * v + (1.0 - config.beta2) * g * g;
        const double m_hat = m / c1;
        const double v_hat = v / c2;
        state.params.values[i] -=
            config.learning_rate * m_hat / (std::sqrt(v_hat) + config.epsilon) *
            state.scales[i];
    }
    state.params.apply_floors();
}

namespace {

double power_block_norm(const std::vector<double>& grad, const ParamLayout& lay) {
    double sq = 0.0;
    for (int n = 0; n < lay.n_bs; ++n) {
        const double g = grad[lay.pw(n)];
        sq += g * g;
    }
    return std::sqrt(sq);
}

}  // namespace

TrainResult train_loop(TrainerState state, const LossGradFn& fn, const AdamConfig& config,
                       const ScoreFn& score, const StopFn& stop_early) {
    config.validate();
    TrainResult out;
    out.best_score = std::numeric_limits<double>::infinity();
    out.best_params = state.params;
    out.trace.reserve(config.n_epoch);

    const auto scored = [&](const LossEval& eval) {
        return score ? score(eval) : eval.breakdown.total;
    };

    for (int epoch = 1; epoch <= config.n_epoch; ++epoch) {
        LossEval eval;
        try {
            eval = fn(state.params);
        } catch (const invalid_input& e) {
            throw training_abort(epoch, std::string("training aborted: ") + e.what());
        }

        EpochRecord rec;
        rec.epoch = epoch;
        rec.loss = eval.breakdown;
        rec.g1_norm = power_block_norm(eval.gradient, state.params.layout);
        out.trace.push_back(rec);

        const double s = scored(eval);
        if (s < out.best_score) {
            out.best_score = s;
            out.best_params = state.params;
        }
        if (config.snapshot_stride > 0 && (epoch - 1) % config.snapshot_stride == 0)
            out.snapshots.push_back(state.params);

        adam_step(state, eval.gradient, config);

        if (stop_early && stop_early(out.trace)) break;
    }

    // The final post-step iterate is a candidate too.
    try {
        const LossEval eval = fn(state.params);
        const double s = scored(eval);
        if (s < out.best_score) {
            out.best_score = s;
            out.best_params = state.params;
        }
        if (config.snapshot_stride > 0) out.snapshots.push_back(state.params);
    } catch (const invalid_input& e) {
        throw training_abort(config.n_epoch, std::string("training aborted: ") + e.what());
    }

    out.state = std::move(state);
    return out;
}

namespace {

LossGradFn bind_loss(LossEvaluator& evaluator, ObjectiveKind objective, double eta,
                     double omega) {
    const LossSettings settings{objective, eta, omega};
    return [&evaluator, settings](const ParamVector& p) { return evaluator(p, settings, true); };
}

}  // namespace

TrainResult train_stage(TrainerState state, double eta, double omega, LossEvaluator& evaluator,
                        const AdamConfig& config, ObjectiveKind objective) {
    return train_loop(std::move(state), bind_loss(evaluator, objective, eta, omega), config);
}

TrainResult two_stage_train(TrainerState state, double eta, LossEvaluator& evaluator,
                            const AdamConfig& config, const StageSchedule& schedule,
                            ObjectiveKind objective) {
    config.validate();
    schedule.validate();
    const Scenario& sc = evaluator.scenario();

    // Score every iterate with the stage-2 penalty so stages are comparable.
    const double omega2 = schedule.omega_stage2;
    const ScoreFn score = [omega2, &sc](const LossEval& eval) {
        const double penalty = eval.residuals.d_zeta +
                               eval.residuals.d_bandwidth / sc.b_max +
                               eval.residuals.d_power / sc.p_max;
        return eval.breakdown.utility_term + eval.breakdown.power_term + omega2 * penalty;
    };

    const int stage1_epochs =
        std::clamp(static_cast<int>(std::lround(schedule.stage1_fraction * config.n_epoch)), 0,
                   config.n_epoch);

    StopFn plateau;
    if (schedule.use_plateau) {
        const int window = schedule.plateau_window;
        const double tol = schedule.plateau_tol;
        plateau = [window, tol](const std::vector<EpochRecord>& trace) {
            const int e = static_cast<int>(trace.size());
            if (e <= window) return false;
            const double now = trace[e - 1].loss.total;
            const double then = trace[e - 1 - window].loss.total;
            return std::abs(now - then) < tol * std::max(std::abs(then), 1e-30);
        };
    }

    TrainResult out;
    out.best_score = std::numeric_limits<double>::infinity();
    out.best_params = state.params;

    if (stage1_epochs > 0) {
        AdamConfig c1 = config;
        c1.n_epoch = stage1_epochs;
        TrainResult r1 = train_loop(std::move(state), bind_loss(evaluator, objective, eta, 0.0),
                                    c1, score, plateau);
        out.trace = std::move(r1.trace);
        out.snapshots = std::move(r1.snapshots);
        out.best_score = r1.best_score;
        out.best_params = std::move(r1.best_params);
        state = std::move(r1.state);  // stage 2 continues the trajectory
    }

    const int stage2_epochs = config.n_epoch - static_cast<int>(out.trace.size());
    if (stage2_epochs > 0) {
        AdamConfig c2 = config;
        c2.n_epoch = stage2_epochs;
        TrainResult r2 = train_loop(std::move(state),
                                    bind_loss(evaluator, objective, eta, omega2), c2, score);
        const int offset = static_cast<int>(out.trace.size());
        for (auto& rec : r2.trace) {
            rec.epoch += offset;
            out.trace.push_back(rec);
        }
        for (auto& snap : r2.snapshots) out.snapshots.push_back(std::move(snap));
        if (r2.best_score < out.best_score) {
            out.best_score = r2.best_score;
            out.best_params = std::move(r2.best_params);
        }
        state = std::move(r2.state);
    }

    out.state = std::move(state);
    return out;
}

SmoothnessReport smoothness_diagnostic(const std::vector<ParamVector>& trajectory, double eta,
                                       double omega, const Scenario& scenario) {
    LossEvaluator eval(scenario);
    const LossSettings settings{ObjectiveKind::iree, eta, omega};
    std::vector<SmoothnessPair> pairs;
    pairs.reserve(trajectory.size());
    for (const auto& params : trajectory) {
        SmoothnessPair p;
        const LossEval e = eval(params, settings, true);
        double sq = 0.0;
        for (int n = 0; n < params.layout.n_bs; ++n) {
            const double g = e.gradient[params.layout.pw(n)];
            sq += g * g;
        }
        p.g1 = std::sqrt(sq);
        p.g2 = second_order_norm(params, eta, omega, scenario);
        pairs.push_back(p);
    }
    return classify_smoothness(std::move(pairs));
}

namespace {

// R^2 of an ordinary least-squares line y = a + b x.
double r2_line(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    if (n < 2) return 0.0;
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (syy < 1e-300) return 1.0;  // flat data: perfectly explained
    if (sxx < 1e-300) return 0.0;
    const double b = sxy / sxx;
    const double ss_res = syy - b * sxy;
    return 1.0 - ss_res / syy;
}

// R^2 of the best continuous two-segment fit y = a + b x + c (x - t)+ over a
// grid of candidate breakpoints t.
double r2_hinge(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    if (n < 4) return r2_line(x, y);

    std::vector<double> sorted_x = x;
    std::sort(sorted_x.begin(), sorted_x.end());

    double sy = 0, syy = 0;
    for (double v : y) sy += v;
    const double my = sy / n;
    for (double v : y) syy += (v - my) * (v - my);
    if (syy < 1e-300) return 1.0;

    double best_r2 = r2_line(x, y);
    for (int qi = 1; qi < 20; ++qi) {
        const double t = sorted_x[sorted_x.size() * qi / 20];
        // Normal equations for basis {1, x, (x-t)+}.
        double a00 = 0, a01 = 0, a02 = 0, a11 = 0, a12 = 0, a22 = 0;
        double b0 = 0, b1 = 0, b2 = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const double h = std::max(x[i] - t, 0.0);
            a00 += 1.0;
            a01 += x[i];
            a02 += h;
            a11 += x[i] * x[i];
            a12 += x[i] * h;
            a22 += h * h;
            b0 += y[i];
            b1 += x[i] * y[i];
            b2 += h * y[i];
        }
        // 3x3 solve by Cramer's rule; skip singular candidates.
        const double det = a00 * (a11 * a22 - a12 * a12) - a01 * (a01 * a22 - a12 * a02) +
                           a02 * (a01 * a12 - a11 * a02);
        if (std::abs(det) < 1e-12 * std::max({a00, a11, a22, 1.0})) continue;
        const double ca = (b0 * (a11 * a22 - a12 * a12) - a01 * (b1 * a22 - a12 * b2) +
                           a02 * (b1 * a12 - a11 * b2)) /
                          det;
        const double cb = (a00 * (b1 * a22 - b2 * a12) - b0 * (a01 * a22 - a12 * a02) +
                           a02 * (a01 * b2 - b1 * a02)) /
                          det;
        const double cc = (a00 * (a11 * b2 - b1 * a12) - a01 * (a01 * b2 - b1 * a02) +
                           b0 * (a01 * a12 - a11 * a02)) /
                          det;
        double ss_res = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double h = std::max(x[i] - t, 0.0);
            const double r = y[i] - (ca + cb * x[i] + cc * h);
            ss_res += r * r;
        }
        best_r2 = std::max(best_r2, 1.0 - ss_res / syy);
    }
    return best_r2;
}

}  // namespace

SmoothnessReport classify_smoothness(std::vector<SmoothnessPair> pairs) {
    SmoothnessReport report;
    report.pairs = std::move(pairs);

    std::vector<double> x, y_linear;
    std::vector<double> x_log, y_log;
    for (const auto& p : report.pairs) {
        if (!std::isfinite(p.g1) || !std::isfinite(p.g2)) continue;
        x.push_back(p.g1);
        y_linear.push_back(p.g2);
        if (p.g2 > 0.0) {
            x_log.push_back(p.g1);
            y_log.push_back(std::log(p.g2));
        }
    }
    report.r2_exponential = r2_line(x_log, y_log);
    report.r2_piecewise = r2_hinge(x, y_linear);
    report.relation = report.r2_piecewise >= report.r2_exponential
                          ? RelationClass::piecewise_linear
                          : RelationClass::exponential_like;
    return report;
}

}  // namespace greennet
