#include "greennet/dinkelbach.hpp"

#include <cmath>

#include "greennet/traffic.hpp"

namespace greennet {

double update_iree(const NetworkDesign& design, const Scenario& scenario) {
    const ScalarField c = capacity_field(design, scenario, CapacityModel::lower_bound);
    return iree(c, scenario.traffic, design, scenario);
}

double optimal_condition_residual(const NetworkDesign& design, const Scenario& scenario,
                                  double eta) {
    return given_iree_utility(design, scenario, eta);
}

ParamVector initial_params(const Scenario& scenario, std::uint64_t seed) {
    scenario.validate();
    detail::NormalStream rng(seed);
    ParamVector p;
    p.layout.n_bs = scenario.n_bs;
    p.values.resize(p.layout.size());
    for (int n = 0; n < scenario.n_bs; ++n) {
        p.values[p.layout.x(n)] = rng.uniform() * scenario.grid->edge;
        p.values[p.layout.y(n)] = rng.uniform() * scenario.grid->edge;
        p.values[p.layout.bw(n)] = scenario.b_max / scenario.n_bs;
        p.values[p.layout.pw(n)] = 0.5 * scenario.p_max / scenario.n_bs;
    }
    p.apply_floors();
    return p;
}

SolveResult solve(const Scenario& scenario, const DinkelbachConfig& config, std::uint64_t seed) {
    scenario.validate();
    config.validate();

    LossEvaluator evaluator(scenario);
    const LossSettings final_settings{ObjectiveKind::iree, 0.0, config.schedule.omega_stage2};

    ParamVector params = initial_params(scenario, seed);
    TrainerState state = TrainerState::fresh(params, param_scales(params.layout, scenario));

    SolveResult out;
    double eta = update_iree(unpack_design(params, scenario), scenario);

    for (int k = 1; k <= config.max_iterations; ++k) {
        TrainResult inner;
        try {
            inner = two_stage_train(std::move(state), eta, evaluator, config.inner,
                                    config.schedule);
        } catch (const training_abort& e) {
            throw training_abort(e.epoch, "dinkelbach iteration " + std::to_string(k) + ": " +
                                              e.what());
        }

        // Continue the trajectory but adopt the best iterate as the solution.
        state = std::move(inner.state);
        state.params = inner.best_params;

        LossSettings settings = final_settings;
        settings.eta = eta;
        const LossEval eval = evaluator(state.params, settings, false);

        const NetworkDesign design = unpack_design(state.params, scenario);
        const double eta_next = update_iree(design, scenario);

        DinkelbachIteration it;
        it.k = k;
        it.eta = eta;
        it.eta_next = eta_next;
        it.loss_total = eval.breakdown.total;
        it.residuals = eval.residuals;
        it.report = report_for_design(design, scenario, CapacityModel::lower_bound);
        it.params = state.params;
        out.trace.iterations.push_back(std::move(it));

        const int offset = static_cast<int>(out.epoch_trace.size());
        for (auto& rec : inner.trace) {
            rec.epoch += offset;
            out.epoch_trace.push_back(rec);
        }

        eta = eta_next;
        if (std::abs(eval.breakdown.total) <= config.epsilon) {
            out.converged = true;
            break;
        }
    }

    out.params = state.params;
    out.design = unpack_design(state.params, scenario);
    out.eta_star = eta;
    out.loss_evaluations = evaluator.eval_count();
    return out;
}

}  // namespace greennet
