#include "greennet/baselines.hpp"

#include <cmath>

namespace greennet {

namespace {

double update_ee(const NetworkDesign& design, const Scenario& scenario) {
    const ScalarField c = capacity_field(design, scenario, CapacityModel::lower_bound);
    return total(c) / power_total(design, scenario.power_model);
}

}  // namespace

SolveResult maximize_ee(const Scenario& scenario, const DinkelbachConfig& config,
                        std::uint64_t seed) {
    scenario.validate();
    config.validate();

    LossEvaluator evaluator(scenario);
    ParamVector params = initial_params(scenario, seed);
    TrainerState state = TrainerState::fresh(params, param_scales(params.layout, scenario));

    SolveResult out;
    double eta = update_ee(unpack_design(params, scenario), scenario);

    for (int k = 1; k <= config.max_iterations; ++k) {
        TrainResult inner = two_stage_train(std::move(state), eta, evaluator, config.inner,
                                            config.schedule, ObjectiveKind::ee);
        state = std::move(inner.state);
        state.params = inner.best_params;

        const LossSettings settings{ObjectiveKind::ee, eta, config.schedule.omega_stage2};
        const LossEval eval = evaluator(state.params, settings, false);

        const NetworkDesign design = unpack_design(state.params, scenario);
        const double eta_next = update_ee(design, scenario);

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

SolveResult maximize_se(const Scenario& scenario, const DinkelbachConfig& config,
                        std::uint64_t seed) {
    scenario.validate();
    config.validate();

    LossEvaluator evaluator(scenario);
    ParamVector params = initial_params(scenario, seed);
    TrainerState state = TrainerState::fresh(params, param_scales(params.layout, scenario));

    // Single stage: the budget penalties are active from the first epoch.
    const double omega = config.schedule.omega_stage2;
    TrainResult inner =
        train_stage(std::move(state), 0.0, omega, evaluator, config.inner, ObjectiveKind::se);

    SolveResult out;
    out.params = inner.best_params;
    out.design = unpack_design(out.params, scenario);
    out.epoch_trace = std::move(inner.trace);
    out.loss_evaluations = evaluator.eval_count();

    const LossSettings settings{ObjectiveKind::se, 0.0, omega};
    const LossEval eval = evaluator(out.params, settings, false);

    DinkelbachIteration it;
    it.k = 1;
    it.eta = 0.0;
    it.eta_next = 0.0;
    it.loss_total = eval.breakdown.total;
    it.residuals = eval.residuals;
    it.report = report_for_design(out.design, scenario, CapacityModel::lower_bound);
    it.params = out.params;
    out.trace.iterations.push_back(std::move(it));

    out.eta_star = it.report.se;
    out.converged = true;  // no ratio iteration; the stage itself is the result
    return out;
}

std::vector<ComparisonRow> compare(const Scenario& scenario, const DinkelbachConfig& config,
                                   const std::vector<double>& p_max_dbw_values,
                                   const std::vector<std::uint64_t>& seeds,
                                   const std::vector<ObjectiveKind>& objectives) {
    scenario.validate();
    if (p_max_dbw_values.empty()) throw invalid_input("compare: empty p_max list");
    if (seeds.empty()) throw invalid_input("compare: empty seed list");

    struct Cell {
        ObjectiveKind objective;
        double p_max_dbw;
        std::uint64_t seed;
    };
    std::vector<Cell> cells;
    for (ObjectiveKind obj : objectives)
        for (double p : p_max_dbw_values)
            for (std::uint64_t s : seeds) cells.push_back({obj, p, s});

    std::vector<ComparisonRow> rows(cells.size());
    const auto n = static_cast<std::ptrdiff_t>(cells.size());
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const Cell& cell = cells[i];
        Scenario sc = scenario;
        sc.p_max = std::pow(10.0, cell.p_max_dbw / 10.0);

        SolveResult res;
        switch (cell.objective) {
            case ObjectiveKind::iree: res = solve(sc, config, cell.seed); break;
            case ObjectiveKind::ee: res = maximize_ee(sc, config, cell.seed); break;
            case ObjectiveKind::se: res = maximize_se(sc, config, cell.seed); break;
        }

        ComparisonRow row;
        row.objective = cell.objective;
        row.p_max_dbw = cell.p_max_dbw;
        row.b_max_hz = sc.b_max;
        row.seed = cell.seed;
        row.report = report_for_design(res.design, sc, CapacityModel::lower_bound);
        row.converged = res.converged;
        rows[i] = row;
    }
    return rows;
}

const char* objective_name(ObjectiveKind kind) {
    switch (kind) {
        case ObjectiveKind::iree: return "iree";
        case ObjectiveKind::ee: return "ee";
        case ObjectiveKind::se: return "se";
    }
    return "unknown";
}

}  // namespace greennet
