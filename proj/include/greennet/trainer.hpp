#pragma once

#include <functional>
#include <limits>
#include <span>

#include "greennet/loss.hpp"

namespace greennet {

struct AdamConfig {
    double learning_rate = 1e-2;  // on the scaled parameters
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    int n_epoch = 2000;
    bool freeze_locations = false;  // keep BS locations fixed (oracle tests)
    int snapshot_stride = 0;        // record the trajectory every k epochs; 0 = off

    void validate() const {
        if (!(learning_rate > 0.0)) throw invalid_input("adam: learning rate must be > 0");
        if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0))
            throw invalid_input("adam: betas must be in [0,1)");
        if (!(epsilon > 0.0)) throw invalid_input("adam: epsilon must be > 0");
        if (n_epoch < 0) throw invalid_input("adam: epoch count must be >= 0");
    }
};

struct TrainerState {
    ParamVector params;
    std::vector<double> first_moment;
    std::vector<double> second_moment;
    std::vector<double> scales;  // per-coordinate optimizer scales; empty = unit
    long step_count = 0;

    static TrainerState fresh(ParamVector params, std::vector<double> scales = {});
};

// One bias-corrected Adam update on the scaled coordinates, followed by the
// positivity floors. Deterministic.
void adam_step(TrainerState& state, std::span<const double> gradient, const AdamConfig& config);

struct EpochRecord {
    int epoch = 0;  // 1-based, continuous across stages
    LossBreakdown loss;
    double g1_norm = 0.0;  // power-block gradient norm
    double g2_norm = std::numeric_limits<double>::quiet_NaN();  // filled by diagnostics
};

struct TrainResult {
    TrainerState state;       // trajectory end: final iterate with final moments
    ParamVector best_params;  // best-scored iterate seen (initial point included)
    double best_score = 0.0;
    std::vector<EpochRecord> trace;
    std::vector<ParamVector> snapshots;
};

using LossGradFn = std::function<LossEval(const ParamVector&)>;
using ScoreFn = std::function<double(const LossEval&)>;
using StopFn = std::function<bool(const std::vector<EpochRecord>&)>;

// Generic epoch loop: evaluate, record, track the best-scored iterate (the
// initial point is a candidate), step, floor; the final iterate is evaluated
// and considered too. score defaults to the loss total.
TrainResult train_loop(TrainerState state, const LossGradFn& fn, const AdamConfig& config,
                       const ScoreFn& score = {}, const StopFn& stop_early = {});

// Single-stage training of the scenario loss at fixed (eta, omega).
TrainResult train_stage(TrainerState state, double eta, double omega,
                        LossEvaluator& evaluator, const AdamConfig& config,
                        ObjectiveKind objective = ObjectiveKind::iree);

struct StageSchedule {
    double omega_stage2 = 100.0;   // penalty weight on the scaled loss, >= 0
    double stage1_fraction = 0.7;  // share of n_epoch spent unconstrained
    bool use_plateau = false;      // switch stages early on a loss plateau
    double plateau_tol = 1e-6;
    int plateau_window = 200;

    void validate() const {
        if (!(omega_stage2 >= 0.0)) throw invalid_input("schedule: omega must be >= 0");
        if (!(stage1_fraction >= 0.0 && stage1_fraction <= 1.0))
            throw invalid_input("schedule: stage1 fraction must be in [0,1]");
        if (plateau_window < 1) throw invalid_input("schedule: plateau window must be >= 1");
    }
};

// Stage 1 with omega = 0, stage 2 with omega_stage2; Adam moments persist
// across the boundary and every visited iterate is scored with the stage-2
// penalty weight, so omega_stage2 = 0 degenerates to one long stage 1.
TrainResult two_stage_train(TrainerState state, double eta, LossEvaluator& evaluator,
                            const AdamConfig& config, const StageSchedule& schedule,
                            ObjectiveKind objective = ObjectiveKind::iree);

// Smoothness diagnostic: (first-order, second-order) power-block gradient
// norms along a trajectory, classified as exponential-like vs piecewise-linear
// by comparing fit R^2 (log-linear fit in log space vs two-segment hinge fit
// in linear space; ties go to piecewise-linear).
struct SmoothnessPair {
    double g1 = 0.0;
    double g2 = 0.0;
};

enum class RelationClass { exponential_like, piecewise_linear };

struct SmoothnessReport {
    std::vector<SmoothnessPair> pairs;
    RelationClass relation = RelationClass::piecewise_linear;
    double r2_exponential = 0.0;
    double r2_piecewise = 0.0;
};

SmoothnessReport smoothness_diagnostic(const std::vector<ParamVector>& trajectory, double eta,
                                       double omega, const Scenario& scenario);

// Classification only (used to merge pairs from several segments).
SmoothnessReport classify_smoothness(std::vector<SmoothnessPair> pairs);

}  // namespace greennet
