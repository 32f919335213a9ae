#pragma once

#include <functional>

#include "greennet/params.hpp"

namespace greennet {

// Which utility the inner (given-eta) problem maximizes.
//  iree: min{C,D}(1-xi) - eta*P_T, penalties on zeta and both budgets
//  ee:   C_Tot - eta*P_T, budget penalties only
//  se:   C_Tot, budget penalties only, no eta term
enum class ObjectiveKind { iree, ee, se };

struct LossSettings {
    ObjectiveKind objective = ObjectiveKind::iree;
    double eta = 0.0;    // bit/J, unscaled
    double omega = 0.0;  // penalty weight on the scaled loss
};

enum class EvalBackend { serial, openmp };

// The loss is evaluated in scaled units: capacities and traffic are divided by
// D_Tot, powers by P_max, budget residuals by their budgets, so every term is
// O(1). Reported metrics are always unscaled.
struct LossBreakdown {
    double utility_term = 0.0;  // -min{C,D}(1-xi)/D_Tot (or -C_Tot/D_Tot)
    double power_term = 0.0;    // eta~ * P_T/P_max
    double penalty_term = 0.0;  // omega * Omega~
    double total = 0.0;         // sum of the three
};

struct LossEval {
    LossBreakdown breakdown;
    double c_scaled = 0.0;  // C_Tot / D_Tot
    double xi = 0.0;        // JS divergence (0 for ee/se objectives)
    double zeta = 0.0;      // min{C,D}(1-xi)/D_Tot (utility indicator)
    FeasibilityResidual residuals;      // unscaled
    std::vector<double> gradient;       // d(total)/d(theta), empty unless requested
};

// Reusable evaluation context: caches the scaled traffic masses and the
// per-(station, sample) work buffers. operator() is pure in its arguments;
// results are bit-identical between backends because per-element work lands in
// buffers that are reduced with a fixed pairwise tree.
class LossEvaluator {
  public:
    LossEvaluator(const Scenario& scenario, EvalBackend backend = EvalBackend::openmp);

    LossEval operator()(const ParamVector& params, const LossSettings& settings,
                        bool with_grad);

    const Scenario& scenario() const { return *scenario_; }
    EvalBackend backend() const { return backend_; }
    long long eval_count() const { return eval_count_; }
    void reset_eval_count() { eval_count_ = 0; }

  private:
    const Scenario* scenario_;
    EvalBackend backend_;
    long long eval_count_ = 0;

    std::vector<double> traffic_mass_;  // q_m = d_m * w / D_Tot
    // per-(n,m) buffers, row-major [n][m]
    std::vector<double> se_, inv_ppl_, pos_x_, pos_y_;
    // per-m buffers
    std::vector<double> u_, coef_, scratch_;
    // per-(n,m) gradient term buffers
    std::vector<double> grad_terms_;
};

// Spec-level operations (IREE objective); each call builds a fresh evaluator.
LossBreakdown loss(const ParamVector& params, double eta, double omega,
                   const Scenario& scenario);
std::vector<double> grad_loss(const ParamVector& params, double eta, double omega,
                              const Scenario& scenario);

// Central finite differences of the scaled loss, step h_i = step*(1+|theta_i|).
std::vector<double> finite_diff_grad(const ParamVector& params, double eta, double omega,
                                     const Scenario& scenario, double step = 1e-4);

// Euclidean norm of the diagonal second derivatives over the power block,
// estimated by central differences of grad_loss. Feeds the smoothness
// diagnostic only.
double second_order_norm(const ParamVector& params, double eta, double omega,
                         const Scenario& scenario, double step = 1e-5);

// Generic helpers shared with tests and the trainer diagnostics.
namespace fd {

// Central-difference gradient of an arbitrary scalar function.
std::vector<double> gradient(const std::function<double(const std::vector<double>&)>& f,
                             std::vector<double> x, double step);

// Central second difference of f along coordinate i.
double second_difference(const std::function<double(const std::vector<double>&)>& f,
                         std::vector<double> x, std::size_t i, double step);

}  // namespace fd

}  // namespace greennet
