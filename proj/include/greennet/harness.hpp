#pragma once

#include <optional>

#include "greennet/scenario_io.hpp"

namespace greennet {

struct ShadowingConfig {
    double sigma_db = 0.0;
    int n_draws = 1;
};

struct RunConfig {
    std::filesystem::path scenario_path;
    ObjectiveKind objective = ObjectiveKind::iree;
    std::vector<std::uint64_t> seeds = {1};
    std::filesystem::path out_dir = "out";
    std::vector<double> pmax_dbw;  // sweep axis / comparison grid
    std::vector<double> bmax_hz;   // alternative sweep axis
    std::optional<ShadowingConfig> shadowing;
    DinkelbachConfig solver;

    void validate() const {
        if (seeds.empty()) throw invalid_input("run config: seeds must be non-empty");
        if (!pmax_dbw.empty() && !bmax_hz.empty())
            throw invalid_input("run config: at most one sweep axis per invocation");
        solver.validate();
    }
};

enum class RegionLabel { power_constrained, capacity_constrained, js_constrained };
const char* region_name(RegionLabel label);

// js_constrained iff C_Tot >= D_Tot at the converged design; below that the
// point is power_constrained when the transmit-power budget is (nearly)
// exhausted, capacity_constrained otherwise.
RegionLabel classify_region(const MetricReport& report, const ParamVector& params,
                            const Scenario& scenario);

struct OptimizeOutcome {
    SolveResult result;
    MetricReport report;  // lower-bound model, consistent with eta_star
    BoundsCheck bounds;
    GapReport gap;
    bool ok() const { return result.converged && (!bounds.applicable || bounds.pass); }
};

// Full run: solve, bound checks, gap analysis, artifact emission (report.json,
// trace.jsonl, trace.csv, design.json, fields.csv) into config.out_dir.
OptimizeOutcome run_optimize(const Scenario& scenario, const RunConfig& config);

struct SweepPoint {
    double p_max_dbw = 0.0;
    double b_max_hz = 0.0;
    std::uint64_t seed = 0;
    MetricReport report;
    RegionLabel region = RegionLabel::power_constrained;
    bool converged = false;
    double eta_star = 0.0;
};

std::vector<SweepPoint> run_sweep(const Scenario& scenario, const RunConfig& config);
void write_sweep_csv(const std::vector<SweepPoint>& points, const std::filesystem::path& path);
void write_tradeoff_csv(const std::vector<SweepPoint>& points,
                        const std::filesystem::path& path);

// Baseline comparison plus per-design field dumps (first seed of each cell).
std::vector<ComparisonRow> run_compare(const Scenario& scenario, const RunConfig& config);

struct ValidationCheck {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct ValidationReport {
    std::vector<ValidationCheck> checks;
    bool all_pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return !checks.empty();
    }
};

using GradOverride = std::function<std::vector<double>(
    const ParamVector&, double, double, const Scenario&)>;

// Reduced-size property suite over all modules on the given scenario. The
// gradient hook exists so tests can inject a broken gradient and watch the
// suite catch it.
ValidationReport run_validate(const Scenario& scenario, const GradOverride& grad = {});

}  // namespace greennet
