// greenplan: green-network planning optimizer CLI.
//
// Subcommands: optimize, compare, sweep, tradeoff, gen-traffic, validate.
// Scenario files are JSON (see scenarios/); powers are given in dBW on the
// command line and converted to watts internally.

#include <cstdio>
#include <iostream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "greennet/harness.hpp"
#include "greennet/traffic.hpp"

namespace gn = greennet;

namespace {

struct CommonArgs {
    std::string scenario_path;
    std::vector<std::uint64_t> seeds{1};
    std::string out_dir = "out";
    std::vector<double> pmax_dbw;
    std::vector<double> bmax_hz;
    std::string objective = "iree";
    double shadowing_db = -1.0;
    int draws = 20;
    int epochs = 2000;
    int max_iterations = 30;
    double omega = 100.0;
    double epsilon = 1e-4;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool needs_scenario = true) {
    auto* opt = cmd->add_option("--scenario", args.scenario_path, "scenario JSON file");
    if (needs_scenario) opt->required();
    cmd->add_option("--seed", args.seeds, "RNG seed(s); repeat for several runs");
    cmd->add_option("--out", args.out_dir, "output directory");
    cmd->add_option("--pmax-dbw", args.pmax_dbw, "transmit power sweep points, dBW");
    cmd->add_option("--bmax-hz", args.bmax_hz, "bandwidth sweep points, Hz");
    cmd->add_option("--objective", args.objective, "iree|ee|se")
        ->check(CLI::IsMember({"iree", "ee", "se"}));
    cmd->add_option("--shadowing-db", args.shadowing_db, "log-normal shadowing sigma, dB");
    cmd->add_option("--draws", args.draws, "shadowing Monte Carlo draws");
    cmd->add_option("--epochs", args.epochs, "inner training epochs per iteration");
    cmd->add_option("--max-iter", args.max_iterations, "outer iterations");
    cmd->add_option("--omega", args.omega, "stage-2 penalty weight");
    cmd->add_option("--epsilon", args.epsilon, "convergence tolerance on the scaled loss");
}

gn::RunConfig to_run_config(const CommonArgs& args) {
    gn::RunConfig config;
    config.scenario_path = args.scenario_path;
    config.seeds = args.seeds;
    config.out_dir = args.out_dir;
    config.pmax_dbw = args.pmax_dbw;
    config.bmax_hz = args.bmax_hz;
    if (args.objective == "ee")
        config.objective = gn::ObjectiveKind::ee;
    else if (args.objective == "se")
        config.objective = gn::ObjectiveKind::se;
    if (args.shadowing_db >= 0.0)
        config.shadowing = gn::ShadowingConfig{args.shadowing_db, args.draws};
    config.solver.epsilon = args.epsilon;
    config.solver.max_iterations = args.max_iterations;
    config.solver.inner.n_epoch = args.epochs;
    config.solver.schedule.omega_stage2 = args.omega;
    return config;
}

int cmd_optimize(const CommonArgs& args) {
    const gn::Scenario scenario = gn::load_scenario(args.scenario_path);
    const gn::RunConfig config = to_run_config(args);
    const gn::OptimizeOutcome outcome = gn::run_optimize(scenario, config);
    std::printf("converged=%s eta_star=%.6g bit/J xi=%.4f zeta=%.4f bounds=%s\n",
                outcome.result.converged ? "yes" : "no", outcome.result.eta_star,
                outcome.report.xi, outcome.report.zeta,
                outcome.bounds.applicable ? (outcome.bounds.pass ? "pass" : "FAIL")
                                          : "n/a");
    std::printf("artifacts in %s\n", config.out_dir.string().c_str());
    return outcome.ok() ? 0 : 1;
}

int cmd_sweep(const CommonArgs& args, bool tradeoff) {
    const gn::Scenario scenario = gn::load_scenario(args.scenario_path);
    gn::RunConfig config = to_run_config(args);
    if (config.pmax_dbw.empty() && config.bmax_hz.empty())
        config.pmax_dbw = {0, 5, 10, 15, 20, 25, 30};
    std::filesystem::create_directories(config.out_dir);
    const auto points = gn::run_sweep(scenario, config);
    if (tradeoff) {
        gn::write_tradeoff_csv(points, config.out_dir / "tradeoff.csv");
        std::printf("%zu points -> %s\n", points.size(),
                    (config.out_dir / "tradeoff.csv").string().c_str());
    } else {
        gn::write_sweep_csv(points, config.out_dir / "sweep.csv");
        std::printf("%zu points -> %s\n", points.size(),
                    (config.out_dir / "sweep.csv").string().c_str());
    }
    for (const auto& pt : points)
        if (!pt.converged)
            std::fprintf(stderr, "warning: point pmax=%g dBW seed=%llu did not converge\n",
                         pt.p_max_dbw, static_cast<unsigned long long>(pt.seed));
    return 0;
}

int cmd_compare(const CommonArgs& args) {
    const gn::Scenario scenario = gn::load_scenario(args.scenario_path);
    gn::RunConfig config = to_run_config(args);
    if (config.pmax_dbw.empty()) config.pmax_dbw = {10, 20, 30};
    const auto rows = gn::run_compare(scenario, config);
    std::printf("%zu comparison rows -> %s\n", rows.size(),
                (config.out_dir / "compare.csv").string().c_str());
    return 0;
}

int cmd_gen_traffic(CLI::App* cmd) {
    static std::string preset = "rural";
    static std::string out_file = "traffic.csv";
    static double edge_m = 5000.0;
    static int grid = 36;
    static std::uint64_t seed = 7;
    static double location = 19.0, scale = 2.8, spread = 0.0012, total = 8.9e12;
    cmd->add_option("--preset", preset, "rural|urban|custom")
        ->check(CLI::IsMember({"rural", "urban", "custom"}));
    cmd->add_option("--out-file", out_file, "output CSV path");
    cmd->add_option("--edge-m", edge_m, "area edge, m");
    cmd->add_option("--grid", grid, "samples per side");
    cmd->add_option("--seed", seed, "RNG seed");
    cmd->add_option("--location", location, "ln-scale mean (custom preset)");
    cmd->add_option("--scale", scale, "ln-scale std dev (custom preset)");
    cmd->add_option("--spread", spread, "max spatial spread, 1/m^2 (custom preset)");
    cmd->add_option("--total", total, "total traffic, bit/s (custom preset)");

    cmd->callback([&]() {
        gn::LognormalTrafficParams params;
        if (preset == "rural") {
            params.location = 19.0;
            params.scale = 2.8;
            params.spread = 0.0012;
            params.total = 8.9e12;
        } else if (preset == "urban") {
            params.location = 19.0;
            params.scale = 2.4;
            params.spread = 0.003;
            params.total = 9.7e12;
        } else {
            params.location = location;
            params.scale = scale;
            params.spread = spread;
            params.total = total;
        }
        params.seed = seed;
        auto g = std::make_shared<gn::SampleGrid>(gn::make_grid(edge_m, grid));
        const gn::ScalarField field = gn::lognormal_traffic(g, params);
        gn::save_field(field, out_file);
        std::printf("wrote %d x %d field, total %.6g bit/s -> %s\n", grid, grid,
                    gn::total(field), out_file.c_str());
    });
    return 0;
}

int cmd_validate(const CommonArgs& args) {
    const gn::Scenario scenario = gn::load_scenario(args.scenario_path);
    const gn::ValidationReport report = gn::run_validate(scenario);
    for (const auto& check : report.checks)
        std::printf("[%s] %-32s %s\n", check.pass ? "PASS" : "FAIL", check.name.c_str(),
                    check.detail.c_str());
    return report.all_pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"IREE-oriented green network planning optimizer"};
    app.require_subcommand(1);

    CommonArgs opt_args, sweep_args, tradeoff_args, compare_args, validate_args;

    auto* optimize = app.add_subcommand("optimize", "run the IREE maximization scheme");
    add_common(optimize, opt_args);
    auto* compare = app.add_subcommand("compare", "IREE vs EE vs SE baselines");
    add_common(compare, compare_args);
    auto* sweep = app.add_subcommand("sweep", "metric sweep over a budget axis");
    add_common(sweep, sweep_args);
    auto* tradeoff = app.add_subcommand("tradeoff", "IREE-SE trade-off curve");
    add_common(tradeoff, tradeoff_args);
    auto* gen = app.add_subcommand("gen-traffic", "write a synthetic traffic CSV");
    cmd_gen_traffic(gen);
    auto* validate = app.add_subcommand("validate", "run the reduced property suite");
    add_common(validate, validate_args);

    CLI11_PARSE(app, argc, argv);

    try {
        if (optimize->parsed()) return cmd_optimize(opt_args);
        if (compare->parsed()) return cmd_compare(compare_args);
        if (sweep->parsed()) return cmd_sweep(sweep_args, false);
        if (tradeoff->parsed()) return cmd_sweep(tradeoff_args, true);
        if (validate->parsed()) return cmd_validate(validate_args);
        if (gen->parsed()) return 0;  // handled by callback
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
