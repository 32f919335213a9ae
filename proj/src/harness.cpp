#include "greennet/harness.hpp"

#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "greennet/traffic.hpp"

namespace greennet {

using nlohmann::json;

const char* region_name(RegionLabel label) {
    switch (label) {
        case RegionLabel::power_constrained: return "power_constrained";
        case RegionLabel::capacity_constrained: return "capacity_constrained";
        case RegionLabel::js_constrained: return "js_constrained";
    }
    return "unknown";
}

RegionLabel classify_region(const MetricReport& report, const ParamVector& params,
                            const Scenario& scenario) {
    if (report.c_tot >= report.d_tot) return RegionLabel::js_constrained;
    double p_sum = 0.0;
    for (int n = 0; n < params.layout.n_bs; ++n) p_sum += params.pw(n);
    return p_sum >= 0.99 * scenario.p_max ? RegionLabel::power_constrained
                                          : RegionLabel::capacity_constrained;
}

OptimizeOutcome run_optimize(const Scenario& scenario, const RunConfig& config) {
    scenario.validate();
    config.validate();
    std::filesystem::create_directories(config.out_dir);

    OptimizeOutcome out;
    out.result = solve(scenario, config.solver, config.seeds.front());
    out.report = report_for_design(out.result.design, scenario, CapacityModel::lower_bound);
    out.bounds = check_bounds(out.result.trace, scenario);
    out.gap = optimality_gap_bound(out.result.design, scenario);

    const MetricReport exact =
        report_for_design(out.result.design, scenario, CapacityModel::exact);

    json doc{{"converged", out.result.converged},
             {"eta_star", out.result.eta_star},
             {"iterations", static_cast<int>(out.result.trace.iterations.size())},
             {"seed", config.seeds.front()},
             {"report", report_to_json(out.report)},
             {"analysis",
              json{{"bounds", bounds_to_json(out.bounds)},
                   {"gap", gap_to_json(out.gap)},
                   {"exact_report", report_to_json(exact)},
                   {"complexity",
                    json{{"predicted_ops", complexity_estimate(scenario, config.solver)},
                         {"loss_evaluations", out.result.loss_evaluations}}}}}};

    if (config.shadowing) {
        const ShadowingStats stats =
            shadowing_eval(out.result.design, scenario, config.shadowing->sigma_db,
                           config.shadowing->n_draws, config.seeds.front());
        doc["shadowing"] = shadowing_to_json(stats);
    }

    {
        std::ofstream f(config.out_dir / "report.json");
        f << doc.dump(2) << "\n";
    }
    write_trace_jsonl(out.result.trace, config.out_dir / "trace.jsonl");
    write_epoch_trace_csv(out.result.epoch_trace, config.out_dir / "trace.csv");
    {
        std::ofstream f(config.out_dir / "design.json");
        f << design_to_json(out.result.design).dump(2) << "\n";
    }
    const ScalarField cap =
        capacity_field(out.result.design, scenario, CapacityModel::lower_bound);
    write_fields_csv(scenario.traffic, cap, config.out_dir / "fields.csv");
    return out;
}

std::vector<SweepPoint> run_sweep(const Scenario& scenario, const RunConfig& config) {
    scenario.validate();
    config.validate();

    struct Cell {
        double pmax_dbw;
        double bmax_hz;
        std::uint64_t seed;
    };
    std::vector<Cell> cells;
    const bool pmax_axis = !config.pmax_dbw.empty();
    if (pmax_axis) {
        for (double p : config.pmax_dbw)
            for (auto s : config.seeds) cells.push_back({p, scenario.b_max, s});
    } else if (!config.bmax_hz.empty()) {
        const double pmax_dbw = 10.0 * std::log10(scenario.p_max);
        for (double b : config.bmax_hz)
            for (auto s : config.seeds) cells.push_back({pmax_dbw, b, s});
    } else {
        throw invalid_input("sweep: need --pmax-dbw or --bmax-hz");
    }

    std::vector<SweepPoint> points(cells.size());
    const auto n = static_cast<std::ptrdiff_t>(cells.size());
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        Scenario sc = scenario;
        sc.p_max = std::pow(10.0, cells[i].pmax_dbw / 10.0);
        sc.b_max = cells[i].bmax_hz;

        SolveResult res;
        switch (config.objective) {
            case ObjectiveKind::iree: res = solve(sc, config.solver, cells[i].seed); break;
            case ObjectiveKind::ee: res = maximize_ee(sc, config.solver, cells[i].seed); break;
            case ObjectiveKind::se: res = maximize_se(sc, config.solver, cells[i].seed); break;
        }

        SweepPoint pt;
        pt.p_max_dbw = cells[i].pmax_dbw;
        pt.b_max_hz = cells[i].bmax_hz;
        pt.seed = cells[i].seed;
        pt.report = report_for_design(res.design, sc, CapacityModel::lower_bound);
        pt.region = classify_region(pt.report, res.params, sc);
        pt.converged = res.converged;
        pt.eta_star = res.eta_star;
        points[i] = pt;
    }
    return points;
}

void write_sweep_csv(const std::vector<SweepPoint>& points, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw parse_error("cannot open " + path.string());
    out << "p_max_dbw,b_max_hz,seed,c_tot,d_tot,xi,zeta,p_t,iree,ee,se,region\n";
    for (const auto& pt : points) {
        const MetricReport& r = pt.report;
        out << format_double(pt.p_max_dbw) << ',' << format_double(pt.b_max_hz) << ','
            << pt.seed << ',' << format_double(r.c_tot) << ',' << format_double(r.d_tot)
            << ',' << format_double(r.xi) << ',' << format_double(r.zeta) << ','
            << format_double(r.p_t) << ',' << format_double(r.iree) << ','
            << format_double(r.ee) << ',' << format_double(r.se) << ','
            << region_name(pt.region) << "\n";
    }
}

void write_tradeoff_csv(const std::vector<SweepPoint>& points,
                        const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw parse_error("cannot open " + path.string());
    out << "b_max_hz,p_max_dbw,seed,se,iree,xi,zeta,region\n";
    for (const auto& pt : points) {
        const MetricReport& r = pt.report;
        out << format_double(pt.b_max_hz) << ',' << format_double(pt.p_max_dbw) << ','
            << pt.seed << ',' << format_double(r.se) << ',' << format_double(r.iree) << ','
            << format_double(r.xi) << ',' << format_double(r.zeta) << ','
            << region_name(pt.region) << "\n";
    }
}

std::vector<ComparisonRow> run_compare(const Scenario& scenario, const RunConfig& config) {
    scenario.validate();
    config.validate();
    std::filesystem::create_directories(config.out_dir);

    std::vector<double> pmax = config.pmax_dbw;
    if (pmax.empty()) pmax.push_back(10.0 * std::log10(scenario.p_max));
    const std::vector<ObjectiveKind> objectives{ObjectiveKind::iree, ObjectiveKind::ee,
                                                ObjectiveKind::se};

    std::vector<ComparisonRow> rows = compare(scenario, config.solver, pmax, config.seeds,
                                              objectives);
    write_compare_csv(rows, config.out_dir / "compare.csv");

    // Field dumps for plotting, one per (objective, p_max) at the first seed.
    for (ObjectiveKind obj : objectives) {
        for (double p_dbw : pmax) {
            Scenario sc = scenario;
            sc.p_max = std::pow(10.0, p_dbw / 10.0);
            SolveResult res;
            switch (obj) {
                case ObjectiveKind::iree: res = solve(sc, config.solver, config.seeds.front()); break;
                case ObjectiveKind::ee: res = maximize_ee(sc, config.solver, config.seeds.front()); break;
                case ObjectiveKind::se: res = maximize_se(sc, config.solver, config.seeds.front()); break;
            }
            const ScalarField cap = capacity_field(res.design, sc, CapacityModel::lower_bound);
            char name[64];
            std::snprintf(name, sizeof(name), "fields_%s_pmax%g.csv", objective_name(obj),
                          p_dbw);
            write_fields_csv(sc.traffic, cap, config.out_dir / name);
        }
    }
    return rows;
}

namespace {

// Coarse resampling of a scenario for the reduced-size validation suite.
Scenario reduced_scenario(const Scenario& scenario, int per_side, int n_bs) {
    Scenario sc = scenario;
    sc.grid = std::make_shared<SampleGrid>(make_grid(scenario.grid->edge, per_side));
    sc.n_bs = std::min(scenario.n_bs, n_bs);

    // Nearest-sample resampling of the traffic density, rescaled to D_Tot.
    const int src_side =
        static_cast<int>(std::lround(std::sqrt(static_cast<double>(scenario.grid->size()))));
    ScalarField traffic;
    traffic.grid = sc.grid;
    traffic.values.reserve(sc.grid->size());
    const double src_cell = scenario.grid->edge / src_side;
    for (const auto& p : sc.grid->points) {
        int ix = std::clamp(static_cast<int>(p.x / src_cell), 0, src_side - 1);
        int iy = std::clamp(static_cast<int>(p.y / src_cell), 0, src_side - 1);
        traffic.values.push_back(
            scenario.traffic.values[static_cast<std::size_t>(iy) * src_side + ix]);
    }
    sc.traffic = rescale_total(traffic, scenario.d_tot);
    sc.refresh_totals();
    return sc;
}

ParamVector random_params(const Scenario& sc, detail::NormalStream& rng, double b_scale,
                          double p_scale) {
    ParamVector params;
    params.layout.n_bs = sc.n_bs;
    params.values.resize(params.layout.size());
    for (int n = 0; n < sc.n_bs; ++n) {
        params.values[params.layout.x(n)] = rng.uniform() * sc.grid->edge;
        params.values[params.layout.y(n)] = rng.uniform() * sc.grid->edge;
        params.values[params.layout.bw(n)] = (0.2 + 0.8 * rng.uniform()) * b_scale / sc.n_bs;
        params.values[params.layout.pw(n)] = (0.2 + 0.8 * rng.uniform()) * p_scale / sc.n_bs;
    }
    params.apply_floors();
    return params;
}

}  // namespace

ValidationReport run_validate(const Scenario& scenario, const GradOverride& grad_override) {
    scenario.validate();
    ValidationReport report;
    const auto add = [&](const std::string& name, bool pass, const std::string& detail) {
        report.checks.push_back({name, pass, detail});
    };

    const Scenario sc = reduced_scenario(scenario, 7, 5);
    detail::NormalStream rng(20240917u);

    // Path loss closed form against the quadratic-form route.
    {
        bool ok = true;
        double worst = 0.0;
        for (int t = 0; t < 100; ++t) {
            const Point2D a{rng.uniform() * sc.grid->edge, rng.uniform() * sc.grid->edge};
            const Point2D b{rng.uniform() * sc.grid->edge, rng.uniform() * sc.grid->edge};
            const double d = std::sqrt(squared_norm(a - b));
            const auto& pl = sc.loss_defaults;
            const double direct = pl.gamma * std::pow(d, pl.alpha) + pl.beta;
            const double got = path_loss(a, b, pl);
            const double rel = std::abs(got - direct) / direct;
            worst = std::max(worst, rel);
            if (rel > 1e-12) ok = false;
        }
        add("path_loss_closed_form", ok, "max rel err " + format_double(worst));
    }

    // Capacity ordering C_S <= C_T on random designs.
    {
        bool ok = true;
        for (int t = 0; t < 20 && ok; ++t) {
            const ParamVector params = random_params(sc, rng, sc.b_max, sc.p_max);
            const NetworkDesign design = unpack_design(params, sc);
            for (const auto& loc : sc.grid->points) {
                const double cs = capacity_lower_bound(design, loc, sc.radio());
                const double ct = capacity_exact(design, loc, sc.radio());
                if (cs > ct * (1.0 + 1e-12)) {
                    ok = false;
                    break;
                }
            }
        }
        add("capacity_lower_bound_ordering", ok, "20 random designs x 49 samples");
    }

    // JS divergence: symmetry, range, scaled copies, direct-form agreement.
    {
        bool ok = true;
        double worst = 0.0;
        for (int t = 0; t < 20; ++t) {
            ScalarField a, b;
            a.grid = b.grid = sc.grid;
            for (std::size_t i = 0; i < sc.grid->size(); ++i) {
                a.values.push_back(rng.uniform());
                b.values.push_back(rng.uniform());
            }
            const double ab = js_divergence(a, b);
            const double ba = js_divergence(b, a);
            if (std::abs(ab - ba) > 1e-12 || ab < 0.0 || ab > 1.0) ok = false;

            ScalarField a2 = a;
            for (double& v : a2.values) v *= 3.7;
            if (js_divergence(a, a2) > 1e-12) ok = false;

            // Direct evaluation of the defining integrand.
            const double ca = total(a), cb = total(b);
            double direct = 0.0;
            for (std::size_t i = 0; i < a.values.size(); ++i) {
                const double c = a.values[i], d = b.values[i];
                const double num_c = 2.0 * cb * c;
                const double den = cb * c + ca * d;
                if (c > 0.0) direct += 0.5 * (c / ca) * std::log2(num_c / den);
                if (d > 0.0) direct += 0.5 * (d / cb) * std::log2(2.0 * ca * d / den);
            }
            direct *= a.grid->weight;
            worst = std::max(worst, std::abs(direct - ab));
            if (std::abs(direct - ab) > 1e-12) ok = false;
        }
        add("js_divergence_contract", ok, "max |direct - impl| " + format_double(worst));
    }

    // Analytic gradient against central differences.
    {
        GradOverride grad_fn = grad_override;
        if (!grad_fn)
            grad_fn = [](const ParamVector& p, double eta, double omega, const Scenario& s) {
                return grad_loss(p, eta, omega, s);
            };
        bool ok = true;
        double worst = 0.0;
        for (int t = 0; t < 5; ++t) {
            const ParamVector params = random_params(sc, rng, 1.2 * sc.b_max, 1.2 * sc.p_max);
            const double eta = 0.3 * update_iree(unpack_design(params, sc), sc);
            const double omega = t % 2 == 0 ? 0.0 : 10.0;
            const auto analytic = grad_fn(params, eta, omega, sc);
            const auto numeric = finite_diff_grad(params, eta, omega, sc);
            for (std::size_t i = 0; i < analytic.size(); ++i) {
                const double ref = std::max(std::abs(numeric[i]), 1e-12);
                const double rel = std::abs(analytic[i] - numeric[i]) / ref;
                if (std::abs(numeric[i]) < 1e-14 && std::abs(analytic[i]) < 1e-14) continue;
                worst = std::max(worst, rel);
                if (rel > 1e-4) ok = false;
            }
        }
        add("gradient_check", ok, "max rel err " + format_double(worst));
    }

    // Serial and OpenMP loss paths must agree bit for bit.
    {
        LossEvaluator serial(sc, EvalBackend::serial);
        LossEvaluator parallel(sc, EvalBackend::openmp);
        bool ok = true;
        for (int t = 0; t < 5; ++t) {
            const ParamVector params = random_params(sc, rng, sc.b_max, sc.p_max);
            const LossSettings settings{ObjectiveKind::iree, 1e7, 50.0};
            const LossEval a = serial(params, settings, true);
            const LossEval b = parallel(params, settings, true);
            if (a.breakdown.total != b.breakdown.total) ok = false;
            for (std::size_t i = 0; i < a.gradient.size(); ++i)
                if (a.gradient[i] != b.gradient[i]) ok = false;
        }
        add("loss_backend_bit_identity", ok, "serial == openmp");
    }

    // Lemma 2 P_D^t closed form against a bisection root of the same equation.
    {
        const IreeBounds bounds = iree_bounds(sc, 0.0);
        const double samples = static_cast<double>(sc.grid->size());
        const auto jensen_cap = [&](double p) {
            return samples * sc.b_max *
                   std::log2(1.0 + p / (sc.b_max * sc.noise_psd * bounds.mean_loss));
        };
        double lo = 0.0, hi = 1.0;
        while (jensen_cap(hi) < sc.d_tot) hi *= 2.0;
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            (jensen_cap(mid) < sc.d_tot ? lo : hi) = mid;
        }
        const double root = 0.5 * (lo + hi);
        const double rel = std::abs(root - bounds.p_dt) / root;
        add("p_dt_closed_form", rel <= 1e-3, "rel err " + format_double(rel));
    }

    // Lemma 3 gap bound on random designs.
    {
        bool ok = true;
        for (int t = 0; t < 20; ++t) {
            const ParamVector params = random_params(sc, rng, sc.b_max, sc.p_max);
            const GapReport gap = optimality_gap_bound(unpack_design(params, sc), sc);
            if (gap.measured_gap > gap.bound * (1.0 + 1e-9)) ok = false;
        }
        add("optimality_gap_bound", ok, "20 random designs");
    }

    // Traffic generation determinism.
    {
        LognormalTrafficParams params;
        params.location = 10.0;
        params.scale = 1.5;
        params.spread = 1e-5;
        params.total = 1e9;
        params.seed = 99;
        const ScalarField a = lognormal_traffic(sc.grid, params);
        const ScalarField b = lognormal_traffic(sc.grid, params);
        bool ok = a.values == b.values;
        ok = ok && std::abs(total(a) - params.total) <= 1e-9 * params.total;
        add("traffic_determinism", ok, "bitwise repeatable, total to 1e-9");
    }

    return report;
}

}  // namespace greennet
