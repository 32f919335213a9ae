#include "greennet/scenario_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include <nlohmann/json.hpp>

#include "greennet/traffic.hpp"

namespace greennet {

using nlohmann::json;

namespace {

json load_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open " + path.string());
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw parse_error("scenario parse failure in " + path.string() + ": " + e.what());
    }
}

double require_number(const json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_number())
        throw parse_error(std::string("scenario: missing numeric field '") + key + "'");
    return j[key].get<double>();
}

}  // namespace

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

Scenario load_scenario(const std::filesystem::path& path) {
    const json j = load_json(path);

    Scenario sc;
    const json& area = j.at("area");
    const double edge = require_number(area, "edge_m");
    const int per_side = static_cast<int>(require_number(area, "grid_per_side"));
    sc.grid = std::make_shared<SampleGrid>(make_grid(edge, per_side));

    sc.b_max = require_number(j, "b_max_hz");
    sc.p_max = require_number(j, "p_max_w");
    sc.zeta_min = require_number(j, "zeta_min");
    sc.noise_psd = require_number(j, "noise_psd_w_per_hz");
    sc.n_bs = static_cast<int>(require_number(j, "n_bs"));

    const json& pm = j.at("power_model");
    sc.power_model.lambda = require_number(pm, "amplifier_slope");
    sc.power_model.p_circuit = require_number(pm, "circuit_w");

    const json& pl = j.at("path_loss");
    sc.loss_defaults.alpha = require_number(pl, "alpha");
    sc.loss_defaults.beta = require_number(pl, "beta");
    sc.loss_defaults.gamma = require_number(pl, "gamma");
    if (pl.contains("shape")) {
        const auto& s = pl["shape"];
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 2; ++c) sc.loss_defaults.shape[r][c] = s.at(r).at(c);
    }

    const json& tr = j.at("traffic");
    const std::string kind = tr.at("kind").get<std::string>();
    if (kind == "lognormal") {
        LognormalTrafficParams params;
        params.location = require_number(tr, "location");
        params.scale = require_number(tr, "scale");
        params.spread = require_number(tr, "spread_per_m2");
        params.total = require_number(tr, "total_bps");
        params.seed = static_cast<std::uint64_t>(require_number(tr, "seed"));
        if (tr.contains("interpretation"))
            params.interpretation = tr["interpretation"].get<std::string>();
        sc.traffic = lognormal_traffic(sc.grid, params);
    } else if (kind == "csv") {
        const std::filesystem::path rel = tr.at("path").get<std::string>();
        sc.traffic = load_field(path.parent_path() / rel, sc.grid);
        if (tr.contains("total_bps"))
            sc.traffic = rescale_total(sc.traffic, require_number(tr, "total_bps"));
    } else {
        throw parse_error("scenario: unknown traffic kind '" + kind + "'");
    }

    sc.refresh_totals();
    sc.validate();
    return sc;
}

namespace {

Scenario table_preset(double total_bps, double scale, double spread, double zeta_min,
                      int n_bs, int grid_per_side, std::uint64_t traffic_seed) {
    Scenario sc;
    sc.grid = std::make_shared<SampleGrid>(make_grid(5000.0, grid_per_side));
    sc.b_max = 36e9;
    sc.p_max = 1000.0;                       // 30 dBW
    sc.zeta_min = zeta_min;
    sc.noise_psd = std::pow(10.0, -20.4);    // -174 dBm/Hz
    sc.power_model.lambda = 1.0 / 0.38;
    sc.power_model.p_circuit = 5.0;
    sc.n_bs = n_bs;
    sc.loss_defaults.alpha = 3.8;
    sc.loss_defaults.gamma = std::pow(10.0, 3.5);  // 35 + 38 log10(d) in dB
    sc.loss_defaults.beta = std::pow(10.0, 3.5);   // continuous at d = 0

    LognormalTrafficParams params;
    params.location = 19.0;
    params.scale = scale;
    params.spread = spread;
    params.total = total_bps;
    params.seed = traffic_seed;
    sc.traffic = lognormal_traffic(sc.grid, params);
    sc.refresh_totals();
    return sc;
}

}  // namespace

Scenario rural_preset(int n_bs, int grid_per_side, std::uint64_t traffic_seed) {
    return table_preset(8.9e12, 2.8, 0.0012, 0.0, n_bs, grid_per_side, traffic_seed);
}

Scenario urban_preset(int n_bs, int grid_per_side, std::uint64_t traffic_seed) {
    return table_preset(9.7e12, 2.4, 0.003, 0.0, n_bs, grid_per_side, traffic_seed);
}

json report_to_json(const MetricReport& r) {
    return json{{"c_tot", r.c_tot}, {"d_tot", r.d_tot}, {"xi", r.xi},   {"zeta", r.zeta},
                {"p_t", r.p_t},     {"iree", r.iree},   {"ee", r.ee},   {"se", r.se}};
}

json design_to_json(const NetworkDesign& design) {
    json stations = json::array();
    for (const auto& bs : design.stations) {
        stations.push_back(json{{"x_m", bs.location.x},
                                {"y_m", bs.location.y},
                                {"bandwidth_hz", bs.bandwidth},
                                {"tx_power_w", bs.tx_power}});
    }
    return json{{"stations", stations}};
}

json bounds_to_json(const BoundsCheck& check) {
    return json{{"applicable", check.applicable},
                {"pass", check.pass},
                {"eta_star", check.eta_star},
                {"lower", check.bounds.lower},
                {"upper", check.bounds.upper},
                {"p_dt_w", check.bounds.p_dt}};
}

json gap_to_json(const GapReport& gap) {
    return json{{"bound", gap.bound},
                {"measured_gap", gap.measured_gap},
                {"eta_s", gap.eta_s},
                {"eta_t", gap.eta_t},
                {"xi_s", gap.xi_s},
                {"xi_t", gap.xi_t},
                {"xi_st", gap.xi_st},
                {"c_s_tot", gap.c_s_tot},
                {"c_t_tot", gap.c_t_tot}};
}

json shadowing_to_json(const ShadowingStats& stats) {
    return json{{"sigma_db", stats.sigma_db},
                {"n_draws", stats.n_draws},
                {"mean", report_to_json(stats.mean)},
                {"stddev", report_to_json(stats.stddev)}};
}

void write_trace_jsonl(const DinkelbachTrace& trace, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw parse_error("cannot open " + path.string());
    for (const auto& it : trace.iterations) {
        json line{{"k", it.k},
                  {"eta", it.eta},
                  {"eta_next", it.eta_next},
                  {"loss_total", it.loss_total},
                  {"residuals",
                   json{{"d_zeta", it.residuals.d_zeta},
                        {"d_bandwidth_hz", it.residuals.d_bandwidth},
                        {"d_power_w", it.residuals.d_power}}},
                  {"report", report_to_json(it.report)},
                  {"params", it.params.values}};
        out << line.dump() << "\n";
    }
}

void write_epoch_trace_csv(const std::vector<EpochRecord>& trace,
                           const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw parse_error("cannot open " + path.string());
    out << "epoch,loss_total,loss_utility,loss_power,loss_penalty,g1_norm,g2_norm\n";
    for (const auto& rec : trace) {
        out << rec.epoch << ',' << format_double(rec.loss.total) << ','
            << format_double(rec.loss.utility_term) << ','
            << format_double(rec.loss.power_term) << ','
            << format_double(rec.loss.penalty_term) << ',' << format_double(rec.g1_norm)
            << ',' << format_double(rec.g2_norm) << "\n";
    }
}

void write_fields_csv(const ScalarField& traffic, const ScalarField& capacity,
                      const std::filesystem::path& path) {
    traffic.validate();
    capacity.validate();
    if (traffic.grid != capacity.grid)
        throw invalid_input("fields dump: fields on different grids");
    std::ofstream out(path);
    if (!out) throw parse_error("cannot open " + path.string());
    out << "x_m,y_m,traffic_bps_per_m2,capacity_bps_per_m2\n";
    const auto& pts = traffic.grid->points;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        out << format_double(pts[i].x) << ',' << format_double(pts[i].y) << ','
            << format_double(traffic.values[i]) << ',' << format_double(capacity.values[i])
            << "\n";
    }
}

void write_compare_csv(const std::vector<ComparisonRow>& rows,
                       const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw parse_error("cannot open " + path.string());
    out << "objective,p_max_dbw,b_max_hz,c_tot,d_tot,xi,zeta,p_t,iree,ee,se,seed\n";
    for (const auto& row : rows) {
        const MetricReport& r = row.report;
        out << objective_name(row.objective) << ',' << format_double(row.p_max_dbw) << ','
            << format_double(row.b_max_hz) << ',' << format_double(r.c_tot) << ','
            << format_double(r.d_tot) << ',' << format_double(r.xi) << ','
            << format_double(r.zeta) << ',' << format_double(r.p_t) << ','
            << format_double(r.iree) << ',' << format_double(r.ee) << ','
            << format_double(r.se) << ',' << row.seed << "\n";
    }
}

}  // namespace greennet
