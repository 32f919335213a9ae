#pragma once

#include <filesystem>

#include "greennet/analysis.hpp"
#include "greennet/baselines.hpp"
#include "greennet/shadowing.hpp"

#include <nlohmann/json_fwd.hpp>

namespace greennet {

// Scenario files are JSON mirroring the Scenario type field for field; see
// scenarios/ for the shipped presets. A "traffic" block either generates a
// log-normal field ("kind": "lognormal") or loads a CSV ("kind": "csv", path
// relative to the scenario file).
Scenario load_scenario(const std::filesystem::path& path);

// Presets with Table-style constants (36 GHz, -174 dBm/Hz, 38% PA, 5 W
// circuit, 35+38log10(d) path loss) at desk scale.
Scenario rural_preset(int n_bs = 25, int grid_per_side = 36, std::uint64_t traffic_seed = 7);
Scenario urban_preset(int n_bs = 25, int grid_per_side = 36, std::uint64_t traffic_seed = 7);

nlohmann::json report_to_json(const MetricReport& report);
nlohmann::json design_to_json(const NetworkDesign& design);
nlohmann::json bounds_to_json(const BoundsCheck& check);
nlohmann::json gap_to_json(const GapReport& gap);
nlohmann::json shadowing_to_json(const ShadowingStats& stats);

void write_trace_jsonl(const DinkelbachTrace& trace, const std::filesystem::path& path);
void write_epoch_trace_csv(const std::vector<EpochRecord>& trace,
                           const std::filesystem::path& path);
void write_fields_csv(const ScalarField& traffic, const ScalarField& capacity,
                      const std::filesystem::path& path);
void write_compare_csv(const std::vector<ComparisonRow>& rows,
                       const std::filesystem::path& path);

// Text helpers shared by every emitted file: deterministic float formatting.
std::string format_double(double v);

}  // namespace greennet
