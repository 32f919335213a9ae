#include "greennet/traffic.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

namespace greennet {

namespace {

// Smooth a white N(0,1) lattice with a truncated Gaussian kernel and normalize
// per point by the exact kernel norm, so every output entry is again N(0,1).
std::vector<double> smooth_unit_normal(const std::vector<double>& white, int per_side,
                                       double corr_len_cells) {
    const int radius = static_cast<int>(std::ceil(4.0 * corr_len_cells));
    if (radius < 1) return white;

    std::vector<double> kernel(2 * radius + 1);
    for (int k = -radius; k <= radius; ++k)
        kernel[k + radius] = std::exp(-0.5 * (k * k) / (corr_len_cells * corr_len_cells));

    std::vector<double> out(white.size());
    for (int iy = 0; iy < per_side; ++iy) {
        for (int ix = 0; ix < per_side; ++ix) {
            double acc = 0.0;
            double norm2 = 0.0;
            for (int dy = -radius; dy <= radius; ++dy) {
                const int jy = iy + dy;
                if (jy < 0 || jy >= per_side) continue;
                for (int dx = -radius; dx <= radius; ++dx) {
                    const int jx = ix + dx;
                    if (jx < 0 || jx >= per_side) continue;
                    const double w = kernel[dy + radius] * kernel[dx + radius];
                    acc += w * white[static_cast<std::size_t>(jy) * per_side + jx];
                    norm2 += w * w;
                }
            }
            out[static_cast<std::size_t>(iy) * per_side + ix] = acc / std::sqrt(norm2);
        }
    }
    return out;
}

}  // namespace

ScalarField lognormal_traffic(std::shared_ptr<const SampleGrid> grid,
                              const LognormalTrafficParams& params) {
    if (!grid || grid->size() < 2) throw invalid_input("lognormal_traffic: missing grid");
    if (!(params.scale >= 0.0)) throw invalid_input("lognormal_traffic: scale must be >= 0");
    if (!(params.spread > 0.0)) throw invalid_input("lognormal_traffic: spread must be > 0");
    if (!(params.total > 0.0)) throw invalid_input("lognormal_traffic: total must be > 0");
    if (params.interpretation != "gaussian_log_smoothing")
        throw invalid_input("lognormal_traffic: unknown spread interpretation '" +
                            params.interpretation + "'");

    const auto m = grid->size();
    const int per_side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(m))));
    if (static_cast<std::size_t>(per_side) * per_side != m)
        throw invalid_input("lognormal_traffic: grid is not square");

    detail::NormalStream rng(params.seed);
    std::vector<double> z(m);
    for (double& v : z) v = rng.normal();

    const double cell = grid->edge / per_side;
    const double corr_len_cells = 1.0 / (std::sqrt(params.spread) * cell);
    z = smooth_unit_normal(z, per_side, corr_len_cells);

    ScalarField field;
    field.grid = grid;
    field.values.resize(m);
    for (std::size_t i = 0; i < m; ++i)
        field.values[i] = std::exp(params.location + params.scale * z[i]);

    return rescale_total(field, params.total);
}

void save_field(const ScalarField& field, const std::filesystem::path& path) {
    field.validate();
    std::ofstream out(path);
    if (!out) throw parse_error("save_field: cannot open " + path.string());
    out << "x_m,y_m,density_bps_per_m2\n";
    char buf[128];
    const auto& pts = field.grid->points;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", pts[i].x, pts[i].y,
                      field.values[i]);
        out << buf;
    }
    if (!out) throw parse_error("save_field: write failure on " + path.string());
}

ScalarField load_field(const std::filesystem::path& path,
                       std::shared_ptr<const SampleGrid> grid) {
    if (!grid) throw invalid_input("load_field: missing grid");
    std::ifstream in(path);
    if (!in) throw parse_error("load_field: cannot open " + path.string());

    std::string line;
    if (!std::getline(in, line)) throw parse_error("load_field: empty file");
    if (line != "x_m,y_m,density_bps_per_m2")
        throw parse_error("load_field: unexpected header '" + line + "'");

    ScalarField field;
    field.grid = grid;
    field.values.reserve(grid->size());
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        ++row;
        if (row > grid->size())
            throw length_mismatch("load_field: more rows than grid points");
        double cols[3];
        const char* p = line.data();
        const char* end = line.data() + line.size();
        for (int c = 0; c < 3; ++c) {
            auto [next, ec] = std::from_chars(p, end, cols[c]);
            if (ec != std::errc())
                throw parse_error("load_field: bad number in row " + std::to_string(row));
            p = next;
            if (c < 2) {
                if (p == end || *p != ',')
                    throw parse_error("load_field: expected ',' in row " + std::to_string(row));
                ++p;
            }
        }
        if (p != end) throw parse_error("load_field: trailing text in row " + std::to_string(row));
        if (cols[2] < 0.0)
            throw negative_value("load_field: negative density in row " + std::to_string(row));
        field.values.push_back(cols[2]);
    }
    if (field.values.size() != grid->size())
        throw length_mismatch("load_field: row count " + std::to_string(field.values.size()) +
                              " does not match grid size " + std::to_string(grid->size()));
    return field;
}

}  // namespace greennet
