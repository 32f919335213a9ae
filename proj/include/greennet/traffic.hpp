#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>

#include "greennet/grid.hpp"

namespace greennet {

// Synthetic spatial traffic: an i.i.d. Gaussian log-field is smoothed with a
// Gaussian kernel of correlation length 1/sqrt(spread) and renormalized per
// point, so each sample is exactly LogNormal(location, scale) marginally while
// neighbouring samples are correlated; the field is then rescaled to the
// requested total. "spread" is the paper's max spatial spread; the smoothing
// interpretation is recorded in the parameter set so alternates can be swapped.
struct LognormalTrafficParams {
    double location = 0.0;   // ln-scale mean of the density
    double scale = 1.0;      // ln-scale standard deviation, > 0
    double spread = 1.0;     // 1/m^2; correlation length = 1/sqrt(spread)
    double total = 0.0;      // bit/s, > 0
    std::uint64_t seed = 0;
    std::string interpretation = "gaussian_log_smoothing";
};

ScalarField lognormal_traffic(std::shared_ptr<const SampleGrid> grid,
                              const LognormalTrafficParams& params);

// Plain-text CSV, header "x_m,y_m,density_bps_per_m2", rows in the grid's
// raster order (x fastest), 17 significant digits.
void save_field(const ScalarField& field, const std::filesystem::path& path);

ScalarField load_field(const std::filesystem::path& path,
                       std::shared_ptr<const SampleGrid> grid);

namespace detail {

// Deterministic standard-normal stream: 53-bit uniforms from mt19937_64 fed
// through Box-Muller. std::normal_distribution is implementation-defined, so
// it cannot be used where bit-reproducibility is part of the contract.
class NormalStream {
  public:
    explicit NormalStream(std::uint64_t seed) : engine_(seed) {}

    double uniform() {  // (0, 1)
        const std::uint64_t bits = engine_() >> 11;
        return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
    }

    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * 3.14159265358979323846 * u2;
        spare_ = r * std::sin(theta);
        have_spare_ = true;
        return r * std::cos(theta);
    }

  private:
    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace detail

}  // namespace greennet
