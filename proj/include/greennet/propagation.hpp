#pragma once

#include "greennet/geometry.hpp"

namespace greennet {

// Radio constants shared by every capacity expression.
struct RadioEnv {
    double b_max = 0.0;      // Hz, total bandwidth budget
    double noise_psd = 0.0;  // W/Hz, AWGN power spectral density
};

// Linear path loss L = gamma * [(loc-bs)^T Shape (loc-bs)]^(alpha/2) + beta.
// Strictly increasing in distance along any ray; L(0) = beta.
double path_loss(const Point2D& loc, const Point2D& bs_loc, const PathLossParams& params);

// SE-based radial basis function of one station,
//   S = log2(1 + P / (B_max * sigma^2 * L(loc))),   bit/s/Hz.
// Radially non-increasing away from the station; zero iff tx_power is zero.
double se_rbf(const BaseStation& bs, const Point2D& loc, const RadioEnv& env);

// Capacity lower bound  C_S(loc) = sum_n B_n * S_n(loc),  bit/s.
double capacity_lower_bound(const NetworkDesign& design, const Point2D& loc, const RadioEnv& env);

// Exact per-station Shannon capacity
//   C_T(loc) = sum_n B_n log2(1 + P_n / (sigma^2 B_n L_n(loc))),  bit/s,
// with the B_n -> 0 limit value 0 per term.
double capacity_exact(const NetworkDesign& design, const Point2D& loc, const RadioEnv& env);

namespace detail {

// Unchecked kernels used by the hot loops once inputs are validated.

inline double path_loss_raw(const Point2D& loc, const Point2D& bs_loc,
                            const PathLossParams& p) {
    const double q = p.quad_form(loc - bs_loc);
    return p.gamma * std::pow(q, 0.5 * p.alpha) + p.beta;
}

inline double se_rbf_raw(double tx_power, double loss, const RadioEnv& env) {
    return std::log2(1.0 + tx_power / (env.b_max * env.noise_psd * loss));
}

inline double shannon_term_raw(double bandwidth, double tx_power, double loss,
                               double noise_psd) {
    if (bandwidth <= 0.0) return 0.0;  // limit value of B log2(1 + c/B)
    return bandwidth * std::log2(1.0 + tx_power / (noise_psd * bandwidth * loss));
}

}  // namespace detail

}  // namespace greennet
