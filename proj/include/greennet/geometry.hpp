#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "greennet/errors.hpp"

namespace greennet {

struct Point2D {
    double x = 0.0;  // m
    double y = 0.0;  // m

    bool finite() const { return std::isfinite(x) && std::isfinite(y); }
};

inline Point2D operator-(const Point2D& a, const Point2D& b) { return {a.x - b.x, a.y - b.y}; }

inline double squared_norm(const Point2D& p) { return p.x * p.x + p.y * p.y; }

// Normalized path-loss model  L = gamma * [(L-Ln)^T Shape (L-Ln)]^(alpha/2) + beta.
// Shape is the 2x2 SPD matrix of the anisotropic generalization; identity gives
// the plain gamma*d^alpha + beta law.
struct PathLossParams {
    double alpha = 3.8;   // exponent, > 2
    double beta = 0.0;    // linear offset, > 0
    double gamma = 0.0;   // linear scale, > 0
    std::array<std::array<double, 2>, 2> shape{{{1.0, 0.0}, {0.0, 1.0}}};

    void validate() const {
        if (!(alpha > 2.0)) throw invalid_input("path loss: alpha must be > 2");
        if (!(beta > 0.0)) throw invalid_input("path loss: beta must be > 0");
        if (!(gamma > 0.0)) throw invalid_input("path loss: gamma must be > 0");
        const double a = shape[0][0], b = shape[0][1], c = shape[1][0], d = shape[1][1];
        if (!(std::isfinite(a) && std::isfinite(b) && std::isfinite(c) && std::isfinite(d)))
            throw invalid_input("path loss: shape has non-finite entries");
        if (b != c) throw invalid_input("path loss: shape must be symmetric");
        if (!(a > 0.0 && a * d - b * c > 0.0))
            throw invalid_input("path loss: shape must be positive definite");
    }

    // (p)^T Shape (p)
    double quad_form(const Point2D& p) const {
        return shape[0][0] * p.x * p.x + 2.0 * shape[0][1] * p.x * p.y +
               shape[1][1] * p.y * p.y;
    }
};

struct BaseStation {
    Point2D location;
    double bandwidth = 0.0;  // Hz, >= 0
    double tx_power = 0.0;   // W, >= 0
    PathLossParams loss;

    void validate() const {
        if (!location.finite()) throw invalid_input("base station: non-finite location");
        if (!(bandwidth >= 0.0)) throw invalid_input("base station: bandwidth must be >= 0");
        if (!(tx_power >= 0.0)) throw invalid_input("base station: tx power must be >= 0");
        loss.validate();
    }
};

// The decision variables {L_n, B_n, P_n}. Budget feasibility is a scenario
// property (training deliberately visits infeasible points), checked by
// feasibility_residual, not here.
struct NetworkDesign {
    std::vector<BaseStation> stations;

    std::size_t size() const { return stations.size(); }

    void validate() const {
        if (stations.empty()) throw invalid_input("design: needs at least one station");
        for (const auto& bs : stations) bs.validate();
    }
};

}  // namespace greennet
