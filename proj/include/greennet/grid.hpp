#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "greennet/geometry.hpp"

namespace greennet {

// Uniform cell-centered discretization of a square area. Points are stored in
// raster order with x varying fastest: index m = iy * per_side + ix.
struct SampleGrid {
    std::vector<Point2D> points;  // M cell centers
    double weight = 0.0;          // m^2 per sample (uniform cell area)
    double edge = 0.0;            // m, side length of the square area

    std::size_t size() const { return points.size(); }
    double area() const { return edge * edge; }
};

SampleGrid make_grid(double edge_length_m, int m_per_side);

// Nonnegative per-sample density over a grid (bit/s/m^2 for traffic and
// capacity fields). Immutable after construction; shared via the grid pointer.
struct ScalarField {
    std::shared_ptr<const SampleGrid> grid;
    std::vector<double> values;  // bit/s/m^2, one per grid point

    void validate() const;
};

// Quadrature total  sum_m values[m] * weight,  bit/s.
double total(const ScalarField& field);

// Scale every value by one constant so that total(result) == new_total.
ScalarField rescale_total(const ScalarField& field, double new_total);

}  // namespace greennet
