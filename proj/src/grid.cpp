#include "greennet/grid.hpp"

#include "greennet/reduce.hpp"

namespace greennet {

SampleGrid make_grid(double edge_length_m, int m_per_side) {
    if (!(edge_length_m > 0.0)) throw invalid_input("make_grid: edge length must be > 0");
    if (m_per_side < 2) throw invalid_input("make_grid: need at least 2 samples per side");

    SampleGrid grid;
    grid.edge = edge_length_m;
    const double cell = edge_length_m / m_per_side;
    grid.weight = cell * cell;
    grid.points.reserve(static_cast<std::size_t>(m_per_side) * m_per_side);
    for (int iy = 0; iy < m_per_side; ++iy)
        for (int ix = 0; ix < m_per_side; ++ix)
            grid.points.push_back({(ix + 0.5) * cell, (iy + 0.5) * cell});
    return grid;
}

void ScalarField::validate() const {
    if (!grid) throw invalid_input("field: missing grid");
    if (values.size() != grid->size())
        throw length_mismatch("field: value count does not match grid");
    for (double v : values) {
        if (!std::isfinite(v)) throw invalid_input("field: non-finite value");
        if (v < 0.0) throw negative_value("field: negative density");
    }
}

double total(const ScalarField& field) {
    field.validate();
    return pairwise_sum(field.values.data(), field.values.size()) * field.grid->weight;
}

ScalarField rescale_total(const ScalarField& field, double new_total) {
    if (!(new_total >= 0.0) || !std::isfinite(new_total))
        throw invalid_input("rescale_total: target must be finite and >= 0");
    const double current = total(field);
    if (current <= 0.0 && new_total > 0.0)
        throw invalid_input("rescale_total: cannot rescale a zero field to a positive total");
    ScalarField out = field;
    if (current > 0.0) {
        const double k = new_total / current;
        for (double& v : out.values) v *= k;
    }
    return out;
}

}  // namespace greennet
