#include "greennet/params.hpp"

namespace greennet {

ParamVector pack_design(const NetworkDesign& design) {
    design.validate();
    ParamVector p;
    p.layout.n_bs = static_cast<int>(design.size());
    p.values.resize(p.layout.size());
    for (int n = 0; n < p.layout.n_bs; ++n) {
        const auto& bs = design.stations[n];
        p.values[p.layout.x(n)] = bs.location.x;
        p.values[p.layout.y(n)] = bs.location.y;
        p.values[p.layout.bw(n)] = bs.bandwidth;
        p.values[p.layout.pw(n)] = bs.tx_power;
    }
    return p;
}

NetworkDesign unpack_design(const ParamVector& params, const Scenario& scenario) {
    NetworkDesign design;
    design.stations.resize(params.layout.n_bs);
    for (int n = 0; n < params.layout.n_bs; ++n) {
        auto& bs = design.stations[n];
        bs.location = {params.x(n), params.y(n)};
        bs.bandwidth = params.bw(n);
        bs.tx_power = params.pw(n);
        bs.loss = scenario.loss_defaults;
    }
    return design;
}

std::vector<double> param_scales(const ParamLayout& layout, const Scenario& scenario) {
    std::vector<double> s(layout.size());
    for (int n = 0; n < layout.n_bs; ++n) {
        s[layout.x(n)] = scenario.grid->edge;
        s[layout.y(n)] = scenario.grid->edge;
        s[layout.bw(n)] = scenario.b_max;
        s[layout.pw(n)] = scenario.p_max;
    }
    return s;
}

}  // namespace greennet
