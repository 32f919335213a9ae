#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "greennet/metrics.hpp"
#include "greennet/traffic.hpp"
#include "oracles.hpp"

using namespace greennet;

namespace {

std::shared_ptr<SampleGrid> small_grid(int per_side = 4, double edge = 400.0) {
    return std::make_shared<SampleGrid>(make_grid(edge, per_side));
}

ScalarField field_of(std::shared_ptr<const SampleGrid> grid, std::vector<double> values) {
    ScalarField f;
    f.grid = std::move(grid);
    f.values = std::move(values);
    return f;
}

Scenario tiny_scenario(int per_side = 7, int n_bs = 3) {
    Scenario sc;
    sc.grid = std::make_shared<SampleGrid>(make_grid(1000.0, per_side));
    LognormalTrafficParams p;
    p.location = 2.0;
    p.scale = 1.0;
    p.spread = 1e-4;
    p.total = 5e9;
    p.seed = 11;
    sc.traffic = lognormal_traffic(sc.grid, p);
    sc.b_max = 1e9;
    sc.p_max = 20.0;
    sc.zeta_min = 0.0;
    sc.noise_psd = std::pow(10.0, -20.4);
    sc.n_bs = n_bs;
    sc.loss_defaults.alpha = 3.8;
    sc.loss_defaults.gamma = std::pow(10.0, 3.5);
    sc.loss_defaults.beta = std::pow(10.0, 3.5);
    sc.refresh_totals();
    return sc;
}

NetworkDesign spread_design(const Scenario& sc, double bw_frac = 1.0, double pw_frac = 0.5) {
    NetworkDesign d;
    for (int i = 0; i < sc.n_bs; ++i) {
        BaseStation bs;
        bs.location = {(i + 0.5) * sc.grid->edge / sc.n_bs,
                       (i + 0.5) * sc.grid->edge / sc.n_bs};
        bs.bandwidth = bw_frac * sc.b_max / sc.n_bs;
        bs.tx_power = pw_frac * sc.p_max / sc.n_bs;
        bs.loss = sc.loss_defaults;
        d.stations.push_back(bs);
    }
    return d;
}

}  // namespace

TEST_CASE("total over zero and constant fields") {
    auto grid = small_grid();
    CHECK(total(field_of(grid, std::vector<double>(grid->size(), 0.0))) == 0.0);
    const double c = 3.25;
    CHECK(total(field_of(grid, std::vector<double>(grid->size(), c))) ==
          doctest::Approx(c * 400.0 * 400.0).epsilon(1e-12));
}

TEST_CASE("js divergence on hand-computed two-sample fields") {
    auto grid = std::make_shared<SampleGrid>(make_grid(10.0, 2));
    // Four samples; put everything in the first two to mimic p=(1,0), q=(.5,.5).
    const ScalarField c = field_of(grid, {1.0, 0.0, 0.0, 0.0});
    const ScalarField d = field_of(grid, {0.5, 0.5, 0.0, 0.0});
    // JS = 1/2 KL(p||m) + 1/2 KL(q||m) with m = (0.75, 0.25): 0.311278...
    CHECK(js_divergence(c, d) == doctest::Approx(0.31127812445913283).epsilon(1e-12));
}

TEST_CASE("js divergence contracts") {
    auto grid = small_grid();
    detail::NormalStream rng(123);

    SUBCASE("scaled copies have zero divergence") {
        std::vector<double> v(grid->size());
        for (double& x : v) x = 0.1 + rng.uniform();
        const ScalarField a = field_of(grid, v);
        for (double& x : v) x *= 17.3;
        const ScalarField b = field_of(grid, v);
        CHECK(js_divergence(a, b) <= 1e-12);
    }

    SUBCASE("disjoint supports reach the base-2 maximum") {
        std::vector<double> v1(grid->size(), 0.0), v2(grid->size(), 0.0);
        for (std::size_t i = 0; i < grid->size(); ++i) (i % 2 ? v1 : v2)[i] = 1.0 + i;
        CHECK(js_divergence(field_of(grid, v1), field_of(grid, v2)) ==
              doctest::Approx(1.0).epsilon(1e-12));
    }

    SUBCASE("symmetry, range, and brute-force oracle on random fields") {
        for (int trial = 0; trial < 100; ++trial) {
            auto g = trial % 2 ? small_grid(4) : small_grid(3);
            std::vector<double> v1(g->size()), v2(g->size());
            for (double& x : v1) x = rng.uniform() < 0.2 ? 0.0 : rng.uniform();
            for (double& x : v2) x = rng.uniform() < 0.2 ? 0.0 : rng.uniform();
            if (std::all_of(v1.begin(), v1.end(), [](double x) { return x == 0.0; }))
                v1[0] = 0.5;
            if (std::all_of(v2.begin(), v2.end(), [](double x) { return x == 0.0; }))
                v2[1] = 0.5;
            const ScalarField a = field_of(g, v1);
            const ScalarField b = field_of(g, v2);
            const double ab = js_divergence(a, b);
            CHECK(ab >= 0.0);
            CHECK(ab <= 1.0);
            CHECK(std::abs(ab - js_divergence(b, a)) <= 1e-12);
            CHECK(ab == doctest::Approx(oracles::js_bruteforce(v1, v2, g->weight))
                            .epsilon(1e-12));
        }
    }

    SUBCASE("zero-total field is an error") {
        const ScalarField z = field_of(grid, std::vector<double>(grid->size(), 0.0));
        const ScalarField ok = field_of(grid, std::vector<double>(grid->size(), 1.0));
        CHECK_THROWS_AS(js_divergence(z, ok), undefined_divergence);
        CHECK_THROWS_AS(js_divergence(ok, z), undefined_divergence);
    }
}

TEST_CASE("power totals") {
    PowerModel pm;
    pm.lambda = 1.0;
    pm.p_circuit = 5.0;
    NetworkDesign d;
    for (int i = 0; i < 3; ++i) {
        BaseStation bs;
        bs.bandwidth = 1e6;
        bs.tx_power = 0.0;
        bs.loss.beta = 1.0;
        bs.loss.gamma = 1.0;
        d.stations.push_back(bs);
    }
    CHECK(power_total(d, pm) == doctest::Approx(15.0));

    pm.lambda = 1.0 / 0.38;
    NetworkDesign two;
    two.stations = {d.stations[0], d.stations[1]};
    two.stations[0].tx_power = 1.0;
    two.stations[1].tx_power = 1.0;
    CHECK(power_total(two, pm) == doctest::Approx(15.263157894736842).epsilon(1e-12));

    // additivity over station lists
    NetworkDesign one;
    one.stations = {two.stations[0]};
    CHECK(power_total(two, pm) ==
          doctest::Approx(2.0 * power_total(one, pm)).epsilon(1e-12));
}

TEST_CASE("iree identity and utility indicator") {
    const Scenario sc = tiny_scenario();
    const NetworkDesign d = spread_design(sc);
    const ScalarField c = capacity_field(d, sc, CapacityModel::lower_bound);

    const double eta = iree(c, sc.traffic, d, sc);
    const double xi = js_divergence(c, sc.traffic);
    const double p_t = power_total(d, sc.power_model);
    const double min_cd = std::min(total(c), total(sc.traffic));

    // eta * P_T + min(C,D) * xi == min(C,D)  (Eq. (5) rearranged)
    CHECK(eta * p_t + min_cd * xi == doctest::Approx(min_cd).epsilon(1e-12));

    SUBCASE("zeta equals 1 - xi when capacity is oversupplied") {
        // Scale capacity up artificially so C_Tot >= D_Tot.
        ScalarField big = c;
        const double boost = 2.0 * total(sc.traffic) / total(c);
        for (double& v : big.values) v *= boost;
        const double zeta = utility_indicator(big, sc.traffic);
        const double xi_big = js_divergence(big, sc.traffic);
        CHECK(zeta == doctest::Approx(1.0 - xi_big).epsilon(1e-14));
        CHECK(zeta >= 0.0);
        CHECK(zeta <= 1.0);
    }

    SUBCASE("identical fields give zeta = 1") {
        CHECK(utility_indicator(sc.traffic, sc.traffic) == doctest::Approx(1.0).epsilon(1e-12));
    }

    SUBCASE("xi = 1 forces iree to 0") {
        // Disjoint supports: traffic on even cells, capacity on odd ones.
        std::vector<double> v1(sc.grid->size(), 0.0), v2(sc.grid->size(), 0.0);
        for (std::size_t i = 0; i < v1.size(); ++i) (i % 2 ? v1 : v2)[i] = 1.0;
        const ScalarField a = field_of(sc.grid, v1);
        const ScalarField b = field_of(sc.grid, v2);
        CHECK(iree(a, b, d, sc) == doctest::Approx(0.0).epsilon(1e-12));
    }
}

TEST_CASE("given_iree_utility fixed point and monotonicity in eta") {
    const Scenario sc = tiny_scenario();
    const NetworkDesign d = spread_design(sc);
    const ScalarField c = capacity_field(d, sc, CapacityModel::lower_bound);
    const double eta0 = iree(c, sc.traffic, d, sc);

    CHECK(given_iree_utility(d, sc, 0.0) >= 0.0);
    CHECK(std::abs(given_iree_utility(d, sc, eta0)) <=
          1e-12 * std::min(total(c), sc.d_tot));
    // linear and decreasing in eta
    const double u1 = given_iree_utility(d, sc, eta0);
    const double u2 = given_iree_utility(d, sc, 2.0 * eta0);
    CHECK(u2 < u1);
}

TEST_CASE("feasibility residuals") {
    const Scenario sc = tiny_scenario();

    SUBCASE("feasible design is all zeros") {
        const NetworkDesign d = spread_design(sc, 0.9, 0.5);
        const FeasibilityResidual r = feasibility_residual(d, sc);
        CHECK(r.d_zeta == 0.0);  // zeta_min = 0
        CHECK(r.d_bandwidth == 0.0);
        CHECK(r.d_power == 0.0);
        CHECK(r.feasible());
    }

    SUBCASE("one extra hertz appears in the residual") {
        NetworkDesign d = spread_design(sc, 1.0, 0.5);
        d.stations[0].bandwidth += 1.0;
        const FeasibilityResidual r = feasibility_residual(d, sc);
        CHECK(r.d_bandwidth == doctest::Approx(1.0).epsilon(1e-6));
    }

    SUBCASE("zeta shortfall is reported") {
        Scenario strict = sc;
        strict.zeta_min = 0.9;  // unreachable for this tiny design
        const NetworkDesign d = spread_design(strict, 1.0, 0.5);
        const ScalarField c = capacity_field(d, strict, CapacityModel::lower_bound);
        const double zeta = utility_indicator(c, strict.traffic);
        const FeasibilityResidual r = feasibility_residual(d, strict);
        CHECK(r.d_zeta == doctest::Approx(0.9 - zeta).epsilon(1e-12));
    }
}

TEST_CASE("metric report is self-consistent") {
    const Scenario sc = tiny_scenario();
    const NetworkDesign d = spread_design(sc);
    for (CapacityModel model : {CapacityModel::lower_bound, CapacityModel::exact}) {
        const MetricReport r = report_for_design(d, sc, model);
        CHECK(r.xi >= 0.0);
        CHECK(r.xi <= 1.0);
        CHECK(r.iree ==
              doctest::Approx(std::min(r.c_tot, r.d_tot) * (1.0 - r.xi) / r.p_t).epsilon(1e-12));
        CHECK(r.ee == doctest::Approx(r.c_tot / r.p_t).epsilon(1e-12));
        CHECK(r.se == doctest::Approx(r.c_tot / sc.b_max).epsilon(1e-12));
        CHECK(r.zeta ==
              doctest::Approx(std::min(r.c_tot, r.d_tot) * (1.0 - r.xi) / r.d_tot).epsilon(1e-12));
    }
}
