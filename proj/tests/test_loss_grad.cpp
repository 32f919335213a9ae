#include <doctest.h>

#include <cmath>

#include "greennet/loss.hpp"
#include "greennet/dinkelbach.hpp"
#include "greennet/traffic.hpp"

using namespace greennet;

namespace {

Scenario grad_scenario(int per_side = 7, int n_bs = 5) {
    Scenario sc;
    sc.grid = std::make_shared<SampleGrid>(make_grid(1000.0, per_side));
    LognormalTrafficParams p;
    p.location = 2.0;
    p.scale = 1.2;
    p.spread = 1e-4;
    p.total = 2e10;
    p.seed = 4;
    sc.traffic = lognormal_traffic(sc.grid, p);
    sc.b_max = 1e9;
    sc.p_max = 20.0;
    sc.zeta_min = 0.1;
    sc.noise_psd = std::pow(10.0, -20.4);
    sc.n_bs = n_bs;
    sc.loss_defaults.alpha = 3.8;
    sc.loss_defaults.gamma = std::pow(10.0, 3.5);
    sc.loss_defaults.beta = std::pow(10.0, 3.5);
    sc.refresh_totals();
    return sc;
}

ParamVector random_params(const Scenario& sc, detail::NormalStream& rng,
                          double b_spread = 1.0, double p_spread = 1.0) {
    ParamVector params;
    params.layout.n_bs = sc.n_bs;
    params.values.resize(params.layout.size());
    for (int n = 0; n < sc.n_bs; ++n) {
        params.values[params.layout.x(n)] = rng.uniform() * sc.grid->edge;
        params.values[params.layout.y(n)] = rng.uniform() * sc.grid->edge;
        params.values[params.layout.bw(n)] =
            (0.3 + 0.7 * rng.uniform()) * b_spread * sc.b_max / sc.n_bs;
        params.values[params.layout.pw(n)] =
            (0.3 + 0.7 * rng.uniform()) * p_spread * sc.p_max / sc.n_bs;
    }
    params.apply_floors();
    return params;
}

// Distance (in relative terms) from the min/max kinks; used to skip
// configurations where the subgradient convention makes finite differences
// disagree by construction.
double kink_distance(const LossEval& eval, const ParamVector& params, const Scenario& sc) {
    double b_sum = 0.0, p_sum = 0.0;
    for (int n = 0; n < params.layout.n_bs; ++n) {
        b_sum += params.bw(n);
        p_sum += params.pw(n);
    }
    const double d_min = std::abs(eval.c_scaled - 1.0);
    const double d_b = std::abs(b_sum - sc.b_max) / sc.b_max;
    const double d_p = std::abs(p_sum - sc.p_max) / sc.p_max;
    const double d_z = std::abs(sc.zeta_min - eval.zeta);
    return std::min(std::min(d_min, d_b), std::min(d_p, d_z));
}

}  // namespace

TEST_CASE("loss basics") {
    const Scenario sc = grad_scenario();
    LossEvaluator eval(sc);
    detail::NormalStream rng(21);

    SUBCASE("all powers at the floor give near-zero utility") {
        ParamVector params = random_params(sc, rng);
        for (int n = 0; n < sc.n_bs; ++n) params.values[params.layout.pw(n)] = 0.0;
        params.apply_floors();
        const LossEval e = eval(params, {ObjectiveKind::iree, 0.0, 0.0}, false);
        CHECK(e.c_scaled > 0.0);
        CHECK(e.c_scaled < 1e-6);
        CHECK(std::abs(e.breakdown.total) < 1e-6);
    }

    SUBCASE("penalty scales linearly in omega") {
        ParamVector params = random_params(sc, rng, 1.8, 1.9);  // infeasible on purpose
        const LossEval e0 = eval(params, {ObjectiveKind::iree, 1e8, 0.0}, false);
        const LossEval e100 = eval(params, {ObjectiveKind::iree, 1e8, 100.0}, false);
        CHECK(e0.breakdown.penalty_term == 0.0);
        CHECK(e100.breakdown.penalty_term > 0.0);
        const double omega_unit = e100.breakdown.penalty_term / 100.0;
        const LossEval e37 = eval(params, {ObjectiveKind::iree, 1e8, 37.0}, false);
        CHECK(e37.breakdown.penalty_term == doctest::Approx(37.0 * omega_unit).epsilon(1e-12));
        CHECK(e100.breakdown.total - e0.breakdown.total ==
              doctest::Approx(e100.breakdown.penalty_term).epsilon(1e-12));
    }

    SUBCASE("loss vanishes at the Dinkelbach fixed point") {
        const ParamVector params = random_params(sc, rng, 0.9, 0.9);
        const double eta = update_iree(unpack_design(params, sc), sc);
        const LossEval e = eval(params, {ObjectiveKind::iree, eta, 0.0}, false);
        CHECK(std::abs(e.breakdown.total) <= 1e-12);
    }

    SUBCASE("breakdown sums to the total") {
        const ParamVector params = random_params(sc, rng, 1.4, 1.2);
        const LossEval e = eval(params, {ObjectiveKind::iree, 5e7, 42.0}, false);
        CHECK(e.breakdown.total == doctest::Approx(e.breakdown.utility_term +
                                                   e.breakdown.power_term +
                                                   e.breakdown.penalty_term)
                                       .epsilon(1e-15));
    }

    SUBCASE("non-finite parameters are rejected") {
        ParamVector params = random_params(sc, rng);
        params.values[0] = std::numeric_limits<double>::infinity();
        CHECK_THROWS_AS(eval(params, {ObjectiveKind::iree, 0.0, 0.0}, false), invalid_input);
    }

    SUBCASE("loss is invariant under station permutation") {
        ParamVector params = random_params(sc, rng);
        const LossEval a = eval(params, {ObjectiveKind::iree, 1e8, 10.0}, false);
        // rotate stations by one
        ParamVector rot = params;
        const auto& lay = params.layout;
        for (int n = 0; n < sc.n_bs; ++n) {
            const int src = (n + 1) % sc.n_bs;
            rot.values[lay.x(n)] = params.values[lay.x(src)];
            rot.values[lay.y(n)] = params.values[lay.y(src)];
            rot.values[lay.bw(n)] = params.values[lay.bw(src)];
            rot.values[lay.pw(n)] = params.values[lay.pw(src)];
        }
        const LossEval b = eval(rot, {ObjectiveKind::iree, 1e8, 10.0}, false);
        CHECK(b.breakdown.total ==
              doctest::Approx(a.breakdown.total).epsilon(1e-12));
    }
}

TEST_CASE("analytic gradient structure") {
    const Scenario sc = grad_scenario();
    LossEvaluator eval(sc);
    detail::NormalStream rng(31);

    SUBCASE("power gradient of the eta term is exactly eta~ * lambda") {
        // With omega = 0 and capacity saturated (C > D), only the xi and power
        // paths touch P_n; subtracting the xi part isolates eta * lambda.
        ParamVector params = random_params(sc, rng);
        const LossSettings with{ObjectiveKind::iree, 1e8, 0.0};
        const LossSettings without{ObjectiveKind::iree, 0.0, 0.0};
        const auto g1 = eval(params, with, true).gradient;
        const auto g0 = eval(params, without, true).gradient;
        const double eta_scaled = 1e8 * sc.p_max / sc.d_tot;
        for (int n = 0; n < sc.n_bs; ++n) {
            const double diff = g1[params.layout.pw(n)] - g0[params.layout.pw(n)];
            CHECK(diff == doctest::Approx(eta_scaled * sc.power_model.lambda / sc.p_max)
                              .epsilon(1e-12));
        }
    }

    SUBCASE("penalty-only symbols have zero gradient when constraints are slack") {
        const ParamVector params = random_params(sc, rng, 0.5, 0.5);
        const auto g_pen = eval(params, {ObjectiveKind::iree, 0.0, 100.0}, true).gradient;
        const auto g_base = eval(params, {ObjectiveKind::iree, 0.0, 0.0}, true).gradient;
        for (std::size_t i = 0; i < g_pen.size(); ++i)
            CHECK(g_pen[i] == doctest::Approx(g_base[i]).epsilon(1e-12));
    }
}

TEST_CASE("gradient matches central finite differences") {
    const Scenario sc = grad_scenario();
    LossEvaluator eval(sc, EvalBackend::serial);
    detail::NormalStream rng(57);

    int checked = 0;
    int attempts = 0;
    while (checked < 8 && attempts < 40) {
        ++attempts;
        const ParamVector params = random_params(sc, rng, 1.0 + 0.5 * (attempts % 3),
                                                 1.0 + 0.4 * (attempts % 2));
        const double eta_base = update_iree(unpack_design(params, sc), sc);
        const double eta = eta_base * (0.5 + rng.uniform());
        const double omega = (attempts % 2) ? 25.0 : 0.0;
        const LossSettings settings{ObjectiveKind::iree, eta, omega};

        const LossEval e = eval(params, settings, true);
        if (kink_distance(e, params, sc) < 1e-6) continue;  // skip kink-adjacent draws
        ++checked;

        const auto numeric = finite_diff_grad(params, eta, omega, sc);
        for (std::size_t i = 0; i < numeric.size(); ++i) {
            const double scale = std::max(std::abs(numeric[i]), 1e-12);
            if (std::abs(numeric[i]) < 1e-14 && std::abs(e.gradient[i]) < 1e-14) continue;
            CHECK(std::abs(e.gradient[i] - numeric[i]) / scale <= 1e-5);
        }
    }
    CHECK(checked == 8);
}

TEST_CASE("finite difference oracle sanity") {
    // antisymmetry of the stencil and zero along constant directions
    const auto f = [](const std::vector<double>& x) {
        return x[0] * x[0] - 3.0 * x[1];  // independent of x[2]
    };
    const auto g = fd::gradient(f, {2.0, 1.0, 5.0}, 1e-6);
    CHECK(g[0] == doctest::Approx(4.0).epsilon(1e-8));
    CHECK(g[1] == doctest::Approx(-3.0).epsilon(1e-8));
    CHECK(g[2] == doctest::Approx(0.0));
}

TEST_CASE("ee and se objectives") {
    const Scenario sc = grad_scenario();
    LossEvaluator eval(sc);
    detail::NormalStream rng(77);
    const ParamVector params = random_params(sc, rng);

    const LossEval iree_eval = eval(params, {ObjectiveKind::iree, 1e8, 0.0}, true);
    const LossEval ee_eval = eval(params, {ObjectiveKind::ee, 1e8, 0.0}, true);
    const LossEval se_eval = eval(params, {ObjectiveKind::se, 1e8, 0.0}, true);

    CHECK(ee_eval.breakdown.utility_term == doctest::Approx(-ee_eval.c_scaled));
    CHECK(ee_eval.xi == 0.0);
    CHECK(se_eval.breakdown.power_term == 0.0);  // eta ignored
    CHECK(ee_eval.breakdown.power_term == doctest::Approx(iree_eval.breakdown.power_term));

    // EE gradient against finite differences of the EE loss.
    LossEvaluator serial(sc, EvalBackend::serial);
    const LossSettings settings{ObjectiveKind::ee, 1e8, 50.0};
    ParamVector probe = params;
    for (std::size_t i = 0; i < params.values.size(); i += 3) {
        const double saved = probe.values[i];
        const double h = 1e-4 * (1.0 + std::abs(saved));
        probe.values[i] = saved + h;
        const double up = serial(probe, settings, false).breakdown.total;
        probe.values[i] = saved - h;
        const double down = serial(probe, settings, false).breakdown.total;
        probe.values[i] = saved;
        const double numeric = (up - down) / (2.0 * h);
        const LossEval e = serial(params, settings, true);
        if (std::abs(numeric) < 1e-14) continue;
        CHECK(std::abs(e.gradient[i] - numeric) / std::max(std::abs(numeric), 1e-12) <= 1e-5);
    }
}

TEST_CASE("serial and openmp backends are bit-identical") {
    const Scenario sc = grad_scenario(9, 6);
    LossEvaluator serial(sc, EvalBackend::serial);
    LossEvaluator parallel(sc, EvalBackend::openmp);
    detail::NormalStream rng(91);
    for (int t = 0; t < 10; ++t) {
        const ParamVector params = random_params(sc, rng, 1.5, 1.5);
        const LossSettings settings{ObjectiveKind::iree, 3e7 * t, t % 2 ? 100.0 : 0.0};
        const LossEval a = serial(params, settings, true);
        const LossEval b = parallel(params, settings, true);
        CHECK(a.breakdown.total == b.breakdown.total);  // bitwise
        CHECK(a.xi == b.xi);
        REQUIRE(a.gradient.size() == b.gradient.size());
        for (std::size_t i = 0; i < a.gradient.size(); ++i)
            CHECK(a.gradient[i] == b.gradient[i]);
    }
}

TEST_CASE("second order norm") {
    const Scenario sc = grad_scenario();

    SUBCASE("generic helpers on quadratic and linear test functions") {
        const auto quad = [](const std::vector<double>& x) {
            return 1.5 * x[0] * x[0] + 0.25 * x[1] * x[1];
        };
        CHECK(fd::second_difference(quad, {1.0, 2.0}, 0, 1e-4) ==
              doctest::Approx(3.0).epsilon(1e-5));
        CHECK(fd::second_difference(quad, {5.0, -3.0}, 0, 1e-4) ==
              doctest::Approx(3.0).epsilon(1e-5));  // constant curvature
        const auto lin = [](const std::vector<double>& x) { return 7.0 * x[0] - x[1]; };
        CHECK(std::abs(fd::second_difference(lin, {1.0, 1.0}, 0, 1e-4)) <= 1e-6);
    }

    SUBCASE("agrees with a second-difference-of-loss oracle") {
        detail::NormalStream rng(13);
        const ParamVector params = random_params(sc, rng);
        const double eta = 5e7;
        const double norm = second_order_norm(params, eta, 0.0, sc);
        CHECK(norm >= 0.0);

        LossEvaluator serial(sc, EvalBackend::serial);
        const LossSettings settings{ObjectiveKind::iree, eta, 0.0};
        double sq = 0.0;
        for (int n = 0; n < sc.n_bs; ++n) {
            const std::size_t i = params.layout.pw(n);
            const auto f = [&](const std::vector<double>& v) {
                ParamVector p = params;
                p.values = v;
                return serial(p, settings, false).breakdown.total;
            };
            const double d2 = fd::second_difference(f, params.values, i, 1e-5);
            sq += d2 * d2;
        }
        CHECK(norm == doctest::Approx(std::sqrt(sq)).epsilon(1e-3));
    }
}
