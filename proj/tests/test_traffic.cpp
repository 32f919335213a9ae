#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "greennet/traffic.hpp"

using namespace greennet;

namespace {

std::filesystem::path temp_file(const char* name) {
    return std::filesystem::temp_directory_path() / name;
}

}  // namespace

TEST_CASE("make_grid produces cell centers and exact area partition") {
    const SampleGrid g = make_grid(5000.0, 2);
    REQUIRE(g.size() == 4);
    CHECK(g.weight == doctest::Approx(6.25e6).epsilon(1e-15));
    CHECK(g.points[0].x == doctest::Approx(1250.0));
    CHECK(g.points[0].y == doctest::Approx(1250.0));
    CHECK(g.points[1].x == doctest::Approx(3750.0));  // x varies fastest
    CHECK(g.points[1].y == doctest::Approx(1250.0));
    CHECK(g.points[2].y == doctest::Approx(3750.0));

    const SampleGrid paper = make_grid(5000.0, 36);
    CHECK(paper.size() == 1296);  // desk-scale stand-in for the M = 1300 grid
    CHECK(paper.size() * paper.weight == doctest::Approx(5000.0 * 5000.0).epsilon(1e-12));

    CHECK_THROWS_AS(make_grid(0.0, 4), invalid_input);
    CHECK_THROWS_AS(make_grid(100.0, 1), invalid_input);
}

TEST_CASE("lognormal traffic hits the requested total for any seed") {
    auto grid = std::make_shared<SampleGrid>(make_grid(5000.0, 12));
    LognormalTrafficParams p;
    p.location = 19.0;
    p.scale = 2.8;
    p.spread = 0.0012;
    p.total = 8.9e12;  // rural preset
    for (std::uint64_t seed : {1ull, 7ull, 42ull, 12345ull}) {
        p.seed = seed;
        const ScalarField f = lognormal_traffic(grid, p);
        CHECK(total(f) == doctest::Approx(8.9e12).epsilon(1e-9));
        for (double v : f.values) CHECK(v >= 0.0);
    }

    p.scale = 2.4;
    p.spread = 0.003;
    p.total = 9.7e12;  // urban preset
    p.seed = 3;
    CHECK(total(lognormal_traffic(grid, p)) == doctest::Approx(9.7e12).epsilon(1e-9));
}

TEST_CASE("lognormal traffic is bit-reproducible and seed-sensitive") {
    auto grid = std::make_shared<SampleGrid>(make_grid(2000.0, 8));
    LognormalTrafficParams p;
    p.location = 5.0;
    p.scale = 1.0;
    p.spread = 1e-4;
    p.total = 1e9;
    p.seed = 77;
    const ScalarField a = lognormal_traffic(grid, p);
    const ScalarField b = lognormal_traffic(grid, p);
    CHECK(a.values == b.values);  // bitwise
    p.seed = 78;
    const ScalarField c = lognormal_traffic(grid, p);
    CHECK(a.values != c.values);
}

TEST_CASE("degenerate scale gives a constant field") {
    auto grid = std::make_shared<SampleGrid>(make_grid(1000.0, 5));
    LognormalTrafficParams p;
    p.location = 3.0;
    p.scale = 0.0;
    p.spread = 1e-4;
    p.total = 4e6;
    p.seed = 1;
    const ScalarField f = lognormal_traffic(grid, p);
    const double expect = p.total / (1000.0 * 1000.0);  // total/area everywhere
    for (double v : f.values) CHECK(v == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("smoothing correlates neighbours while keeping the marginal scale") {
    auto grid = std::make_shared<SampleGrid>(make_grid(1000.0, 20));  // 50 m cells
    LognormalTrafficParams rough;
    rough.location = 2.0;
    rough.scale = 1.2;
    rough.spread = 1.0;  // correlation length 1 m: effectively white
    rough.total = 1e6;
    rough.seed = 5;
    LognormalTrafficParams smooth = rough;
    smooth.spread = 1.0 / (200.0 * 200.0);  // correlation length 200 m

    const ScalarField a = lognormal_traffic(grid, rough);
    const ScalarField b = lognormal_traffic(grid, smooth);

    // Lag-1 autocorrelation of the log-field along x.
    const auto lag1 = [&](const ScalarField& f) {
        std::vector<double> logs(f.values.size());
        for (std::size_t i = 0; i < logs.size(); ++i) logs[i] = std::log(f.values[i]);
        double mean = 0.0;
        for (double v : logs) mean += v;
        mean /= logs.size();
        double num = 0.0, den = 0.0;
        for (int y = 0; y < 20; ++y)
            for (int x = 0; x + 1 < 20; ++x) {
                const double u = logs[y * 20 + x] - mean;
                const double v = logs[y * 20 + x + 1] - mean;
                num += u * v;
                den += u * u;
            }
        return num / den;
    };
    CHECK(lag1(b) > lag1(a) + 0.3);
    CHECK(lag1(b) > 0.5);
}

TEST_CASE("field CSV round trip and error contracts") {
    auto grid = std::make_shared<SampleGrid>(make_grid(300.0, 3));
    LognormalTrafficParams p;
    p.location = 1.0;
    p.scale = 0.7;
    p.spread = 1e-3;
    p.total = 1234.5;
    p.seed = 9;
    const ScalarField f = lognormal_traffic(grid, p);

    const auto path = temp_file("gn_traffic_roundtrip.csv");
    save_field(f, path);
    const ScalarField g = load_field(path, grid);
    CHECK(f.values == g.values);  // 17 significant digits survive the trip

    SUBCASE("zero field loads") {
        ScalarField z;
        z.grid = grid;
        z.values.assign(grid->size(), 0.0);
        save_field(z, path);
        const ScalarField back = load_field(path, grid);
        CHECK(total(back) == 0.0);
    }

    SUBCASE("row count mismatch") {
        auto small = std::make_shared<SampleGrid>(make_grid(300.0, 2));
        CHECK_THROWS_AS(load_field(path, small), length_mismatch);
    }

    SUBCASE("negative density") {
        std::ofstream bad(path);
        bad << "x_m,y_m,density_bps_per_m2\n50,50,-1\n";
        bad.close();
        CHECK_THROWS_AS(load_field(path, grid), negative_value);
    }

    SUBCASE("parse failure") {
        std::ofstream bad(path);
        bad << "x_m,y_m,density_bps_per_m2\n50,50,banana\n";
        bad.close();
        CHECK_THROWS_AS(load_field(path, grid), parse_error);
    }

    SUBCASE("wrong header") {
        std::ofstream bad(path);
        bad << "a,b,c\n1,2,3\n";
        bad.close();
        CHECK_THROWS_AS(load_field(path, grid), parse_error);
    }
    std::filesystem::remove(path);
}

TEST_CASE("rescale_total contracts") {
    auto grid = std::make_shared<SampleGrid>(make_grid(100.0, 2));
    ScalarField f;
    f.grid = grid;
    f.values = {1.0, 2.0, 3.0, 4.0};

    const double now = total(f);
    const ScalarField same = rescale_total(f, now);
    for (std::size_t i = 0; i < 4; ++i)
        CHECK(same.values[i] == doctest::Approx(f.values[i]).epsilon(1e-15));

    const ScalarField twice = rescale_total(f, 2.0 * now);
    for (std::size_t i = 0; i < 4; ++i)
        CHECK(twice.values[i] == doctest::Approx(2.0 * f.values[i]).epsilon(1e-15));

    ScalarField zero;
    zero.grid = grid;
    zero.values.assign(4, 0.0);
    CHECK_THROWS_AS(rescale_total(zero, 1.0), invalid_input);
}
