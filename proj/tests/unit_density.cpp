#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>

#include "gradwave/density.hpp"
#include "gradwave/rng.hpp"

using namespace gradwave;

namespace {

GradientDensity uniform_density_1d(double lo, double hi, int bins, double value) {
    GradientDensity d;
    d.dim = 1;
    d.axes = make_bin_grid({lo}, {hi}, {bins});
    d.values.assign(bins, value);
    return d;
}

}  // namespace

TEST_CASE("bin grid geometry") {
    const auto axes = make_bin_grid({-1.0}, {1.0}, {4});
    CHECK(axes[0].step == doctest::Approx(0.5));
    CHECK(axes[0].center(0) == doctest::Approx(-0.75));
    CHECK(axes[0].center(3) == doctest::Approx(0.75));
    CHECK(axes[0].index_of(-0.99) == 0);
    CHECK(axes[0].index_of(0.99) == 3);
    CHECK(axes[0].index_of(1.01) == 4);  // outside: caller range-checks
}

TEST_CASE("integrate_ball on a uniform density") {
    const auto d = uniform_density_1d(-1.0, 1.0, 2000, 0.5);
    CHECK(integrate_ball(d, BallRegion({0.0}, 0.1)) == doctest::Approx(0.1).epsilon(0.02));
    CHECK(mean_in_ball(d, BallRegion({0.3}, 0.05)) == doctest::Approx(0.5).epsilon(0.01));
    // A ball covering every bin center recovers the normalization.
    CHECK(integrate_ball(d, BallRegion({0.0}, 0.9996)) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK_THROWS_AS(integrate_ball(d, BallRegion({2.0}, 0.1)), std::invalid_argument);
    CHECK_THROWS_AS(integrate_ball(d, BallRegion({0.0}, 1.5)), std::invalid_argument);
}

TEST_CASE("ball region validation") {
    CHECK_THROWS_AS(BallRegion({0.0}, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(BallRegion({0.0}, -0.1), std::invalid_argument);
}

TEST_CASE("rebin conserves mass and records dropped mass") {
    CounterRng rng(99);
    GradientDensity d;
    d.dim = 1;
    d.axes = make_bin_grid({-1.0}, {1.0}, {128});
    d.values.resize(128);
    for (int i = 0; i < 128; ++i) d.values[i] = rng.uniform01(i);
    const double mass = d.total_mass();

    SUBCASE("covering target keeps everything") {
        const auto r = rebin(d, make_bin_grid({-1.0}, {1.0}, {16}));
        CHECK(r.total_mass() == doctest::Approx(mass).epsilon(1e-12));
        CHECK(r.out_of_range_mass == doctest::Approx(0.0));
    }
    SUBCASE("narrow target drops and reports the tails") {
        const auto r = rebin(d, make_bin_grid({-0.5}, {0.5}, {16}));
        CHECK(r.total_mass() + r.out_of_range_mass == doctest::Approx(mass).epsilon(1e-12));
        CHECK(r.out_of_range_mass > 0.0);
    }
}

TEST_CASE("rebin in 2-D keeps the value of a flat density") {
    GradientDensity d;
    d.dim = 2;
    d.axes = make_bin_grid({-1.0, -1.0}, {1.0, 1.0}, {64, 64});
    d.values.assign(64 * 64, 0.25);
    const auto r = rebin(d, make_bin_grid({-1.0, -1.0}, {1.0, 1.0}, {8, 8}));
    for (double v : r.values) CHECK(v == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("density CSV serialization carries header and rows") {
    auto d = uniform_density_1d(-1.0, 1.0, 4, 0.5);
    d.tau = 0.125;
    const std::string path = "density_out.csv";
    save_density_csv(d, path);
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    CHECK(line.find("tau=0.125") != std::string::npos);
    CHECK(line.find("bin_volume=0.5") != std::string::npos);
    int rows = 0, headers = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line[0] == '#')
            ++headers;
        else if (!line.empty())
            ++rows;
    }
    CHECK(rows == 4);
    CHECK(headers >= 1);
    std::remove(path.c_str());
}

TEST_CASE("error mask bookkeeping") {
    auto m = ErrorMask::none(8);
    CHECK(m.empty_or_clear());
    m.excluded[2] = 1;
    m.excluded[5] = 1;
    CHECK(m.excluded_fraction() == doctest::Approx(0.25));
}
