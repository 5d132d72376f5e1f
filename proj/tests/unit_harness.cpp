#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>

#include "gradwave/harness.hpp"

using namespace gradwave;

namespace {

GradientDensity flat_1d(double lo, double hi, int bins, double value) {
    GradientDensity d;
    d.dim = 1;
    d.axes = make_bin_grid({lo}, {hi}, {bins});
    d.values.assign(bins, value);
    return d;
}

}  // namespace

TEST_CASE("l1_error identities") {
    const auto a = flat_1d(-1, 1, 40, 0.5);
    const auto b = flat_1d(-1, 1, 40, 0.45);
    CHECK(l1_error(a, a) == 0.0);
    CHECK(l1_error(a, b) == doctest::Approx(0.1));
    CHECK(l1_error(a, b) == doctest::Approx(l1_error(b, a)));
    const auto c = flat_1d(-1, 1, 32, 0.5);
    CHECK_THROWS_AS(l1_error(a, c), std::invalid_argument);
}

TEST_CASE("l1_error skips masked bins") {
    const auto a = flat_1d(-1, 1, 10, 0.5);
    auto b = flat_1d(-1, 1, 10, 0.5);
    b.values[3] = 99.0;
    auto mask = ErrorMask::none(10);
    mask.excluded[3] = 1;
    CHECK(l1_error(a, b, mask) == 0.0);
    CHECK(l1_error(a, b) > 1.0);
}

TEST_CASE("loglog_fit recovers exact power laws") {
    std::vector<double> x, y;
    for (int i = 1; i <= 12; ++i) {
        x.push_back(std::pow(2.0, i));
        y.push_back(3.0 * std::pow(x.back(), -0.5));
    }
    const auto fit = loglog_fit(x, y);
    CHECK(fit.slope == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(fit.r2 == doctest::Approx(1.0));
    CHECK_THROWS_AS(loglog_fit({1.0}, {1.0}), std::invalid_argument);
    CHECK_THROWS_AS(loglog_fit({1.0, -2.0}, {1.0, 1.0}), std::invalid_argument);
}

TEST_CASE("coefficient_of_variation basics") {
    CHECK(coefficient_of_variation({2.0, 2.0, 2.0}) == doctest::Approx(0.0));
    CHECK(coefficient_of_variation({1.0, 3.0}) == doctest::Approx(std::sqrt(2.0) / 2.0));
}

TEST_CASE("geometric_taus halves by default") {
    const auto taus = geometric_taus(0.8, 4);
    REQUIRE(taus.size() == 4);
    CHECK(taus[0] == doctest::Approx(0.8));
    CHECK(taus[3] == doctest::Approx(0.1));
    CHECK_THROWS_AS(geometric_taus(-1.0, 4), std::invalid_argument);
}

TEST_CASE("tau_sweep on the flat fixture: errors shrink, near-monotone L1") {
    const auto f = catalog("quadratic1d");
    const auto dom = f.default_domain();
    const GridSpec grid({1 << 13});
    const Tau tau0 = choose_tau(dom, grid, f.grad_bound, 1.5);
    const auto taus = geometric_taus(tau0.value * 128, 8);  // 8 halvings down to tau0
    const auto report =
        tau_sweep(f, dom, grid, taus, BallRegion({0.3}, 0.05), default_compare_grid(f));

    const auto& l1 = report.metric("l1_vs_oracle");
    for (std::size_t i = 1; i < l1.size(); ++i)
        CHECK(l1[i] <= l1[i - 1] * 1.10);  // 10% non-monotonicity allowance
    const auto& err = report.metric("ball_mass_abs_err");
    CHECK(err.back() < err.front());
    CHECK(std::abs(report.metric("ball_mass").back() - 0.05) <= 0.005);
    CHECK(report.metric("oracle_ball_mass")[0] == doctest::Approx(0.05).epsilon(1e-6));
    REQUIRE(report.fit.has_value());
}

TEST_CASE("tau_sweep rejects empty and Nyquist-violating grids") {
    const auto f = catalog("quadratic1d");
    const auto dom = f.default_domain();
    const GridSpec grid({256});
    CHECK_THROWS_AS(
        tau_sweep(f, dom, grid, {}, BallRegion({0.3}, 0.05), default_compare_grid(f)),
        std::invalid_argument);
    // tau far below the validity floor for this grid
    CHECK_THROWS_AS(tau_sweep(f, dom, grid, {1e-9}, BallRegion({0.3}, 0.05),
                              default_compare_grid(f)),
                    std::invalid_argument);
}

TEST_CASE("sweeps are reproducible") {
    const auto f = catalog("quadratic1d");
    const auto dom = f.default_domain();
    const GridSpec grid({1 << 12});
    const Tau tau0 = choose_tau(dom, grid, f.grad_bound, 1.5);
    const auto taus = geometric_taus(tau0.value * 8, 4);
    const auto a =
        tau_sweep(f, dom, grid, taus, BallRegion({0.3}, 0.05), default_compare_grid(f));
    const auto b =
        tau_sweep(f, dom, grid, taus, BallRegion({0.3}, 0.05), default_compare_grid(f));
    for (std::size_t m = 0; m < a.metrics.size(); ++m)
        for (std::size_t i = 0; i < a.metrics[m].second.size(); ++i)
            CHECK(a.metrics[m].second[i] == b.metrics[m].second[i]);
}

TEST_CASE("alpha_sweep converges to the local density value") {
    const auto f = catalog("quadratic1d");
    const auto dom = f.default_domain();
    const GridSpec grid({1 << 14});
    const auto report = alpha_sweep(f, dom, grid, choose_tau(dom, grid, f.grad_bound),
                                    {0.0}, {0.4, 0.2, 0.1, 0.05});
    for (double m : report.metric("mean_in_ball"))
        CHECK(m == doctest::Approx(0.5).epsilon(0.06));  // ±0.03 absolute

    CHECK_THROWS_AS(alpha_sweep(f, dom, grid, choose_tau(dom, grid, f.grad_bound), {0.0},
                                {0.4, 1e-6}),
                    std::invalid_argument);
}

TEST_CASE("alpha_sweep approaches the arcsine value on the two-point fixture") {
    const auto f = catalog("cosine1d");
    const auto dom = f.default_domain();
    const GridSpec grid({1 << 15});
    const auto report = alpha_sweep(f, dom, grid, choose_tau(dom, grid, f.grad_bound),
                                    {0.5}, {0.4, 0.2, 0.1, 0.05});
    const auto& means = report.metric("mean_in_ball");
    const double target = report.metric("oracle_value")[0];
    CHECK(std::abs(means.back() - target) < std::abs(means.front() - target));
    CHECK(means.back() == doctest::Approx(target).epsilon(0.02));
}

TEST_CASE("ball mass outside the gradient range dies with tau") {
    const auto f = catalog("quadratic1d");
    const auto dom = f.default_domain();
    const GridSpec grid({1 << 15});
    const Tau tau_min = choose_tau(dom, grid, 2.2, 1.5);
    const auto taus = geometric_taus(tau_min.value * 64, 7);
    const auto rep =
        tau_sweep(f, dom, grid, taus, BallRegion({2.0}, 0.05), default_compare_grid(f));
    const auto& mass = rep.metric("ball_mass");
    CHECK(rep.metric("oracle_ball_mass")[0] == doctest::Approx(0.0));
    CHECK(mass.back() < 0.2 * mass.front());
    REQUIRE(rep.fit.has_value());
    CHECK(rep.fit->slope > 0.5);
}

TEST_CASE("the four estimators concord on the two-point fixture") {
    const auto f = catalog("cosine1d");
    const auto dom = f.default_domain();
    const auto field = sample_field(f, dom, GridSpec({4096}));
    const auto compare = default_compare_grid(f);
    const auto oracle = oracle_density_grid(f, dom, compare.axes, compare.oracle);

    const auto wave = rebin(power_spectrum_density(field, choose_tau(field, f.grad_bound)),
                            compare.axes);
    const auto fd = finite_diff_gradients(field);
    const auto hist = histogram_density(fd, compare.axes);
    const auto charfn = charfn_density(fd, 1.0, 64, compare.axes);
    const auto mc = monte_carlo_density(f, dom, 10'000'000, compare.axes, 777);

    const GradientDensity* densities[] = {&wave, &charfn, &hist, &mc};
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            CHECK(l1_error(*densities[i], *densities[j], oracle.mask) <= 0.08);
    CHECK(charfn.clipped_mass <= 0.02);
}

TEST_CASE("decay_check guards against interior u0") {
    const auto f = catalog("quadratic1d");
    const auto dom = f.default_domain();
    const GridSpec grid({1 << 12});
    CHECK_THROWS_AS(decay_check(f, dom, grid, {0.5}, {1e-2, 5e-3}), std::invalid_argument);
}

TEST_CASE("decay_check measures the vanishing-density rate on two fixtures") {
    {
        const auto f = catalog("quadratic1d");
        const auto dom = f.default_domain();
        const GridSpec grid({1 << 15});
        const Tau tmin = choose_tau(dom, grid, 1.5, 1.5);
        const auto report = decay_check(f, dom, grid, {1.5}, geometric_taus(tmin.value * 128, 8));
        CHECK(report.fit->slope >= 0.8);
        CHECK(report.all_pass());
    }
    {
        const auto f = catalog("doublewell1d");
        const auto dom = f.default_domain();
        const GridSpec grid({1 << 15});
        const Tau tmin = choose_tau(dom, grid, 10.0, 1.5);
        const auto report = decay_check(f, dom, grid, {10.0}, geometric_taus(tmin.value * 128, 8));
        CHECK(report.fit->slope >= 0.8);
    }
}

TEST_CASE("spa_agreement rejects degenerate inputs") {
    const auto f = catalog("quadratic1d");
    const auto dom = f.default_domain();
    const GridSpec grid({1 << 12});
    // Outside the gradient range: no stationary points to compare against.
    CHECK_THROWS_AS(spa_agreement(f, dom, grid, {1.7}, {1e-3}), std::invalid_argument);

    // Constant field: the Hessian vanishes identically, u=0 sits in C.
    TestFunction c;
    c.dim = 1;
    c.eval = [](const Vec3&) { return 1.0; };
    c.grad = [](const Vec3&) { return Vec3{0, 0, 0}; };
    c.hess = [](const Vec3&) { return Mat3{}; };
    c.grad_bound = 1.0;
    CHECK_THROWS_AS(spa_agreement(c, BoxDomain({-1.0}, {1.0}), grid, {0.0}, {1e-3}),
                    density_undefined_error);
}

TEST_CASE("n_rate_1d accepts non-doubling lists and fits what it gets") {
    const auto f = catalog("quadratic1d");
    const auto dom = f.default_domain();
    CompareGrid cmp = default_compare_grid(f);
    cmp.axes = make_bin_grid({-0.9}, {0.9}, {64});
    const double c_tau = 2.0 * f.grad_bound * dom.max_width() / M_PI;
    const auto report = n_rate_1d(f, dom, {1000, 2304, 4096, 11111}, c_tau, cmp);
    CHECK(report.axis.size() == 4);
    CHECK(report.fit->slope < 0.0);
}

TEST_CASE("masked fraction on catalog fixtures stays small") {
    for (const char* name : {"quadratic1d", "cosine1d", "doublewell1d"}) {
        const auto f = catalog(name);
        const auto cmp = default_compare_grid(f);
        const auto oracle = oracle_density_grid(f, f.default_domain(), cmp.axes, cmp.oracle);
        CHECK(oracle.mask.excluded_fraction() <= 0.05);
    }
}

TEST_CASE("report JSON and CSV serialization") {
    SweepReport r;
    r.kind = "decay";
    r.axis = {0.1, 0.05};
    r.metrics.emplace_back("pointwise", std::vector<double>{1.0, 0.5});
    r.fit = FitResult{1.0, 0.0, 0.99};
    r.gates.push_back({"decay_slope", 1.0, 0.8, ">=", true});
    const auto j = report_json(r);
    CHECK(j.find("\"kind\": \"decay\"") != std::string::npos);
    CHECK(j.find("\"pass\": true") != std::string::npos);
    CHECK(j.find("\"slope\": 1.0") != std::string::npos);

    save_report_csv(r, "report_test.csv");
    std::ifstream in("report_test.csv");
    std::string line;
    std::getline(in, line);
    CHECK(line == "axis,metric,value");
    int rows = 0;
    while (std::getline(in, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 2);
    std::remove("report_test.csv");
}
