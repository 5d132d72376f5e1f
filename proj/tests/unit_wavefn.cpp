#include <doctest.h>

#include <cmath>
#include <complex>

#include "gradwave/baselines.hpp"
#include "gradwave/field.hpp"
#include "gradwave/harness.hpp"
#include "gradwave/rng.hpp"
#include "gradwave/wavefn.hpp"

using namespace gradwave;

namespace {

ScalarField constant_field_1d(double value, int n) {
    TestFunction f;
    f.dim = 1;
    f.eval = [value](const Vec3&) { return value; };
    f.grad = [](const Vec3&) { return Vec3{0, 0, 0}; };
    f.hess = [](const Vec3&) { return Mat3{}; };
    return sample_field(f, BoxDomain({-1.0}, {1.0}), GridSpec({n}));
}

ScalarField linear_field_1d(double slope, int n) {
    TestFunction f;
    f.dim = 1;
    f.eval = [slope](const Vec3& x) { return slope * x[0]; };
    f.grad = [slope](const Vec3&) { return Vec3{slope, 0, 0}; };
    f.hess = [](const Vec3&) { return Mat3{}; };
    return sample_field(f, BoxDomain({-1.0}, {1.0}), GridSpec({n}));
}

}  // namespace

TEST_CASE("Tau validates positivity") {
    CHECK_THROWS_AS(Tau(0.0), std::invalid_argument);
    CHECK_THROWS_AS(Tau(-1.0), std::invalid_argument);
}

TEST_CASE("wave_function phase identities") {
    const double tau = 0.05;
    const auto zero = wave_function(constant_field_1d(0.0, 16), Tau(tau));
    for (const auto& z : zero) {
        CHECK(z.real() == doctest::Approx(1.0));
        CHECK(z.imag() == doctest::Approx(0.0));
    }
    const auto pi_field = wave_function(constant_field_1d(M_PI * tau, 16), Tau(tau));
    for (const auto& z : pi_field) {
        CHECK(z.real() == doctest::Approx(-1.0));
        CHECK(std::abs(z.imag()) < 1e-12);
    }
    // Unit modulus on an arbitrary field.
    const auto f = catalog("doublewell1d");
    const auto field = sample_field(f, f.default_domain(), GridSpec({64}));
    for (const auto& z : wave_function(field, Tau(0.01)))
        CHECK(std::abs(z) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("constant field concentrates all mass in the zero bin") {
    const auto field = constant_field_1d(4.2, 64);
    const auto d = power_spectrum_density(field, Tau(0.037));
    const auto idx = d.bin_containing({0.0});
    REQUIRE(idx.has_value());
    CHECK(d.values[*idx] * d.bin_volume() == doctest::Approx(1.0).epsilon(1e-12));
    for (std::size_t i = 0; i < d.size(); ++i)
        if (i != *idx) CHECK(std::abs(d.values[i]) * d.bin_volume() < 1e-12);
}

TEST_CASE("discrete mass is 1 before renormalization") {
    // Parseval: |phi| = 1 on the grid makes the discrete mass exactly 1.
    for (const char* name : {"quadratic1d", "cosine1d", "doublewell1d"}) {
        const auto f = catalog(name);
        const auto field = sample_field(f, f.default_domain(), GridSpec({512}));
        for (double tau : {1e-1, 1e-2, 1e-3}) {
            const auto d = power_spectrum_density(field, Tau(tau));
            CHECK(std::abs(d.prenorm_mass - 1.0) < 1e-9);
        }
    }
}

TEST_CASE("estimator rejects grids below 8 samples per axis") {
    CHECK_THROWS_AS(power_spectrum_density(constant_field_1d(1.0, 7), Tau(0.1)),
                    std::invalid_argument);
}

TEST_CASE("nyquist_range arithmetic and scalings") {
    const BoxDomain dom({-1.0}, {1.0});
    const auto r = nyquist_range(dom, GridSpec({8}), Tau(0.1));
    CHECK(r[0] == doctest::Approx(M_PI * 0.1 / 0.25));  // ≈ 1.25664
    const auto r2 = nyquist_range(dom, GridSpec({16}), Tau(0.1));
    CHECK(r2[0] == doctest::Approx(2.0 * r[0]));  // doubling n doubles the range
    const auto r3 = nyquist_range(dom, GridSpec({8}), Tau(0.05));
    CHECK(r3[0] == doctest::Approx(0.5 * r[0]));  // halving tau halves it
}

TEST_CASE("choose_tau formula, scaling and guard") {
    const BoxDomain dom({-1.0}, {1.0});
    const auto t = choose_tau(dom, GridSpec({4096}), 1.0, 1.5);
    CHECK(t.value == doctest::Approx(1.5 * (2.0 / 4096) / M_PI));  // ≈ 2.331e-4
    const auto t2 = choose_tau(dom, GridSpec({8192}), 1.0, 1.5);
    CHECK(t2.value == doctest::Approx(0.5 * t.value));  // tau ∝ 1/N in 1-D
    CHECK_THROWS_AS(choose_tau(dom, GridSpec({4096}), 0.0, 1.0), std::invalid_argument);
    // The chosen tau actually covers the requested range.
    const auto cover = nyquist_range(dom, GridSpec({4096}), t);
    CHECK(cover[0] == doctest::Approx(1.5));
}

TEST_CASE("frequency map: linear fields peak at the mapped bin") {
    for (double slope : {0.37, -0.61, 0.123}) {
        const auto field = linear_field_1d(slope, 512);
        const auto d = power_spectrum_density(field, choose_tau(field, std::abs(slope), 2.0));
        std::size_t best = 0;
        for (std::size_t i = 0; i < d.size(); ++i)
            if (d.values[i] > d.values[best]) best = i;
        CHECK(std::abs(d.center_of(best)[0] - slope) <= d.axes[0].step);
    }
}

TEST_CASE("bin centers are uniform and contain zero") {
    const auto field = linear_field_1d(0.2, 64);
    const auto d = power_spectrum_density(field, Tau(0.02));
    CHECK(d.axes[0].center(64 / 2) == 0.0);
    for (int i = 1; i < d.axes[0].count; ++i)
        CHECK(d.axes[0].center(i) - d.axes[0].center(i - 1)
              == doctest::Approx(d.axes[0].step).epsilon(1e-12));
    CHECK(d.axes[0].step == doctest::Approx(2.0 * M_PI * 0.02 / 2.0));
}

TEST_CASE("adding a constant to S leaves the spectrum unchanged") {
    const auto f = catalog("quadratic1d");
    const auto field = sample_field(f, f.default_domain(), GridSpec({256}));
    auto shifted_values = field.values;
    for (auto& v : shifted_values) v += 17.0;
    const ScalarField shifted(field.domain, field.grid, shifted_values);
    const auto a = power_spectrum_density(field, Tau(0.01));
    const auto b = power_spectrum_density(shifted, Tau(0.01));
    for (std::size_t i = 0; i < a.size(); ++i)
        CHECK(std::abs(a.values[i] - b.values[i]) <= 1e-12);
}

TEST_CASE("gradient_transform matches the stationary-phase value for a pure quadratic") {
    // Continuum: F(0) -> (1/sqrt 2)·exp(i·pi/4) as tau -> 0.
    const auto f = catalog("quadratic1d");
    const auto field = sample_field(f, f.default_domain(), GridSpec({1 << 14}));
    const auto t = gradient_transform(field, Tau(2e-4));
    const auto v = t.value_at({0.0});
    CHECK(v.real() == doctest::Approx(0.5).epsilon(0.05));
    CHECK(v.imag() == doctest::Approx(0.5).epsilon(0.05));
}

TEST_CASE("odd grid sizes keep the DC-centered mapping exact") {
    for (int n : {97, 63}) {
        const auto field = constant_field_1d(2.5, n);
        const auto d = power_spectrum_density(field, Tau(0.05));
        CHECK(d.axes[0].center(n / 2) == 0.0);
        CHECK(std::abs(d.prenorm_mass - 1.0) < 1e-12);
        CHECK(d.values[*d.bin_containing({0.0})] * d.bin_volume()
              == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("the boundary taper suppresses window leakage") {
    // A linear field's phase is not periodic over the box, so the spectrum
    // leaks Dirichlet sidelobes; the taper concentrates the mass.
    const auto field = linear_field_1d(0.31, 1024);
    const Tau tau = choose_tau(field, 0.31, 3.0);
    double leak[2];
    for (int taper = 0; taper < 2; ++taper) {
        SpectrumOptions opt;
        opt.taper = taper == 1;
        const auto d = power_spectrum_density(field, tau, opt);
        leak[taper] = 1.0 - integrate_ball(d, BallRegion({0.31}, 0.05));
    }
    CHECK(leak[1] < 0.1 * leak[0]);
}

TEST_CASE("taper keeps normalization via renormalization and reports the deficit") {
    const auto f = catalog("quadratic1d");
    const auto field = sample_field(f, f.default_domain(), GridSpec({512}));
    SpectrumOptions opt;
    opt.taper = true;
    const auto d = power_spectrum_density(field, Tau(0.01), opt);
    CHECK(d.total_mass() == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(d.prenorm_mass < 1.0);   // tapered phase field loses mass
    CHECK(d.prenorm_mass > 0.85);  // only the outer 5% per side is touched
}

TEST_CASE("quadratic1d density is uniform against the Monte-Carlo oracle") {
    // tau must sit at the grid's own scale: far larger values leave the
    // boundary cross terms unresolved and the error saturates.
    const auto f = catalog("quadratic1d");
    const auto field = sample_field(f, f.default_domain(), GridSpec({4096}));
    const auto d = power_spectrum_density(field, choose_tau(field, f.grad_bound));
    const auto cmp = make_bin_grid({-0.9}, {0.9}, {64});
    const auto mc = monte_carlo_density(f, f.default_domain(), 10'000'000, cmp, 1234);
    const double l1 = l1_error(rebin(d, cmp), mc);
    CHECK(l1 <= 0.05);
}

TEST_CASE("2-D estimator reproduces closed-form interior values") {
    {
        // Y = A·X for uniform X on the square: flat density 1/(mu·det A) = 1/8.
        const auto f = catalog("quadratic2d");
        const auto field = sample_field(f, f.default_domain(), GridSpec({512, 512}));
        const auto d = power_spectrum_density(field, choose_tau(field, f.grad_bound, 1.25));
        CHECK(mean_in_ball(d, BallRegion({0.3, 0.2}, 0.15))
              == doctest::Approx(0.125).epsilon(0.05));
    }
    {
        // Separable field: the density is the product of two arcsine laws.
        const auto f = catalog("sinusoid2d");
        const auto field = sample_field(f, f.default_domain(), GridSpec({512, 512}));
        const auto d = power_spectrum_density(field, choose_tau(field, f.grad_bound, 1.25));
        const double expected = 1.0 / (M_PI * M_PI * std::sqrt(1 - 0.09) * std::sqrt(1 - 0.16));
        CHECK(mean_in_ball(d, BallRegion({0.3, -0.4}, 0.1))
              == doctest::Approx(expected).epsilon(0.05));
    }
}

TEST_CASE("3-D frequency map sends a linear field to its gradient's bin") {
    TestFunction lin;
    lin.dim = 3;
    lin.eval = [](const Vec3& x) { return 0.3 * x[0] - 0.2 * x[1] + 0.45 * x[2]; };
    lin.grad = [](const Vec3&) { return Vec3{0.3, -0.2, 0.45}; };
    lin.hess = [](const Vec3&) { return Mat3{}; };
    const auto field =
        sample_field(lin, BoxDomain({-1, -1, -1}, {1, 1, 1}), GridSpec({32, 32, 32}));
    const auto d = power_spectrum_density(field, choose_tau(field, 0.45, 2.0));
    std::size_t best = 0;
    for (std::size_t i = 0; i < d.size(); ++i)
        if (d.values[i] > d.values[best]) best = i;
    const auto u = d.center_of(best);
    const double expected[3] = {0.3, -0.2, 0.45};
    for (int a = 0; a < 3; ++a)
        CHECK(std::abs(u[a] - expected[a]) <= d.axes[a].step);
}
