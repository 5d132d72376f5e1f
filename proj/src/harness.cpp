#include "gradwave/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <stdexcept>

#include <json.hpp>

namespace gradwave {

FitResult loglog_fit(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("loglog_fit: need at least two points");
    std::vector<double> lx(x.size()), ly(y.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0))
            throw std::invalid_argument("loglog_fit: values must be positive");
        lx[i] = std::log(x[i]);
        ly[i] = std::log(y[i]);
    }
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += lx[i];
        sy += ly[i];
        sxx += lx[i] * lx[i];
        sxy += lx[i] * ly[i];
        syy += ly[i] * ly[i];
    }
    FitResult fit;
    const double denom = n * sxx - sx * sx;
    fit.slope = (n * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / n;
    const double ss_tot = syy - sy * sy / n;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = ly[i] - (fit.intercept + fit.slope * lx[i]);
        ss_res += r * r;
    }
    fit.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    return fit;
}

double coefficient_of_variation(const std::vector<double>& v) {
    if (v.size() < 2) throw std::invalid_argument("coefficient_of_variation: need >= 2 values");
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    if (mean == 0.0) throw std::invalid_argument("coefficient_of_variation: zero mean");
    double var = 0.0;
    for (double x : v) var += (x - mean) * (x - mean);
    var /= static_cast<double>(v.size() - 1);
    return std::sqrt(var) / std::abs(mean);
}

double l1_error(const GradientDensity& a, const GradientDensity& b) {
    return l1_error(a, b, ErrorMask::none(a.size()));
}

double l1_error(const GradientDensity& a, const GradientDensity& b, const ErrorMask& mask) {
    if (!axes_equal(a.axes, b.axes))
        throw std::invalid_argument("l1_error: bin grids do not match");
    if (mask.excluded.size() != a.size())
        throw std::invalid_argument("l1_error: mask size mismatch");
    KahanSum s;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (mask.excluded[i]) continue;
        s.add(std::abs(a.values[i] - b.values[i]));
    }
    return s.value() * a.bin_volume();
}

const std::vector<double>& SweepReport::metric(const std::string& name) const {
    for (const auto& [key, vals] : metrics)
        if (key == name) return vals;
    throw std::out_of_range("SweepReport: no metric named " + name);
}

bool SweepReport::all_pass() const {
    for (const auto& g : gates)
        if (!g.pass) return false;
    return true;
}

namespace {

nlohmann::json gates_json(const std::vector<GateResult>& gates) {
    auto arr = nlohmann::json::array();
    for (const auto& g : gates)
        arr.push_back({{"name", g.name},
                       {"value", g.value},
                       {"threshold", g.threshold},
                       {"comparison", g.comparison},
                       {"pass", g.pass}});
    return arr;
}

GateResult make_gate(std::string name, double value, double threshold, bool at_least) {
    GateResult g;
    g.name = std::move(name);
    g.value = value;
    g.threshold = threshold;
    g.comparison = at_least ? ">=" : "<=";
    g.pass = at_least ? value >= threshold : value <= threshold;
    return g;
}

}  // namespace

std::string report_json(const SweepReport& report) {
    nlohmann::json j;
    j["kind"] = report.kind;
    j["axis"] = report.axis;
    for (const auto& [name, vals] : report.metrics) j["metrics"][name] = vals;
    if (report.fit)
        j["fit"] = {{"slope", report.fit->slope},
                    {"intercept", report.fit->intercept},
                    {"r2", report.fit->r2}};
    j["gates"] = gates_json(report.gates);
    j["pass"] = report.all_pass();
    return j.dump(2);
}

void save_report_json(const SweepReport& report, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_report_json: cannot open " + path);
    out << report_json(report) << '\n';
}

void save_report_csv(const SweepReport& report, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_report_csv: cannot open " + path);
    out << "axis,metric,value\n";
    char buf[64];
    for (const auto& [name, vals] : report.metrics) {
        for (std::size_t i = 0; i < vals.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%.17g", report.axis[i]);
            out << buf << ',' << name << ',';
            std::snprintf(buf, sizeof buf, "%.17g", vals[i]);
            out << buf << '\n';
        }
    }
}

std::vector<double> geometric_taus(double tau_max, int count, double ratio) {
    if (!(tau_max > 0.0) || count < 1 || !(ratio > 0.0) || !(ratio < 1.0))
        throw std::invalid_argument("geometric_taus: bad parameters");
    std::vector<double> taus(count);
    double t = tau_max;
    for (int i = 0; i < count; ++i) {
        taus[i] = t;
        t *= ratio;
    }
    return taus;
}

CompareGrid default_compare_grid(const TestFunction& f, int bins_per_axis) {
    CompareGrid grid;
    std::vector<double> lo(f.dim), hi(f.dim);
    std::vector<int> counts(f.dim, bins_per_axis);
    for (int a = 0; a < f.dim; ++a) {
        lo[a] = -1.25 * f.grad_bound;
        hi[a] = 1.25 * f.grad_bound;
    }
    grid.axes = make_bin_grid(lo, hi, counts);
    return grid;
}

namespace {

// Oracle mass of a ball by midpoint product quadrature on a fine sub-grid
// (the comparison grids are too coarse to resolve alpha-size balls).
double oracle_ball_mass(const TestFunction& f, const BoxDomain& domain,
                        const BallRegion& region, const NewtonOptions& newton,
                        int points_per_axis = 33) {
    const int d = f.dim;
    std::vector<int> idx(d, 0);
    std::size_t total = 1;
    for (int a = 0; a < d; ++a) total *= static_cast<std::size_t>(points_per_axis);
    const double h = 2.0 * region.radius / points_per_axis;
    KahanSum s;
    for (std::size_t i = 0; i < total; ++i) {
        std::vector<double> u(d);
        for (int a = 0; a < d; ++a)
            u[a] = region.center[a] - region.radius + (idx[a] + 0.5) * h;
        s.add(analytic_density(f, domain, u, newton));
        for (int a = d - 1; a >= 0; --a) {
            if (++idx[a] < points_per_axis) break;
            idx[a] = 0;
        }
    }
    return s.value() * std::pow(h, d);
}

void require_nyquist(const TestFunction& f, const BoxDomain& domain, const GridSpec& grid,
                     double tau, double need) {
    const auto range = nyquist_range(domain, grid, Tau(tau));
    for (double r : range)
        if (r < need)
            throw std::invalid_argument(
                "sweep: tau violates the Nyquist precondition for this grid");
    (void)f;
}

double median_seconds(const std::function<void()>& work, int reps) {
    work();  // warmup: first-touch and planner setup stay out of the timings
    std::vector<double> times(reps);
    for (int r = 0; r < reps; ++r) {
        const auto start = std::chrono::steady_clock::now();
        work();
        const auto stop = std::chrono::steady_clock::now();
        times[r] = std::chrono::duration<double>(stop - start).count();
    }
    std::sort(times.begin(), times.end());
    return times[times.size() / 2];
}

}  // namespace

SweepReport tau_sweep(const TestFunction& f, const BoxDomain& domain, const GridSpec& grid,
                      const std::vector<double>& taus, const BallRegion& region,
                      const CompareGrid& compare) {
    if (taus.empty()) throw std::invalid_argument("tau_sweep: empty tau list");
    double need = f.grad_bound;
    for (std::size_t a = 0; a < region.center.size(); ++a)
        need = std::max(need, std::abs(region.center[a]) + region.radius);
    for (double t : taus) require_nyquist(f, domain, grid, t, need);

    const auto field = sample_field(f, domain, grid);
    const auto oracle = oracle_density_grid(f, domain, compare.axes, compare.oracle);
    const double oracle_mass = oracle_ball_mass(f, domain, region, compare.oracle.newton);

    std::vector<double> ball_mass, ball_err, pointwise, l1;
    for (double t : taus) {
        const auto density = power_spectrum_density(field, Tau(t));
        const double mass = integrate_ball(density, region);
        ball_mass.push_back(mass);
        ball_err.push_back(std::abs(mass - oracle_mass));
        pointwise.push_back(density.value_at(region.center));
        l1.push_back(l1_error(rebin(density, compare.axes), oracle.density, oracle.mask));
    }

    SweepReport report;
    report.kind = "tau_sweep";
    report.axis = taus;
    report.metrics.emplace_back("ball_mass", std::move(ball_mass));
    report.metrics.emplace_back("ball_mass_abs_err", ball_err);
    report.metrics.emplace_back("pointwise", std::move(pointwise));
    report.metrics.emplace_back("l1_vs_oracle", std::move(l1));
    report.metrics.emplace_back("oracle_ball_mass",
                                std::vector<double>(taus.size(), oracle_mass));
    bool fit_ok = true;
    for (double e : ball_err) fit_ok = fit_ok && e > 0.0;
    if (fit_ok) report.fit = loglog_fit(taus, ball_err);
    return report;
}

SweepReport alpha_sweep(const TestFunction& f, const BoxDomain& domain, const GridSpec& grid,
                        Tau tau_small, const std::vector<double>& u0,
                        const std::vector<double>& alphas) {
    if (alphas.empty()) throw std::invalid_argument("alpha_sweep: empty alpha list");
    const auto field = sample_field(f, domain, grid);
    const auto density = power_spectrum_density(field, tau_small);
    double max_step = 0.0;
    for (const auto& ax : density.axes) max_step = std::max(max_step, ax.step);
    for (double a : alphas)
        if (a < max_step)
            throw std::invalid_argument("alpha_sweep: alpha below bin resolution");

    const double reference = analytic_density(f, domain, u0);
    std::vector<double> means, errs;
    for (double a : alphas) {
        const double m = mean_in_ball(density, BallRegion(u0, a));
        means.push_back(m);
        errs.push_back(std::abs(m - reference));
    }

    SweepReport report;
    report.kind = "alpha_sweep";
    report.axis = alphas;
    report.metrics.emplace_back("mean_in_ball", std::move(means));
    report.metrics.emplace_back("abs_err_vs_oracle", std::move(errs));
    report.metrics.emplace_back("oracle_value",
                                std::vector<double>(alphas.size(), reference));
    return report;
}

SweepReport decay_check(const TestFunction& f, const BoxDomain& domain, const GridSpec& grid,
                        const std::vector<double>& u0, const std::vector<double>& taus) {
    if (taus.empty()) throw std::invalid_argument("decay_check: empty tau list");
    const auto set = find_stationary_points(f, domain, u0);
    if (set.count() != 0)
        throw std::invalid_argument(
            "decay_check: u0 lies inside the gradient range (density is not zero there)");
    double need = 0.0;
    for (double c : u0) need = std::max(need, std::abs(c) * 1.05);
    for (double t : taus) require_nyquist(f, domain, grid, t, need);

    const auto field = sample_field(f, domain, grid);
    std::vector<double> pointwise;
    for (double t : taus)
        pointwise.push_back(power_spectrum_density(field, Tau(t)).value_at(u0));

    SweepReport report;
    report.kind = "decay";
    report.axis = taus;
    report.metrics.emplace_back("pointwise", pointwise);
    report.fit = loglog_fit(taus, pointwise);
    report.gates.push_back(make_gate("decay_slope", report.fit->slope, 0.8, true));
    return report;
}

SweepReport spa_agreement(const TestFunction& f, const BoxDomain& domain, const GridSpec& grid,
                          const std::vector<double>& u, const std::vector<double>& taus) {
    if (taus.empty()) throw std::invalid_argument("spa_agreement: empty tau list");
    {
        const auto set = find_stationary_points(f, domain, u);
        if (set.count() == 0)
            throw std::invalid_argument("spa_agreement: empty stationary set at u");
    }
    double need = f.grad_bound;
    for (double c : u) need = std::max(need, std::abs(c));
    for (double t : taus) require_nyquist(f, domain, grid, t, need);

    const auto field = sample_field(f, domain, grid);
    std::vector<double> errs;
    for (double t : taus) {
        const auto transform = gradient_transform(field, Tau(t));
        const auto snapped = transform.snap(u);
        const auto fft_value = transform.value_at(snapped);
        const auto spa_value = spa_transform(f, domain, snapped, Tau(t));
        errs.push_back(std::abs(fft_value - spa_value));
    }

    SweepReport report;
    report.kind = "spa";
    report.axis = taus;
    report.metrics.emplace_back("abs_diff", errs);
    report.fit = loglog_fit(taus, errs);
    report.gates.push_back(make_gate("spa_slope", report.fit->slope, 0.4, true));
    return report;
}

SweepReport n_rate_1d(const TestFunction& f, const BoxDomain& domain,
                      const std::vector<int>& n_list, double c_tau,
                      const CompareGrid& compare) {
    if (f.dim != 1) throw std::invalid_argument("n_rate_1d: 1-D only");
    if (n_list.empty()) throw std::invalid_argument("n_rate_1d: empty n list");

    const auto oracle = oracle_density_grid(f, domain, compare.axes, compare.oracle);
    double need = f.grad_bound;
    for (const auto& ax : compare.axes)
        need = std::max(need, std::max(std::abs(ax.lo_edge()), std::abs(ax.hi_edge())));

    std::vector<double> axis, l1;
    for (int n : n_list) {
        const GridSpec grid({n});
        const double tau = c_tau / n;
        require_nyquist(f, domain, grid, tau, need);
        const auto field = sample_field(f, domain, grid);
        const auto density = power_spectrum_density(field, Tau(tau));
        axis.push_back(static_cast<double>(n));
        l1.push_back(l1_error(rebin(density, compare.axes), oracle.density, oracle.mask));
    }

    SweepReport report;
    report.kind = "n_sweep";
    report.axis = axis;
    report.metrics.emplace_back("l1_vs_oracle", l1);
    report.fit = loglog_fit(axis, l1);
    report.gates.push_back(make_gate("n_rate_slope", report.fit->slope, -0.7, false));
    return report;
}

bool BenchReport::all_pass() const {
    for (const auto& g : gates)
        if (!g.pass) return false;
    return true;
}

BenchReport complexity_bench(const BenchConfig& config) {
    BenchConfig cfg = config;
    if (cfg.spectrum_sizes.empty())
        cfg.spectrum_sizes = {1 << 14, 1 << 15, 1 << 16, 1 << 17, 1 << 18, 1 << 19, 1 << 20};
    if (cfg.charfn_samples.empty())
        cfg.charfn_samples = {1 << 12, 1 << 13, 1 << 14, 1 << 15, 1 << 16};

    const auto f = catalog("quadratic1d");
    const auto domain = f.default_domain();

    BenchReport report;

    // Spectral estimator timing vs N (tau scaled as 1/N keeps the mapping fixed).
    {
        std::vector<double> axis, seconds;
        for (int n : cfg.spectrum_sizes) {
            const auto field = sample_field(f, domain, GridSpec({n}));
            const Tau tau = choose_tau(field, f.grad_bound);
            GradientDensity sink;
            seconds.push_back(median_seconds(
                [&] { sink = power_spectrum_density(field, tau); }, cfg.repetitions));
            axis.push_back(static_cast<double>(n));
        }
        report.spectrum.kind = "bench";
        report.spectrum.axis = axis;
        report.spectrum.metrics.emplace_back("seconds", seconds);
        report.spectrum.fit = loglog_fit(axis, seconds);
    }

    // Characteristic-function timing vs M at a fixed lattice.
    {
        const auto axes = make_bin_grid({-1.25}, {1.25}, {cfg.charfn_lattice});
        std::vector<double> axis, seconds, per_unit;
        for (int m : cfg.charfn_samples) {
            const auto samples =
                draw_gradient_samples(f, domain, static_cast<std::size_t>(m), 2024);
            GradientDensity sink;
            const double sec = median_seconds(
                [&] { sink = charfn_density(samples, 1.0, cfg.charfn_lattice, axes); },
                cfg.repetitions);
            axis.push_back(static_cast<double>(m));
            seconds.push_back(sec);
            per_unit.push_back(sec / (static_cast<double>(m) * cfg.charfn_lattice));
        }
        report.charfn.kind = "bench";
        report.charfn.axis = axis;
        report.charfn.metrics.emplace_back("seconds", seconds);
        report.charfn.metrics.emplace_back("seconds_per_sample_omega", per_unit);
        report.charfn.fit = loglog_fit(axis, seconds);

        std::vector<double> sorted = per_unit;
        std::sort(sorted.begin(), sorted.end());
        const double med = sorted[sorted.size() / 2];
        double spread = 0.0;
        for (double p : per_unit) spread = std::max(spread, std::abs(p - med) / med);
        report.gates.push_back(make_gate("charfn_unit_cost_spread", spread, 0.25, false));
    }

    // Head-to-head totals: full characteristic-function pipeline at N=M=4096
    // versus the spectral estimator at N=2^20.
    {
        const auto field = sample_field(f, domain, GridSpec({4096}));
        const auto samples = finite_diff_gradients(field);
        const auto axes = make_bin_grid({-1.25}, {1.25}, {4096});
        GradientDensity sink;
        report.charfn_total_seconds = median_seconds(
            [&] { sink = charfn_density(samples, 1.0, 4096, axes); }, cfg.repetitions);

        const auto big = sample_field(f, domain, GridSpec({1 << 20}));
        const Tau tau = choose_tau(big, f.grad_bound);
        report.spectrum_total_seconds = median_seconds(
            [&] { sink = power_spectrum_density(big, tau); }, cfg.repetitions);
    }

    report.gates.push_back(
        make_gate("spectrum_exponent_low", report.spectrum.fit->slope, 0.9, true));
    report.gates.push_back(
        make_gate("spectrum_exponent_high", report.spectrum.fit->slope, 1.3, false));
    report.gates.push_back(
        make_gate("charfn_exponent_low", report.charfn.fit->slope, 0.75, true));
    report.gates.push_back(
        make_gate("charfn_exponent_high", report.charfn.fit->slope, 1.25, false));
    report.gates.push_back(make_gate("charfn_slower_at_4096_than_spectrum_at_2e20",
                                     report.charfn_total_seconds
                                         / report.spectrum_total_seconds,
                                     1.0, true));
    return report;
}

}  // namespace gradwave
