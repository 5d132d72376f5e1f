// Experiment driver: τ/α/N sweeps, error metrics, log-log rate fits and
// timing benchmarks, with machine-checkable pass/fail gates.
//
// Gate thresholds are deliberately slack versus the asymptotic exponents
// (0.8 vs 1 for the empty-set decay, 0.4 vs 0.5 for the stationary-phase
// error, -0.7 vs -1 for the 1-D sample rate): desk-scale grids carry
// subdominant terms.
#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gradwave/baselines.hpp"
#include "gradwave/density.hpp"
#include "gradwave/field.hpp"
#include "gradwave/spa.hpp"
#include "gradwave/wavefn.hpp"

namespace gradwave {

struct FitResult {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};

// Least squares on (log x, log y); requires positive entries.
FitResult loglog_fit(const std::vector<double>& x, const std::vector<double>& y);

double coefficient_of_variation(const std::vector<double>& v);

// Σ|a-b| × bin volume over unmasked bins; grids must match.
double l1_error(const GradientDensity& a, const GradientDensity& b);
double l1_error(const GradientDensity& a, const GradientDensity& b, const ErrorMask& mask);

struct GateResult {
    std::string name;
    double value = 0.0;
    double threshold = 0.0;
    std::string comparison;  // "<=" or ">="
    bool pass = false;
};

struct SweepReport {
    std::string kind;  // tau_sweep | alpha_sweep | n_sweep | decay | spa | bench
    std::vector<double> axis;
    std::vector<std::pair<std::string, std::vector<double>>> metrics;
    std::optional<FitResult> fit;
    std::vector<GateResult> gates;

    const std::vector<double>& metric(const std::string& name) const;
    bool all_pass() const;
};

std::string report_json(const SweepReport& report);
void save_report_json(const SweepReport& report, const std::string& path);
// Tidy CSV: one row per (axis value, metric).
void save_report_csv(const SweepReport& report, const std::string& path);

// Geometric grid from tau_max downward by the given ratio (default halving).
std::vector<double> geometric_taus(double tau_max, int count, double ratio = 0.5);

struct CompareGrid {
    std::vector<BinAxis> axes;
    OracleOptions oracle;
};

// Default comparison frame for a fixture: 64 bins per axis over
// ±1.25·grad_bound (even counts keep bin centers off gradient values hit
// exactly from the domain boundary).
CompareGrid default_compare_grid(const TestFunction& f, int bins_per_axis = 64);

// For each τ: estimator density, ball mass and fine-bin value at the region
// center, L1 against the closed-form oracle on the comparison grid; fits
// |ball mass - oracle ball mass| against τ.
SweepReport tau_sweep(const TestFunction& f, const BoxDomain& domain, const GridSpec& grid,
                      const std::vector<double>& taus, const BallRegion& region,
                      const CompareGrid& compare);

// Ball means at fixed small τ for shrinking radii; reports convergence
// toward the closed-form density at the center. Radii must stay at or above
// one bin width.
SweepReport alpha_sweep(const TestFunction& f, const BoxDomain& domain, const GridSpec& grid,
                        Tau tau_small, const std::vector<double>& u0,
                        const std::vector<double>& alphas);

// Fine-bin value at u0 (which must have an empty stationary set) per τ;
// gate: log-log slope ≥ 0.8.
SweepReport decay_check(const TestFunction& f, const BoxDomain& domain, const GridSpec& grid,
                        const std::vector<double>& u0, const std::vector<double>& taus);

// |F_fft(u) - F_spa(u)| per τ at u snapped to the bin grid; gate: slope ≥ 0.4.
SweepReport spa_agreement(const TestFunction& f, const BoxDomain& domain, const GridSpec& grid,
                          const std::vector<double>& u, const std::vector<double>& taus);

// L1 versus the oracle on a fixed comparison grid at τ = c_tau/N per N;
// gate: slope ≤ -0.7. 1-D only.
SweepReport n_rate_1d(const TestFunction& f, const BoxDomain& domain,
                      const std::vector<int>& n_list, double c_tau,
                      const CompareGrid& compare);

struct BenchReport {
    SweepReport spectrum;          // wall time vs N for power_spectrum_density
    SweepReport charfn;            // wall time vs M at fixed lattice
    double charfn_total_seconds = 0.0;    // full charfn pipeline at N=M=4096
    double spectrum_total_seconds = 0.0;  // power_spectrum_density at N=2^20
    std::vector<GateResult> gates;
    bool all_pass() const;
};

struct BenchConfig {
    std::vector<int> spectrum_sizes;  // defaults 2^14..2^20
    std::vector<int> charfn_samples;  // defaults 2^12..2^16
    int charfn_lattice = 64;
    int repetitions = 5;  // median-of-5 timing
};

BenchReport complexity_bench(const BenchConfig& config = {});

}  // namespace gradwave
