// Reference density estimators: finite-difference gradient histograms, a
// deterministic Monte-Carlo oracle, and characteristic-function inversion.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gradwave/density.hpp"
#include "gradwave/field.hpp"

namespace gradwave {

struct GradientSamples {
    enum class Source { analytic, finite_difference };

    int dim = 0;
    Source source = Source::analytic;
    std::vector<double> data;  // M×dim, sample-major

    std::size_t count() const { return dim == 0 ? 0 : data.size() / dim; }
    const double* sample(std::size_t i) const { return data.data() + i * dim; }
};

// Central differences at grid points interior on every axis (the layer next
// to the boundary is excluded), M = Π(n_i - 2). Requires n_i ≥ 3.
GradientSamples finite_diff_gradients(const ScalarField& field);

// max_i sup |∂S/∂x_i| estimated from finite differences; the τ-selection
// bound for fields with no analytic metadata.
double fd_gradient_bound(const ScalarField& field);

// ∇S evaluated at M uniform draws over the domain (counter-based stream).
GradientSamples draw_gradient_samples(const TestFunction& f, const BoxDomain& domain,
                                      std::size_t count, std::uint64_t seed);

// count per bin / (M × bin volume); samples outside the grid are counted in
// out_of_range_mass, not binned. Throws on an empty sample set.
GradientDensity histogram_density(const GradientSamples& samples,
                                  const std::vector<BinAxis>& axes);

// Uniform X on the domain with the stated seed, Y = ∇S(X) analytic, binned
// as histogram_density. Streaming: samples are never materialized. M ≥ 10^4.
GradientDensity monte_carlo_density(const TestFunction& f, const BoxDomain& domain,
                                    std::size_t count, const std::vector<BinAxis>& axes,
                                    std::uint64_t seed);

// Characteristic-function route: ψ(ω) = (1/M) Σ exp(i ω·g_m) by direct
// summation on the DC-centered lattice dual to the bin grid (ω_max scaled by
// mu_omega, spacing 2π / u-range), then inverse transform, real part, clipped
// at zero (removed mass recorded) and renormalized. Direct summation costs
// Θ(M × omega_per_axis^d) by construction. omega_per_axis must be even, ≥ 16
// and equal to mu_omega × bins per axis ("lattice/bin mismatch" otherwise).
GradientDensity charfn_density(const GradientSamples& samples, double mu_omega,
                               int omega_per_axis, const std::vector<BinAxis>& axes);

// Flat little-endian float64 payload plus a JSON sidecar (d, count, source,
// payload path).
void save_samples(const GradientSamples& samples, const std::string& data_path,
                  const std::string& sidecar_path);
GradientSamples load_samples(const std::string& sidecar_path);

}  // namespace gradwave
