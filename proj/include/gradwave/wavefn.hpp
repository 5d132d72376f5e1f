// The spectral gradient-density estimator: phase field exp(iS/τ), its scaled
// DFT mapped to gradient space, and the normalized power spectrum.
//
// Frequency-to-gradient mapping: the transform kernel is exp(-i u·x/τ), so
// the DC-centered integer frequency m on axis i (m ∈ [-n/2, n/2)) carries
// gradient value u_i = 2π·τ·m / (hi_i - lo_i) and the bin width is
// Δu_i = 2π·τ / (hi_i - lo_i). Gradients beyond the per-axis Nyquist range
// π·τ/Δx_i wrap around; callers keep the support inside the range via
// choose_tau (wrap-around output is undefined by contract, never detected).
#pragma once

#include <complex>
#include <vector>

#include "gradwave/density.hpp"
#include "gradwave/field.hpp"

namespace gradwave {

struct Tau {
    double value;
    explicit Tau(double v);
};

struct SpectrumOptions {
    // Cosine taper over the outermost 5% of each axis, for fields that are
    // not well-behaved at the boundary. Off by default.
    bool taper = false;
};

// Element-wise exp(i·S/τ); every modulus is exactly 1 (untapered).
std::vector<std::complex<double>> wave_function(const ScalarField& field, Tau tau);

// Normalized power spectrum on the DC-centered gradient bin grid. The
// returned density sums to 1 (times bin volume) after renormalization;
// prenorm_mass records the discrete mass beforehand, which equals 1 up to
// rounding whenever |phi| = 1 on the grid.
GradientDensity power_spectrum_density(const ScalarField& field, Tau tau,
                                       const SpectrumOptions& options = {});

// Complex scaled transform values on the same bin grid, with the cell-center
// phase convention applied so entries approximate the continuum transform at
// the bin-center gradient values. Used by the stationary-phase comparisons.
struct GradientTransform {
    int dim = 0;
    std::vector<BinAxis> axes;
    std::vector<std::complex<double>> values;
    double tau = 0.0;

    std::complex<double> value_at(const std::vector<double>& u) const;
    // Bin-center gradient vector nearest to u.
    std::vector<double> snap(const std::vector<double>& u) const;
};

GradientTransform gradient_transform(const ScalarField& field, Tau tau,
                                     const SpectrumOptions& options = {});

// Per-axis largest representable |u_i| = π·τ/Δx_i.
std::vector<double> nyquist_range(const BoxDomain& domain, const GridSpec& grid, Tau tau);

// Smallest τ whose Nyquist range covers margin × grad_bound on every axis:
// τ = margin · grad_bound · max_i Δx_i / π.
Tau choose_tau(const BoxDomain& domain, const GridSpec& grid, double grad_bound,
               double margin = 1.5);
Tau choose_tau(const ScalarField& field, double grad_bound, double margin = 1.5);

}  // namespace gradwave
