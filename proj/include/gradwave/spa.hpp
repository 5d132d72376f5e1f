// Stationary-phase machinery over analytic test functions: roots of
// ∇S(x) = u with Hessian data, the closed-form gradient density, the
// stationary-phase value of the transform, and pairwise cross terms.
#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include "gradwave/density.hpp"
#include "gradwave/field.hpp"
#include "gradwave/wavefn.hpp"

namespace gradwave {

// Raised when u lands in the excluded set C (a root with vanishing Hessian
// determinant): the density genuinely does not exist there.
struct density_undefined_error : std::runtime_error {
    explicit density_undefined_error(const std::string& what) : std::runtime_error(what) {}
};

struct StationaryPoint {
    std::vector<double> x;
    double det_hess = 0.0;
    int signature = 0;        // (#positive - #negative) eigenvalues of the Hessian
    double phase_offset = 0;  // S(x) - u·x
};

struct StationaryPointSet {
    std::vector<double> u;
    std::vector<StationaryPoint> points;
    int count() const { return static_cast<int>(points.size()); }
};

struct NewtonOptions {
    int seeds_per_axis = 32;
    int max_iterations = 50;
    double residual_tol = 1e-10;        // |∇S(x)-u|_inf ≤ tol·max(1,|u|_inf)
    double dedupe_rel = 1e-6;           // × max domain width
    double boundary_margin_rel = 1e-3;  // × per-axis width; closer roots discarded
    double singular_det = 1e-8;         // |det H| below this → density undefined
};

// Multi-start Newton on ∇S(x) - u from an interior seed lattice. Converged
// roots are deduplicated, boundary-adjacent roots discarded, and each root
// annotated with det H, signature and phase offset; roots are sorted
// lexicographically. Throws density_undefined_error when any root's |det H|
// falls below options.singular_det. Seeds with a singular Jacobian are
// skipped, not fatal.
StationaryPointSet find_stationary_points(const TestFunction& f, const BoxDomain& domain,
                                          const std::vector<double>& u,
                                          const NewtonOptions& options = {});

// (1/μ(Ω)) Σ_k 1/|det H_k| over the stationary set; 0 when the set is empty.
double analytic_density(const TestFunction& f, const BoxDomain& domain,
                        const std::vector<double>& u, const NewtonOptions& options = {});

struct OracleOptions {
    NewtonOptions newton;
    // Bins whose stationary set contains a root with |det H| below this are
    // masked (near C the asymptotics degrade long before det reaches zero).
    double near_c_min_det = 0.1;
};

struct OracleDensity {
    GradientDensity density;
    ErrorMask mask;
};

// Closed-form density evaluated at every bin center; bins where the density
// is undefined or nearly so are flagged in the mask instead of erroring.
OracleDensity oracle_density_grid(const TestFunction& f, const BoxDomain& domain,
                                  const std::vector<BinAxis>& axes,
                                  const OracleOptions& options = {});

// Stationary-phase main term of the scaled transform:
// (1/√μ(Ω)) Σ_k exp(i[Ψ_k/τ + σ_k·π/4]) / √|det H_k|, interior points only.
// Returns 0 for an empty stationary set.
std::complex<double> spa_transform(const TestFunction& f, const BoxDomain& domain,
                                   const std::vector<double>& u, Tau tau,
                                   const NewtonOptions& options = {});

// (#positive - #negative) eigenvalues; throws std::invalid_argument when the
// matrix is near-singular.
int hessian_signature(const Mat3& h, int dim);

// Interference term between stationary points k and l of the same u:
// exp{i[Ψ_k-Ψ_l]/τ + i(σ_k-σ_l)π/4} / (μ(Ω)·√|det H_k · det H_l|).
std::complex<double> cross_term(const TestFunction& f, const BoxDomain& domain,
                                const std::vector<double>& u, Tau tau, int k, int l,
                                const NewtonOptions& options = {});

std::string stationary_points_json(const StationaryPointSet& set);

}  // namespace gradwave
