#include "gradwave/wavefn.hpp"

#include <cmath>
#include <stdexcept>

#include "gradwave/fft.hpp"
#include "gradwave/linalg.hpp"

namespace gradwave {

Tau::Tau(double v) : value(v) {
    if (!(v > 0.0) || !std::isfinite(v))
        throw std::invalid_argument("Tau: value must be positive and finite");
}

namespace {

// Per-axis cosine taper weight for the outermost `edge` fraction of the axis.
double taper_weight(double frac, double edge) {
    const double t = std::min(frac, 1.0 - frac);
    if (t >= edge) return 1.0;
    return 0.5 * (1.0 - std::cos(M_PI * t / edge));
}

std::vector<std::complex<double>> phase_field(const ScalarField& field, Tau tau, bool taper) {
    const int d = field.dim();
    std::vector<std::complex<double>> phi(field.size());
    const double inv_tau = 1.0 / tau.value;
    if (!taper) {
        for (std::size_t k = 0; k < phi.size(); ++k) {
            const double a = field.values[k] * inv_tau;
            phi[k] = {std::cos(a), std::sin(a)};
        }
        return phi;
    }
    constexpr double kEdge = 0.05;
    std::vector<int> idx(d, 0);
    for (std::size_t k = 0; k < phi.size(); ++k) {
        double w = 1.0;
        for (int a = 0; a < d; ++a)
            w *= taper_weight((idx[a] + 0.5) / field.grid.n[a], kEdge);
        const double ang = field.values[k] * inv_tau;
        phi[k] = {w * std::cos(ang), w * std::sin(ang)};
        for (int a = d - 1; a >= 0; --a) {
            if (++idx[a] < field.grid.n[a]) break;
            idx[a] = 0;
        }
    }
    return phi;
}

std::vector<BinAxis> spectrum_axes(const ScalarField& field, Tau tau) {
    const int d = field.dim();
    std::vector<BinAxis> axes(d);
    for (int a = 0; a < d; ++a) {
        const double du = 2.0 * M_PI * tau.value / field.domain.width(a);
        const int n = field.grid.n[a];
        axes[a].count = n;
        axes[a].step = du;
        axes[a].first_center = -du * (n / 2);  // integer frequencies [-n/2, n/2)
    }
    return axes;
}

void check_estimator_grid(const ScalarField& field) {
    for (int n : field.grid.n)
        if (n < 8)
            throw std::invalid_argument(
                "power spectrum estimator requires at least 8 samples per axis");
}

// DC-centered (fftshifted) copy of the raw DFT output.
std::vector<std::complex<double>> shifted_dft(const ScalarField& field,
                                              const std::vector<std::complex<double>>& phi) {
    const int d = field.dim();
    auto raw = fft_forward(phi, field.grid.n);
    std::vector<std::complex<double>> shifted(raw.size());
    std::vector<int> idx(d, 0);
    for (std::size_t i = 0; i < shifted.size(); ++i) {
        std::size_t src = 0;
        for (int a = 0; a < d; ++a) {
            const int n = field.grid.n[a];
            const int j = (idx[a] - n / 2 + n) % n;
            src = src * n + j;
        }
        shifted[i] = raw[src];
        for (int a = d - 1; a >= 0; --a) {
            if (++idx[a] < field.grid.n[a]) break;
            idx[a] = 0;
        }
    }
    return shifted;
}

}  // namespace

std::vector<std::complex<double>> wave_function(const ScalarField& field, Tau tau) {
    return phase_field(field, tau, false);
}

GradientDensity power_spectrum_density(const ScalarField& field, Tau tau,
                                       const SpectrumOptions& options) {
    check_estimator_grid(field);
    const int d = field.dim();
    const auto phi = phase_field(field, tau, options.taper);
    const auto dft = shifted_dft(field, phi);

    const auto dx = field.grid.spacing(field.domain);
    double cell = 1.0;
    for (int a = 0; a < d; ++a) cell *= dx[a];
    const double scale = cell * cell
        / (std::pow(2.0 * M_PI * tau.value, d) * field.domain.measure());

    GradientDensity out;
    out.dim = d;
    out.axes = spectrum_axes(field, tau);
    out.tau = tau.value;
    out.values.resize(dft.size());
    for (std::size_t i = 0; i < dft.size(); ++i) out.values[i] = std::norm(dft[i]) * scale;

    const double mass = out.total_mass();
    out.prenorm_mass = mass;
    if (mass > 0.0)
        for (auto& v : out.values) v /= mass;
    return out;
}

std::complex<double> GradientTransform::value_at(const std::vector<double>& u) const {
    std::size_t flat = 0;
    for (int a = 0; a < dim; ++a) {
        const int i = axes[a].index_of(u[a]);
        if (i < 0 || i >= axes[a].count)
            throw std::out_of_range("GradientTransform: point outside covered range");
        flat = flat * axes[a].count + i;
    }
    return values[flat];
}

std::vector<double> GradientTransform::snap(const std::vector<double>& u) const {
    std::vector<double> s(u.size());
    for (int a = 0; a < dim; ++a) {
        int i = axes[a].index_of(u[a]);
        i = std::max(0, std::min(axes[a].count - 1, i));
        s[a] = axes[a].center(i);
    }
    return s;
}

GradientTransform gradient_transform(const ScalarField& field, Tau tau,
                                     const SpectrumOptions& options) {
    check_estimator_grid(field);
    const int d = field.dim();
    const auto phi = phase_field(field, tau, options.taper);
    const auto dft = shifted_dft(field, phi);

    const auto dx = field.grid.spacing(field.domain);
    double cell = 1.0;
    for (int a = 0; a < d; ++a) cell *= dx[a];
    const double scale = cell
        / (std::pow(2.0 * M_PI * tau.value, 0.5 * d) * std::sqrt(field.domain.measure()));

    GradientTransform out;
    out.dim = d;
    out.tau = tau.value;
    out.axes = spectrum_axes(field, tau);
    out.values.resize(dft.size());

    // Cell-center phase: frequency m contributes exp(-i·m·(2π·lo/L + π/n))
    // per axis so the transform is referenced to x = lo + (k+1/2)Δx.
    std::vector<int> idx(d, 0);
    for (std::size_t i = 0; i < dft.size(); ++i) {
        double theta = 0.0;
        for (int a = 0; a < d; ++a) {
            const int m = idx[a] - field.grid.n[a] / 2;
            theta += m * (2.0 * M_PI * field.domain.lo[a] / field.domain.width(a)
                          + M_PI / field.grid.n[a]);
        }
        out.values[i] = dft[i] * std::complex<double>(std::cos(theta), -std::sin(theta)) * scale;
        for (int a = d - 1; a >= 0; --a) {
            if (++idx[a] < field.grid.n[a]) break;
            idx[a] = 0;
        }
    }
    return out;
}

std::vector<double> nyquist_range(const BoxDomain& domain, const GridSpec& grid, Tau tau) {
    const auto dx = grid.spacing(domain);
    std::vector<double> range(dx.size());
    for (std::size_t a = 0; a < dx.size(); ++a) range[a] = M_PI * tau.value / dx[a];
    return range;
}

Tau choose_tau(const BoxDomain& domain, const GridSpec& grid, double grad_bound, double margin) {
    if (!(grad_bound > 0.0))
        throw std::invalid_argument("choose_tau: gradient bound must be positive");
    if (!(margin > 0.0)) throw std::invalid_argument("choose_tau: margin must be positive");
    const auto dx = grid.spacing(domain);
    double dx_max = 0.0;
    for (double v : dx) dx_max = std::max(dx_max, v);
    return Tau(margin * grad_bound * dx_max / M_PI);
}

Tau choose_tau(const ScalarField& field, double grad_bound, double margin) {
    return choose_tau(field.domain, field.grid, grad_bound, margin);
}

}  // namespace gradwave
