#include "gradwave/baselines.hpp"

#include <cmath>
#include <complex>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "gradwave/linalg.hpp"
#include "gradwave/rng.hpp"

namespace gradwave {

GradientSamples finite_diff_gradients(const ScalarField& field) {
    const int d = field.dim();
    for (int n : field.grid.n)
        if (n < 3)
            throw std::invalid_argument("finite_diff_gradients: needs at least 3 samples per axis");

    const auto dx = field.grid.spacing(field.domain);
    std::vector<std::size_t> stride(d, 1);
    for (int a = d - 2; a >= 0; --a)
        stride[a] = stride[a + 1] * static_cast<std::size_t>(field.grid.n[a + 1]);

    GradientSamples out;
    out.dim = d;
    out.source = GradientSamples::Source::finite_difference;
    std::size_t m = 1;
    for (int a = 0; a < d; ++a) m *= static_cast<std::size_t>(field.grid.n[a] - 2);
    out.data.reserve(m * d);

    std::vector<int> idx(d, 1);
    while (true) {
        std::size_t flat = 0;
        for (int a = 0; a < d; ++a) flat += static_cast<std::size_t>(idx[a]) * stride[a];
        for (int a = 0; a < d; ++a) {
            const double hi = field.values[flat + stride[a]];
            const double lo = field.values[flat - stride[a]];
            out.data.push_back((hi - lo) / (2.0 * dx[a]));
        }
        int a = d - 1;
        while (a >= 0) {
            if (++idx[a] <= field.grid.n[a] - 2) break;
            idx[a] = 1;
            --a;
        }
        if (a < 0) break;
    }
    return out;
}

double fd_gradient_bound(const ScalarField& field) {
    const auto g = finite_diff_gradients(field);
    double bound = 0.0;
    for (double v : g.data) bound = std::max(bound, std::abs(v));
    return bound;
}

GradientSamples draw_gradient_samples(const TestFunction& f, const BoxDomain& domain,
                                      std::size_t count, std::uint64_t seed) {
    if (f.dim != domain.dim())
        throw std::invalid_argument("draw_gradient_samples: dimension mismatch");
    if (count < 1) throw std::invalid_argument("draw_gradient_samples: empty sample set");
    const int d = f.dim;
    CounterRng rng(seed);
    GradientSamples out;
    out.dim = d;
    out.source = GradientSamples::Source::analytic;
    out.data.resize(count * d);
    for (std::size_t m = 0; m < count; ++m) {
        Vec3 x{0, 0, 0};
        for (int a = 0; a < d; ++a)
            x[a] = domain.lo[a] + domain.width(a) * rng.uniform01(m * d + a);
        const Vec3 g = f.grad(x);
        for (int a = 0; a < d; ++a) out.data[m * d + a] = g[a];
    }
    return out;
}

namespace {

GradientDensity empty_density(int dim, const std::vector<BinAxis>& axes) {
    GradientDensity out;
    out.dim = dim;
    out.axes = axes;
    std::size_t bins = 1;
    for (const auto& ax : axes) bins *= static_cast<std::size_t>(ax.count);
    out.values.assign(bins, 0.0);
    return out;
}

// Returns the flat bin index of g, or nullopt when outside the grid.
std::optional<std::size_t> bin_of(const std::vector<BinAxis>& axes, const double* g, int d) {
    std::size_t flat = 0;
    for (int a = 0; a < d; ++a) {
        const int i = axes[a].index_of(g[a]);
        if (i < 0 || i >= axes[a].count) return std::nullopt;
        flat = flat * axes[a].count + i;
    }
    return flat;
}

}  // namespace

GradientDensity histogram_density(const GradientSamples& samples,
                                  const std::vector<BinAxis>& axes) {
    if (samples.count() == 0) throw std::invalid_argument("histogram_density: empty sample set");
    if (axes.size() != static_cast<std::size_t>(samples.dim))
        throw std::invalid_argument("histogram_density: dimension mismatch");
    auto out = empty_density(samples.dim, axes);
    std::size_t outside = 0;
    for (std::size_t m = 0; m < samples.count(); ++m) {
        const auto idx = bin_of(axes, samples.sample(m), samples.dim);
        if (idx)
            out.values[*idx] += 1.0;
        else
            ++outside;
    }
    const double denom = static_cast<double>(samples.count()) * out.bin_volume();
    for (auto& v : out.values) v /= denom;
    out.out_of_range_mass =
        static_cast<double>(outside) / static_cast<double>(samples.count());
    return out;
}

GradientDensity monte_carlo_density(const TestFunction& f, const BoxDomain& domain,
                                    std::size_t count, const std::vector<BinAxis>& axes,
                                    std::uint64_t seed) {
    if (count < 10000)
        throw std::invalid_argument("monte_carlo_density: needs at least 10^4 samples");
    if (f.dim != domain.dim() || axes.size() != static_cast<std::size_t>(f.dim))
        throw std::invalid_argument("monte_carlo_density: dimension mismatch");
    const int d = f.dim;
    CounterRng rng(seed);
    auto out = empty_density(d, axes);
    std::size_t outside = 0;
    for (std::size_t m = 0; m < count; ++m) {
        Vec3 x{0, 0, 0};
        for (int a = 0; a < d; ++a)
            x[a] = domain.lo[a] + domain.width(a) * rng.uniform01(m * d + a);
        const Vec3 g = f.grad(x);
        const auto idx = bin_of(axes, g.data(), d);
        if (idx)
            out.values[*idx] += 1.0;
        else
            ++outside;
    }
    const double denom = static_cast<double>(count) * out.bin_volume();
    for (auto& v : out.values) v /= denom;
    out.out_of_range_mass = static_cast<double>(outside) / static_cast<double>(count);
    return out;
}

GradientDensity charfn_density(const GradientSamples& samples, double mu_omega,
                               int omega_per_axis, const std::vector<BinAxis>& axes) {
    if (samples.count() == 0) throw std::invalid_argument("charfn_density: empty sample set");
    if (axes.size() != static_cast<std::size_t>(samples.dim))
        throw std::invalid_argument("charfn_density: dimension mismatch");
    if (omega_per_axis < 16 || omega_per_axis % 2 != 0)
        throw std::invalid_argument("charfn_density: omega_per_axis must be even and >= 16");
    if (!(mu_omega > 0.0)) throw std::invalid_argument("charfn_density: mu_omega must be positive");
    const int d = samples.dim;
    for (const auto& ax : axes) {
        if (omega_per_axis != static_cast<int>(std::lround(mu_omega * ax.count)))
            throw std::invalid_argument(
                "charfn_density: lattice/bin mismatch (omega_per_axis must equal "
                "mu_omega x bins per axis)");
    }

    // DC-centered lattice dual to the bin grid: spacing 2π / u-range.
    std::vector<double> domega(d);
    for (int a = 0; a < d; ++a)
        domega[a] = 2.0 * M_PI / (axes[a].step * axes[a].count);
    const int j0 = omega_per_axis / 2;

    std::size_t lattice = 1;
    for (int a = 0; a < d; ++a) lattice *= static_cast<std::size_t>(omega_per_axis);

    // ψ(ω) by direct summation over samples: Θ(M × omega_per_axis^d).
    std::vector<std::complex<double>> psi(lattice);
    std::vector<int> jdx(d, 0);
    for (std::size_t j = 0; j < lattice; ++j) {
        Vec3 omega{0, 0, 0};
        for (int a = 0; a < d; ++a) omega[a] = (jdx[a] - j0) * domega[a];
        KahanSum re, im;
        for (std::size_t m = 0; m < samples.count(); ++m) {
            const double* g = samples.sample(m);
            double phase = 0.0;
            for (int a = 0; a < d; ++a) phase += omega[a] * g[a];
            re.add(std::cos(phase));
            im.add(std::sin(phase));
        }
        const double inv_m = 1.0 / static_cast<double>(samples.count());
        psi[j] = {re.value() * inv_m, im.value() * inv_m};
        for (int a = d - 1; a >= 0; --a) {
            if (++jdx[a] < omega_per_axis) break;
            jdx[a] = 0;
        }
    }

    // Inverse transform at each bin center, real part.
    auto out = empty_density(d, axes);
    double cell_omega = 1.0;
    for (int a = 0; a < d; ++a) cell_omega *= domega[a] / (2.0 * M_PI);
    std::vector<int> cdx(d, 0);
    for (std::size_t c = 0; c < out.values.size(); ++c) {
        std::vector<double> u(d);
        for (int a = 0; a < d; ++a) u[a] = axes[a].center(cdx[a]);
        KahanSum acc;
        std::fill(jdx.begin(), jdx.end(), 0);
        for (std::size_t j = 0; j < lattice; ++j) {
            double phase = 0.0;
            for (int a = 0; a < d; ++a) phase -= (jdx[a] - j0) * domega[a] * u[a];
            acc.add(psi[j].real() * std::cos(phase) - psi[j].imag() * std::sin(phase));
            for (int a = d - 1; a >= 0; --a) {
                if (++jdx[a] < omega_per_axis) break;
                jdx[a] = 0;
            }
        }
        out.values[c] = acc.value() * cell_omega;
        for (int a = d - 1; a >= 0; --a) {
            if (++cdx[a] < axes[a].count) break;
            cdx[a] = 0;
        }
    }

    // Truncated inversion produces negative lobes: clip, report, renormalize.
    KahanSum clipped;
    for (auto& v : out.values) {
        if (v < 0.0) {
            clipped.add(-v);
            v = 0.0;
        }
    }
    out.clipped_mass = clipped.value() * out.bin_volume();
    const double mass = out.total_mass();
    out.prenorm_mass = mass + out.clipped_mass;
    if (mass > 0.0)
        for (auto& v : out.values) v /= mass;
    return out;
}

void save_samples(const GradientSamples& samples, const std::string& data_path,
                  const std::string& sidecar_path) {
    static_assert(sizeof(double) == 8);
    std::ofstream data(data_path, std::ios::binary);
    if (!data) throw std::runtime_error("save_samples: cannot open " + data_path);
    // Little-endian float64; byte-swapping big-endian hosts is out of scope.
    data.write(reinterpret_cast<const char*>(samples.data.data()),
               static_cast<std::streamsize>(samples.data.size() * sizeof(double)));
    if (!data) throw std::runtime_error("save_samples: write failed");

    nlohmann::json j;
    j["d"] = samples.dim;
    j["count"] = samples.count();
    j["source"] = samples.source == GradientSamples::Source::analytic ? "analytic"
                                                                      : "finite-difference";
    j["data"] = data_path;
    std::ofstream side(sidecar_path);
    if (!side) throw std::runtime_error("save_samples: cannot open " + sidecar_path);
    side << j.dump(2) << '\n';
}

GradientSamples load_samples(const std::string& sidecar_path) {
    std::ifstream side(sidecar_path);
    if (!side) throw std::runtime_error("load_samples: cannot open " + sidecar_path);
    nlohmann::json j;
    side >> j;
    GradientSamples out;
    out.dim = j.at("d").get<int>();
    if (out.dim < 1 || out.dim > kMaxDim) throw std::runtime_error("load_samples: bad dimension");
    out.source = j.at("source").get<std::string>() == "analytic"
                     ? GradientSamples::Source::analytic
                     : GradientSamples::Source::finite_difference;
    const auto count = j.at("count").get<std::size_t>();
    const std::string data_path = j.at("data").get<std::string>();
    std::ifstream data(data_path, std::ios::binary);
    if (!data) throw std::runtime_error("load_samples: cannot open " + data_path);
    out.data.resize(count * static_cast<std::size_t>(out.dim));
    data.read(reinterpret_cast<char*>(out.data.data()),
              static_cast<std::streamsize>(out.data.size() * sizeof(double)));
    if (data.gcount() != static_cast<std::streamsize>(out.data.size() * sizeof(double)))
        throw std::runtime_error("load_samples: truncated payload");
    for (double v : out.data)
        if (!std::isfinite(v)) throw std::runtime_error("load_samples: non-finite entry");
    return out;
}

}  // namespace gradwave
