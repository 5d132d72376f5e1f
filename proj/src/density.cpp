#include "gradwave/density.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "gradwave/linalg.hpp"

namespace gradwave {

int BinAxis::index_of(double u) const {
    return static_cast<int>(std::floor((u - lo_edge()) / step));
}

bool axes_equal(const std::vector<BinAxis>& a, const std::vector<BinAxis>& b, double tol) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].count != b[i].count) return false;
        if (std::abs(a[i].first_center - b[i].first_center) > tol) return false;
        if (std::abs(a[i].step - b[i].step) > tol) return false;
    }
    return true;
}

std::vector<BinAxis> make_bin_grid(const std::vector<double>& lo, const std::vector<double>& hi,
                                   const std::vector<int>& counts) {
    if (lo.size() != hi.size() || lo.size() != counts.size() || lo.empty())
        throw std::invalid_argument("make_bin_grid: inconsistent axis specification");
    std::vector<BinAxis> axes(lo.size());
    for (std::size_t i = 0; i < lo.size(); ++i) {
        if (counts[i] < 1 || !(hi[i] > lo[i]))
            throw std::invalid_argument("make_bin_grid: bad axis");
        axes[i].count = counts[i];
        axes[i].step = (hi[i] - lo[i]) / counts[i];
        axes[i].first_center = lo[i] + 0.5 * axes[i].step;
    }
    return axes;
}

bool ErrorMask::empty_or_clear() const {
    for (auto e : excluded)
        if (e) return false;
    return true;
}

double ErrorMask::excluded_fraction() const {
    if (excluded.empty()) return 0.0;
    std::size_t n = 0;
    for (auto e : excluded) n += e ? 1 : 0;
    return static_cast<double>(n) / static_cast<double>(excluded.size());
}

ErrorMask ErrorMask::none(std::size_t bins) {
    ErrorMask m;
    m.excluded.assign(bins, 0);
    return m;
}

BallRegion::BallRegion(std::vector<double> center_, double radius_)
    : center(std::move(center_)), radius(radius_) {
    if (center.empty() || center.size() > kMaxDim)
        throw std::invalid_argument("BallRegion: dimension must be 1..3");
    if (!(radius > 0.0)) throw std::invalid_argument("BallRegion: radius must be positive");
}

double BallRegion::volume() const {
    double v = 1.0;
    for (std::size_t i = 0; i < center.size(); ++i) v *= 2.0 * radius;
    return v;
}

double GradientDensity::bin_volume() const {
    double v = 1.0;
    for (const auto& ax : axes) v *= ax.step;
    return v;
}

double GradientDensity::total_mass() const {
    KahanSum s;
    for (double v : values) s.add(v);
    return s.value() * bin_volume();
}

std::size_t GradientDensity::flat_index(const std::vector<int>& idx) const {
    std::size_t flat = 0;
    for (int a = 0; a < dim; ++a) flat = flat * axes[a].count + idx[a];
    return flat;
}

std::vector<double> GradientDensity::center_of(std::size_t flat) const {
    std::vector<double> u(dim);
    for (int a = dim - 1; a >= 0; --a) {
        u[a] = axes[a].center(static_cast<int>(flat % axes[a].count));
        flat /= axes[a].count;
    }
    return u;
}

std::optional<std::size_t> GradientDensity::bin_containing(const std::vector<double>& u) const {
    if (static_cast<int>(u.size()) != dim)
        throw std::invalid_argument("GradientDensity: query dimension mismatch");
    std::size_t flat = 0;
    for (int a = 0; a < dim; ++a) {
        const int i = axes[a].index_of(u[a]);
        if (i < 0 || i >= axes[a].count) return std::nullopt;
        flat = flat * axes[a].count + i;
    }
    return flat;
}

double GradientDensity::value_at(const std::vector<double>& u) const {
    const auto idx = bin_containing(u);
    if (!idx) throw std::out_of_range("GradientDensity: point outside covered range");
    return values[*idx];
}

double integrate_ball(const GradientDensity& density, const BallRegion& region) {
    if (static_cast<int>(region.center.size()) != density.dim)
        throw std::invalid_argument("integrate_ball: dimension mismatch");
    std::vector<int> lo(density.dim), hi(density.dim);
    for (int a = 0; a < density.dim; ++a) {
        const auto& ax = density.axes[a];
        const double covered = ax.hi_edge() - ax.lo_edge();
        if (!(region.radius < 0.5 * covered))
            throw std::invalid_argument(
                "integrate_ball: radius must be smaller than half the covered range");
        if (region.center[a] - region.radius < ax.lo_edge()
            || region.center[a] + region.radius > ax.hi_edge())
            throw std::invalid_argument("integrate_ball: region outside covered range");
        // First/last bin whose center lies inside the closed ball.
        lo[a] = static_cast<int>(
            std::ceil((region.center[a] - region.radius - ax.first_center) / ax.step - 1e-12));
        hi[a] = static_cast<int>(
            std::floor((region.center[a] + region.radius - ax.first_center) / ax.step + 1e-12));
        lo[a] = std::max(lo[a], 0);
        hi[a] = std::min(hi[a], ax.count - 1);
        if (lo[a] > hi[a]) return 0.0;
    }

    KahanSum s;
    std::vector<int> idx(lo);
    while (true) {
        s.add(density.values[density.flat_index(idx)]);
        int a = density.dim - 1;
        while (a >= 0) {
            if (++idx[a] <= hi[a]) break;
            idx[a] = lo[a];
            --a;
        }
        if (a < 0) break;
    }
    return s.value() * density.bin_volume();
}

double mean_in_ball(const GradientDensity& density, const BallRegion& region) {
    return integrate_ball(density, region) / region.volume();
}

GradientDensity rebin(const GradientDensity& src, const std::vector<BinAxis>& target) {
    if (target.size() != static_cast<std::size_t>(src.dim))
        throw std::invalid_argument("rebin: dimension mismatch");
    GradientDensity out;
    out.dim = src.dim;
    out.axes = target;
    out.tau = src.tau;
    out.prenorm_mass = src.prenorm_mass;
    out.clipped_mass = src.clipped_mass;
    std::size_t bins = 1;
    for (const auto& ax : target) bins *= static_cast<std::size_t>(ax.count);
    out.values.assign(bins, 0.0);

    const double src_binvol = src.bin_volume();
    double dropped = 0.0;
    for (std::size_t flat = 0; flat < src.values.size(); ++flat) {
        if (src.values[flat] == 0.0) continue;
        const auto u = src.center_of(flat);
        std::size_t t = 0;
        bool inside = true;
        for (int a = 0; a < src.dim; ++a) {
            const int i = target[a].index_of(u[a]);
            if (i < 0 || i >= target[a].count) {
                inside = false;
                break;
            }
            t = t * target[a].count + i;
        }
        const double mass = src.values[flat] * src_binvol;
        if (inside)
            out.values[t] += mass;
        else
            dropped += mass;
    }
    const double out_binvol = out.bin_volume();
    for (auto& v : out.values) v /= out_binvol;
    out.out_of_range_mass = src.out_of_range_mass + dropped;
    return out;
}

std::vector<double> orientation_histogram(const GradientDensity& density, int sectors) {
    if (density.dim != 2)
        throw std::invalid_argument("orientation_histogram: 2-D densities only");
    if (sectors < 2) throw std::invalid_argument("orientation_histogram: need >= 2 sectors");
    std::vector<double> hist(sectors, 0.0);
    const double binvol = density.bin_volume();
    for (std::size_t i = 0; i < density.values.size(); ++i) {
        if (density.values[i] == 0.0) continue;
        const auto u = density.center_of(i);
        if (u[0] == 0.0 && u[1] == 0.0) continue;
        const double angle = std::atan2(u[1], u[0]);
        int k = static_cast<int>(std::floor(angle / (2.0 * M_PI) * sectors + 0.5));
        k = ((k % sectors) + sectors) % sectors;
        hist[k] += density.values[i] * binvol;
    }
    return hist;
}

void save_density_csv(const GradientDensity& density, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_density_csv: cannot open " + path);
    char buf[64];
    out << "# gradient-density d=" << density.dim;
    if (density.tau) {
        std::snprintf(buf, sizeof buf, "%.17g", *density.tau);
        out << " tau=" << buf;
    }
    std::snprintf(buf, sizeof buf, "%.17g", density.bin_volume());
    out << " bin_volume=" << buf << '\n';
    for (int a = 0; a < density.dim; ++a) {
        out << "# axis" << a << " first_center=";
        std::snprintf(buf, sizeof buf, "%.17g", density.axes[a].first_center);
        out << buf << " step=";
        std::snprintf(buf, sizeof buf, "%.17g", density.axes[a].step);
        out << buf << " count=" << density.axes[a].count << '\n';
    }
    out << "# columns:";
    for (int a = 0; a < density.dim; ++a) out << " u" << (a + 1);
    out << " value\n";
    for (std::size_t flat = 0; flat < density.values.size(); ++flat) {
        const auto u = density.center_of(flat);
        for (int a = 0; a < density.dim; ++a) {
            std::snprintf(buf, sizeof buf, "%.17g", u[a]);
            out << buf << ',';
        }
        std::snprintf(buf, sizeof buf, "%.17g", density.values[flat]);
        out << buf << '\n';
    }
    if (!out) throw std::runtime_error("save_density_csv: write failed for " + path);
}

}  // namespace gradwave
