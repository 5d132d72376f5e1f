#include "gradwave/spa.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>

#include <json.hpp>

namespace gradwave {

namespace {

double residual_scale(int dim, const Vec3& u) {
    double s = 1.0;
    for (int a = 0; a < dim; ++a) s = std::max(s, std::abs(u[a]));
    return s;
}

bool near_boundary(const BoxDomain& domain, const Vec3& x, double margin_rel) {
    for (int a = 0; a < domain.dim(); ++a) {
        const double margin = margin_rel * domain.width(a);
        if (x[a] - domain.lo[a] <= margin || domain.hi[a] - x[a] <= margin) return true;
    }
    return false;
}

}  // namespace

StationaryPointSet find_stationary_points(const TestFunction& f, const BoxDomain& domain,
                                          const std::vector<double>& u,
                                          const NewtonOptions& options) {
    if (f.dim != domain.dim() || static_cast<int>(u.size()) != f.dim)
        throw std::invalid_argument("find_stationary_points: dimension mismatch");
    const int d = f.dim;
    const Vec3 target = to_vec3(u);
    const double tol = options.residual_tol * residual_scale(d, target);
    const double dedupe = options.dedupe_rel * domain.max_width();

    std::vector<Vec3> roots;
    const int seeds = options.seeds_per_axis;
    std::vector<int> sidx(d, 0);
    std::size_t total_seeds = 1;
    for (int a = 0; a < d; ++a) total_seeds *= static_cast<std::size_t>(seeds);

    for (std::size_t s = 0; s < total_seeds; ++s) {
        Vec3 x{0, 0, 0};
        for (int a = 0; a < d; ++a)
            x[a] = domain.lo[a] + (sidx[a] + 0.5) * domain.width(a) / seeds;
        for (int a = d - 1; a >= 0; --a) {
            if (++sidx[a] < seeds) break;
            sidx[a] = 0;
        }

        // Convergence needs both a tiny residual and a settled iterate: a
        // residual-only stop would accept points still sliding toward a
        // degenerate root, hiding the vanishing Hessian that marks u ∈ C.
        const double step_tol = 1e-12 * domain.max_width();
        bool converged = false;
        double last_step = 0.0;
        for (int it = 0; it < options.max_iterations; ++it) {
            Vec3 g = f.grad(x);
            for (int a = 0; a < d; ++a) g[a] -= target[a];
            if (inf_norm(d, g) <= tol && last_step <= step_tol) {
                converged = true;
                break;
            }
            Vec3 step{0, 0, 0};
            if (!solve(f.hess(x), g, d, step)) break;  // singular Jacobian: skip seed
            for (int a = 0; a < d; ++a) x[a] -= step[a];
            last_step = inf_norm(d, step);
            // Runaway iterates are abandoned; roots must be interior anyway.
            bool inside = true;
            for (int a = 0; a < d; ++a) {
                const double slack = 0.5 * domain.width(a);
                if (x[a] < domain.lo[a] - slack || x[a] > domain.hi[a] + slack) inside = false;
            }
            if (!inside) break;
        }
        if (!converged) continue;
        if (!domain.contains(x, d)) continue;
        if (near_boundary(domain, x, options.boundary_margin_rel)) continue;

        bool duplicate = false;
        for (const auto& r : roots) {
            double dist = 0.0;
            for (int a = 0; a < d; ++a) dist = std::max(dist, std::abs(r[a] - x[a]));
            if (dist <= dedupe) {
                duplicate = true;
                break;
            }
        }
        if (!duplicate) roots.push_back(x);
    }

    std::sort(roots.begin(), roots.end(), [d](const Vec3& a, const Vec3& b) {
        for (int i = 0; i < d; ++i) {
            if (a[i] < b[i]) return true;
            if (a[i] > b[i]) return false;
        }
        return false;
    });

    StationaryPointSet set;
    set.u = u;
    for (const auto& x : roots) {
        const Mat3 h = f.hess(x);
        const double dh = det(h, d);
        if (std::abs(dh) < options.singular_det) {
            std::ostringstream msg;
            msg << "density undefined here: stationary point with |det H| = " << std::abs(dh)
                << " below " << options.singular_det << " (u in the excluded set C)";
            throw density_undefined_error(msg.str());
        }
        StationaryPoint p;
        p.x = to_vector(x, d);
        p.det_hess = dh;
        p.signature = hessian_signature(h, d);
        p.phase_offset = f.eval(x) - dot(d, x, target);
        set.points.push_back(std::move(p));
    }
    return set;
}

double analytic_density(const TestFunction& f, const BoxDomain& domain,
                        const std::vector<double>& u, const NewtonOptions& options) {
    const auto set = find_stationary_points(f, domain, u, options);
    KahanSum s;
    for (const auto& p : set.points) s.add(1.0 / std::abs(p.det_hess));
    return s.value() / domain.measure();
}

OracleDensity oracle_density_grid(const TestFunction& f, const BoxDomain& domain,
                                  const std::vector<BinAxis>& axes,
                                  const OracleOptions& options) {
    if (static_cast<int>(axes.size()) != f.dim)
        throw std::invalid_argument("oracle_density_grid: dimension mismatch");
    OracleDensity out;
    out.density.dim = f.dim;
    out.density.axes = axes;
    std::size_t bins = 1;
    for (const auto& ax : axes) bins *= static_cast<std::size_t>(ax.count);
    out.density.values.assign(bins, 0.0);
    out.mask = ErrorMask::none(bins);

    for (std::size_t flat = 0; flat < bins; ++flat) {
        const auto u = out.density.center_of(flat);
        try {
            const auto set = find_stationary_points(f, domain, u, options.newton);
            KahanSum s;
            bool near_c = false;
            for (const auto& p : set.points) {
                s.add(1.0 / std::abs(p.det_hess));
                if (std::abs(p.det_hess) < options.near_c_min_det) near_c = true;
            }
            out.density.values[flat] = s.value() / domain.measure();
            if (near_c) out.mask.excluded[flat] = 1;
        } catch (const density_undefined_error&) {
            out.mask.excluded[flat] = 1;
        }
    }
    return out;
}

std::complex<double> spa_transform(const TestFunction& f, const BoxDomain& domain,
                                   const std::vector<double>& u, Tau tau,
                                   const NewtonOptions& options) {
    const auto set = find_stationary_points(f, domain, u, options);
    std::complex<double> sum = 0.0;
    for (const auto& p : set.points) {
        const double phase = p.phase_offset / tau.value + p.signature * M_PI / 4.0;
        sum += std::complex<double>(std::cos(phase), std::sin(phase))
             / std::sqrt(std::abs(p.det_hess));
    }
    return sum / std::sqrt(domain.measure());
}

int hessian_signature(const Mat3& h, int dim) {
    Vec3 eigs{0, 0, 0};
    symmetric_eigenvalues(h, dim, eigs);
    double scale = 1.0;
    for (int i = 0; i < dim; ++i) scale = std::max(scale, std::abs(eigs[i]));
    int sig = 0;
    for (int i = 0; i < dim; ++i) {
        if (std::abs(eigs[i]) < 1e-12 * scale)
            throw std::invalid_argument("hessian_signature: near-singular matrix");
        sig += eigs[i] > 0.0 ? 1 : -1;
    }
    return sig;
}

std::complex<double> cross_term(const TestFunction& f, const BoxDomain& domain,
                                const std::vector<double>& u, Tau tau, int k, int l,
                                const NewtonOptions& options) {
    const auto set = find_stationary_points(f, domain, u, options);
    if (k < 0 || l < 0 || k >= set.count() || l >= set.count())
        throw std::out_of_range("cross_term: point index out of range");
    if (k == l) throw std::invalid_argument("cross_term: requires two distinct points");
    const auto& pk = set.points[k];
    const auto& pl = set.points[l];
    const double phase = (pk.phase_offset - pl.phase_offset) / tau.value
                       + (pk.signature - pl.signature) * M_PI / 4.0;
    const double mag =
        1.0 / (domain.measure() * std::sqrt(std::abs(pk.det_hess * pl.det_hess)));
    return {mag * std::cos(phase), mag * std::sin(phase)};
}

std::string stationary_points_json(const StationaryPointSet& set) {
    nlohmann::json j;
    j["u"] = set.u;
    j["count"] = set.count();
    j["points"] = nlohmann::json::array();
    for (const auto& p : set.points) {
        j["points"].push_back({{"x", p.x},
                               {"det_hess", p.det_hess},
                               {"signature", p.signature},
                               {"phase_offset", p.phase_offset}});
    }
    return j.dump(2);
}

}  // namespace gradwave
