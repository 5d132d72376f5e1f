// Python bindings for the gradient-density estimator and its reference
// estimators. Densities cross the boundary as lightweight objects holding
// numpy views of the bin values.

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <complex>
#include <optional>

#include "gradwave/baselines.hpp"
#include "gradwave/field.hpp"
#include "gradwave/harness.hpp"
#include "gradwave/spa.hpp"
#include "gradwave/wavefn.hpp"

namespace py = pybind11;
using namespace gradwave;

namespace {

py::array_t<double> density_values(const GradientDensity& d) {
    std::vector<py::ssize_t> shape;
    for (const auto& ax : d.axes) shape.push_back(ax.count);
    py::array_t<double> out(shape);
    std::copy(d.values.begin(), d.values.end(), out.mutable_data());
    return out;
}

py::array_t<double> axis_centers(const GradientDensity& d, int axis) {
    if (axis < 0 || axis >= d.dim) throw py::index_error("axis out of range");
    py::array_t<double> out(d.axes[axis].count);
    auto* p = out.mutable_data();
    for (int i = 0; i < d.axes[axis].count; ++i) p[i] = d.axes[axis].center(i);
    return out;
}

std::vector<BinAxis> grid_from_args(const std::vector<double>& lo, const std::vector<double>& hi,
                                    const std::vector<int>& bins) {
    return make_bin_grid(lo, hi, bins);
}

ScalarField field_from_array(py::array_t<double, py::array::c_style | py::array::forcecast> values,
                             const std::vector<double>& lo, const std::vector<double>& hi) {
    std::vector<int> n(values.ndim());
    for (py::ssize_t i = 0; i < values.ndim(); ++i) n[i] = static_cast<int>(values.shape(i));
    std::vector<double> v(values.data(), values.data() + values.size());
    return ScalarField(BoxDomain(lo, hi), GridSpec(n), std::move(v));
}

GradientSamples samples_from_array(
    py::array_t<double, py::array::c_style | py::array::forcecast> data) {
    if (data.ndim() != 2) throw py::value_error("samples must be an (M, d) array");
    GradientSamples s;
    s.dim = static_cast<int>(data.shape(1));
    s.data.assign(data.data(), data.data() + data.size());
    return s;
}

py::dict report_dict(const SweepReport& r) {
    py::dict out;
    out["kind"] = r.kind;
    out["axis"] = r.axis;
    py::dict metrics;
    for (const auto& [name, vals] : r.metrics) metrics[name.c_str()] = vals;
    out["metrics"] = metrics;
    if (r.fit) {
        py::dict fit;
        fit["slope"] = r.fit->slope;
        fit["intercept"] = r.fit->intercept;
        fit["r2"] = r.fit->r2;
        out["fit"] = fit;
    }
    py::list gates;
    for (const auto& g : r.gates) {
        py::dict gd;
        gd["name"] = g.name;
        gd["value"] = g.value;
        gd["threshold"] = g.threshold;
        gd["comparison"] = g.comparison;
        gd["pass"] = g.pass;
        gates.append(gd);
    }
    out["gates"] = gates;
    out["pass"] = r.all_pass();
    return out;
}

}  // namespace

PYBIND11_MODULE(_gradwave, m) {
    m.doc() = "gradient density estimation from the power spectrum of exp(iS/tau)";

    py::class_<BoxDomain>(m, "BoxDomain")
        .def(py::init<std::vector<double>, std::vector<double>>(), py::arg("lo"), py::arg("hi"))
        .def_property_readonly("dim", &BoxDomain::dim)
        .def_readonly("lo", &BoxDomain::lo)
        .def_readonly("hi", &BoxDomain::hi)
        .def("measure", &BoxDomain::measure);

    py::class_<ScalarField>(m, "ScalarField")
        .def_property_readonly("dim", &ScalarField::dim)
        .def_property_readonly("shape",
                               [](const ScalarField& f) { return f.grid.n; })
        .def_property_readonly("values",
                               [](const ScalarField& f) {
                                   std::vector<py::ssize_t> shape(f.grid.n.begin(),
                                                                  f.grid.n.end());
                                   py::array_t<double> out(shape);
                                   std::copy(f.values.begin(), f.values.end(),
                                             out.mutable_data());
                                   return out;
                               })
        .def_property_readonly("domain", [](const ScalarField& f) { return f.domain; });

    py::class_<GradientDensity>(m, "GradientDensity")
        .def_property_readonly("dim", [](const GradientDensity& d) { return d.dim; })
        .def_property_readonly("values", &density_values)
        .def_property_readonly("tau",
                               [](const GradientDensity& d) {
                                   return d.tau ? py::cast(*d.tau) : py::none();
                               })
        .def_property_readonly("bin_volume", &GradientDensity::bin_volume)
        .def_property_readonly("prenorm_mass",
                               [](const GradientDensity& d) { return d.prenorm_mass; })
        .def_property_readonly("clipped_mass",
                               [](const GradientDensity& d) { return d.clipped_mass; })
        .def_property_readonly("out_of_range_mass",
                               [](const GradientDensity& d) { return d.out_of_range_mass; })
        .def("centers", &axis_centers, py::arg("axis"))
        .def("total_mass", &GradientDensity::total_mass)
        .def("value_at", &GradientDensity::value_at, py::arg("u"))
        .def("mass_in_ball",
             [](const GradientDensity& d, const std::vector<double>& center, double radius) {
                 return integrate_ball(d, BallRegion(center, radius));
             },
             py::arg("center"), py::arg("radius"))
        .def("mean_in_ball",
             [](const GradientDensity& d, const std::vector<double>& center, double radius) {
                 return mean_in_ball(d, BallRegion(center, radius));
             },
             py::arg("center"), py::arg("radius"))
        .def("rebin",
             [](const GradientDensity& d, const std::vector<double>& lo,
                const std::vector<double>& hi, const std::vector<int>& bins) {
                 return rebin(d, make_bin_grid(lo, hi, bins));
             },
             py::arg("lo"), py::arg("hi"), py::arg("bins"))
        .def("orientation_histogram",
             [](const GradientDensity& d, int sectors) {
                 return orientation_histogram(d, sectors);
             },
             py::arg("sectors"))
        .def("save_csv",
             [](const GradientDensity& d, const std::string& path) {
                 save_density_csv(d, path);
             },
             py::arg("path"));

    m.def("catalog_names", &catalog_names);
    m.def("sample_catalog",
          [](const std::string& name, const std::vector<int>& n) {
              const auto f = catalog(name);
              std::vector<int> shape = n;
              if (static_cast<int>(shape.size()) == 1 && f.dim > 1)
                  shape.assign(f.dim, shape[0]);
              return sample_field(f, f.default_domain(), GridSpec(shape));
          },
          py::arg("name"), py::arg("n"));
    m.def("field_from_array", &field_from_array, py::arg("values"), py::arg("lo"), py::arg("hi"));
    m.def("load_field_csv", &load_field_csv, py::arg("path"));
    m.def("save_field_csv", &save_field_csv, py::arg("field"), py::arg("path"));
    m.def("load_image_pgm", &load_image_pgm, py::arg("path"), py::arg("intensity_scale") = 1.0);

    m.def("grad_bound",
          [](const std::string& name) { return catalog(name).grad_bound; },
          py::arg("name"));
    m.def("fd_gradient_bound", &fd_gradient_bound, py::arg("field"));
    m.def("choose_tau",
          [](const ScalarField& field, double grad_bound, double margin) {
              return choose_tau(field, grad_bound, margin).value;
          },
          py::arg("field"), py::arg("grad_bound"), py::arg("margin") = 1.5);
    m.def("nyquist_range",
          [](const ScalarField& field, double tau) {
              return nyquist_range(field.domain, field.grid, Tau(tau));
          },
          py::arg("field"), py::arg("tau"));

    m.def("power_spectrum_density",
          [](const ScalarField& field, double tau, bool taper) {
              SpectrumOptions opt;
              opt.taper = taper;
              return power_spectrum_density(field, Tau(tau), opt);
          },
          py::arg("field"), py::arg("tau"), py::arg("taper") = false);

    m.def("stationary_points",
          [](const std::string& name, const std::vector<double>& u) {
              const auto f = catalog(name);
              const auto set = find_stationary_points(f, f.default_domain(), u);
              py::list out;
              for (const auto& p : set.points) {
                  py::dict d;
                  d["x"] = p.x;
                  d["det_hess"] = p.det_hess;
                  d["signature"] = p.signature;
                  d["phase_offset"] = p.phase_offset;
                  out.append(d);
              }
              return out;
          },
          py::arg("name"), py::arg("u"));
    m.def("analytic_density",
          [](const std::string& name, const std::vector<double>& u) {
              const auto f = catalog(name);
              return analytic_density(f, f.default_domain(), u);
          },
          py::arg("name"), py::arg("u"));
    m.def("oracle_density_grid",
          [](const std::string& name, const std::vector<double>& lo,
             const std::vector<double>& hi, const std::vector<int>& bins) {
              const auto f = catalog(name);
              const auto oracle =
                  oracle_density_grid(f, f.default_domain(), grid_from_args(lo, hi, bins));
              py::array_t<bool> mask(static_cast<py::ssize_t>(oracle.mask.excluded.size()));
              auto* p = mask.mutable_data();
              for (std::size_t i = 0; i < oracle.mask.excluded.size(); ++i)
                  p[i] = oracle.mask.excluded[i] != 0;
              return py::make_tuple(oracle.density, mask);
          },
          py::arg("name"), py::arg("lo"), py::arg("hi"), py::arg("bins"));

    m.def("finite_diff_gradients",
          [](const ScalarField& field) {
              const auto g = finite_diff_gradients(field);
              py::array_t<double> out({static_cast<py::ssize_t>(g.count()),
                                       static_cast<py::ssize_t>(g.dim)});
              std::copy(g.data.begin(), g.data.end(), out.mutable_data());
              return out;
          },
          py::arg("field"));
    m.def("histogram_density",
          [](py::array_t<double, py::array::c_style | py::array::forcecast> samples,
             const std::vector<double>& lo, const std::vector<double>& hi,
             const std::vector<int>& bins) {
              return histogram_density(samples_from_array(samples),
                                       grid_from_args(lo, hi, bins));
          },
          py::arg("samples"), py::arg("lo"), py::arg("hi"), py::arg("bins"));
    m.def("monte_carlo_density",
          [](const std::string& name, std::size_t count, const std::vector<double>& lo,
             const std::vector<double>& hi, const std::vector<int>& bins, std::uint64_t seed) {
              const auto f = catalog(name);
              return monte_carlo_density(f, f.default_domain(), count,
                                         grid_from_args(lo, hi, bins), seed);
          },
          py::arg("name"), py::arg("count"), py::arg("lo"), py::arg("hi"), py::arg("bins"),
          py::arg("seed") = 2024);
    m.def("charfn_density",
          [](py::array_t<double, py::array::c_style | py::array::forcecast> samples,
             double mu_omega, int omega_per_axis, const std::vector<double>& lo,
             const std::vector<double>& hi, const std::vector<int>& bins) {
              return charfn_density(samples_from_array(samples), mu_omega, omega_per_axis,
                                    grid_from_args(lo, hi, bins));
          },
          py::arg("samples"), py::arg("mu_omega"), py::arg("omega_per_axis"), py::arg("lo"),
          py::arg("hi"), py::arg("bins"));

    m.def("l1_error",
          [](const GradientDensity& a, const GradientDensity& b,
             std::optional<py::array_t<bool, py::array::c_style | py::array::forcecast>> mask) {
              if (!mask) return l1_error(a, b);
              ErrorMask em;
              em.excluded.assign(mask->data(), mask->data() + mask->size());
              return l1_error(a, b, em);
          },
          py::arg("a"), py::arg("b"), py::arg("mask") = py::none());

    m.def("tau_sweep",
          [](const std::string& name, int n, const std::vector<double>& taus,
             const std::vector<double>& u0, double alpha) {
              const auto f = catalog(name);
              const GridSpec grid(std::vector<int>(f.dim, n));
              return report_dict(tau_sweep(f, f.default_domain(), grid, taus,
                                           BallRegion(u0, alpha), default_compare_grid(f)));
          },
          py::arg("name"), py::arg("n"), py::arg("taus"), py::arg("u0"), py::arg("alpha"));
    m.def("decay_check",
          [](const std::string& name, int n, const std::vector<double>& u0,
             const std::vector<double>& taus) {
              const auto f = catalog(name);
              const GridSpec grid(std::vector<int>(f.dim, n));
              return report_dict(decay_check(f, f.default_domain(), grid, u0, taus));
          },
          py::arg("name"), py::arg("n"), py::arg("u0"), py::arg("taus"));
    m.def("spa_agreement",
          [](const std::string& name, int n, const std::vector<double>& u,
             const std::vector<double>& taus) {
              const auto f = catalog(name);
              const GridSpec grid(std::vector<int>(f.dim, n));
              return report_dict(spa_agreement(f, f.default_domain(), grid, u, taus));
          },
          py::arg("name"), py::arg("n"), py::arg("u"), py::arg("taus"));
    m.def("n_rate_1d",
          [](const std::string& name, const std::vector<int>& n_list, double c_tau, int bins) {
              const auto f = catalog(name);
              CompareGrid compare = default_compare_grid(f, bins);
              compare.axes = make_bin_grid({-0.9 * f.grad_bound}, {0.9 * f.grad_bound}, {bins});
              return report_dict(n_rate_1d(f, f.default_domain(), n_list, c_tau, compare));
          },
          py::arg("name"), py::arg("n_list"), py::arg("c_tau"), py::arg("bins") = 64);
    m.def("geometric_taus", &geometric_taus, py::arg("tau_max"), py::arg("count"),
          py::arg("ratio") = 0.5);

    py::register_exception<density_undefined_error>(m, "DensityUndefinedError");
}
