// Domain geometry, uniform cell-centered grids, sampled scalar fields, the
// analytic test-function catalog, and external data ingestion (CSV, PGM).
//
// Sampling is cell-centered: sample k of axis i sits at lo_i + (k + 1/2)·Δx_i,
// so no sample ever lies on the domain boundary. Smoothness of externally
// loaded data (the estimator assumes S is several times differentiable) is
// the caller's responsibility; it cannot be checked from samples.
#pragma once

#include <functional>
#include <string>
#include <vector>

#include "gradwave/linalg.hpp"

namespace gradwave {

struct BoxDomain {
    std::vector<double> lo;
    std::vector<double> hi;

    BoxDomain(std::vector<double> lo_, std::vector<double> hi_);

    int dim() const { return static_cast<int>(lo.size()); }
    double width(int axis) const { return hi[axis] - lo[axis]; }
    double max_width() const;
    double measure() const;
    bool contains(const Vec3& x, int d) const;
};

struct GridSpec {
    std::vector<int> n;

    explicit GridSpec(std::vector<int> n_);

    int dim() const { return static_cast<int>(n.size()); }
    std::size_t total() const;
    std::vector<double> spacing(const BoxDomain& domain) const;
};

struct ScalarField {
    BoxDomain domain;
    GridSpec grid;
    std::vector<double> values;  // row-major, axis 0 slowest

    ScalarField(BoxDomain domain_, GridSpec grid_, std::vector<double> values_);

    int dim() const { return domain.dim(); }
    std::size_t size() const { return values.size(); }
    double coordinate(int axis, int index) const;
    std::size_t flat_index(const std::vector<int>& idx) const;
};

// Analytic fixture: S, its gradient and Hessian in closed form, plus the
// known sup-norm bound of the gradient on the canonical domain.
struct TestFunction {
    std::string name;
    int dim = 1;
    std::function<double(const Vec3&)> eval;
    std::function<Vec3(const Vec3&)> grad;
    std::function<Mat3(const Vec3&)> hess;
    double grad_bound = 0.0;
    std::vector<double> domain_lo;
    std::vector<double> domain_hi;

    BoxDomain default_domain() const { return BoxDomain(domain_lo, domain_hi); }
};

// Known names: quadratic1d, cosine1d, doublewell1d, quadratic2d, sinusoid2d,
// quadratic3d. Throws std::invalid_argument for anything else.
TestFunction catalog(const std::string& name);
std::vector<std::string> catalog_names();

// S(x) = x'Ax/2 on [-1,1]^2 for a symmetric positive definite A.
TestFunction quadratic2d(const Mat3& a);

ScalarField sample_field(const TestFunction& f, const BoxDomain& domain, const GridSpec& grid);

// CSV field format: header `# d=<d> lo=<a1,..> hi=<b1,..> n=<n1,..>`, then one
// value per line in row-major order. save/load round-trips bit-exactly.
void save_field_csv(const ScalarField& field, const std::string& path);
ScalarField load_field_csv(const std::string& path);

// PGM (P2 ASCII or P5 binary, maxval <= 65535). The image becomes a 2-D field
// on [0,W]x[0,H] in pixel units with value = intensity_scale * pixel; row 0 of
// the file maps to the smallest x2.
ScalarField load_image_pgm(const std::string& path, double intensity_scale);

}  // namespace gradwave
