#include "gradwave/field.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace gradwave {

BoxDomain::BoxDomain(std::vector<double> lo_, std::vector<double> hi_)
    : lo(std::move(lo_)), hi(std::move(hi_)) {
    if (lo.size() != hi.size())
        throw std::invalid_argument("BoxDomain: lo/hi size mismatch");
    if (lo.empty() || lo.size() > kMaxDim)
        throw std::invalid_argument("BoxDomain: dimension must be 1..3");
    for (std::size_t i = 0; i < lo.size(); ++i) {
        if (!std::isfinite(lo[i]) || !std::isfinite(hi[i]) || !(hi[i] > lo[i]))
            throw std::invalid_argument("BoxDomain: requires hi[i] > lo[i]");
    }
}

double BoxDomain::max_width() const {
    double w = 0.0;
    for (int i = 0; i < dim(); ++i) w = std::max(w, width(i));
    return w;
}

double BoxDomain::measure() const {
    double m = 1.0;
    for (int i = 0; i < dim(); ++i) m *= width(i);
    return m;
}

bool BoxDomain::contains(const Vec3& x, int d) const {
    for (int i = 0; i < d; ++i)
        if (x[i] < lo[i] || x[i] > hi[i]) return false;
    return true;
}

GridSpec::GridSpec(std::vector<int> n_) : n(std::move(n_)) {
    if (n.empty() || n.size() > kMaxDim)
        throw std::invalid_argument("GridSpec: dimension must be 1..3");
    for (int ni : n)
        if (ni < 1) throw std::invalid_argument("GridSpec: samples per axis must be positive");
    // Sanity bound on total sample count (addressable memory).
    double total_d = 1.0;
    for (int ni : n) total_d *= static_cast<double>(ni);
    if (total_d > 1e9) throw std::invalid_argument("GridSpec: total sample count too large");
}

std::size_t GridSpec::total() const {
    std::size_t t = 1;
    for (int ni : n) t *= static_cast<std::size_t>(ni);
    return t;
}

std::vector<double> GridSpec::spacing(const BoxDomain& domain) const {
    if (domain.dim() != dim()) throw std::invalid_argument("GridSpec: dimension mismatch");
    std::vector<double> dx(n.size());
    for (int i = 0; i < dim(); ++i) dx[i] = domain.width(i) / n[i];
    return dx;
}

ScalarField::ScalarField(BoxDomain domain_, GridSpec grid_, std::vector<double> values_)
    : domain(std::move(domain_)), grid(std::move(grid_)), values(std::move(values_)) {
    if (domain.dim() != grid.dim())
        throw std::invalid_argument("ScalarField: domain/grid dimension mismatch");
    if (values.size() != grid.total())
        throw std::invalid_argument("ScalarField: value count does not match grid");
    for (double v : values)
        if (!std::isfinite(v)) throw std::invalid_argument("ScalarField: non-finite value");
}

double ScalarField::coordinate(int axis, int index) const {
    const double dx = domain.width(axis) / grid.n[axis];
    return domain.lo[axis] + (index + 0.5) * dx;
}

std::size_t ScalarField::flat_index(const std::vector<int>& idx) const {
    std::size_t flat = 0;
    for (int a = 0; a < dim(); ++a) flat = flat * grid.n[a] + idx[a];
    return flat;
}

namespace {

TestFunction make_quadratic1d() {
    TestFunction f;
    f.name = "quadratic1d";
    f.dim = 1;
    f.eval = [](const Vec3& x) { return 0.5 * x[0] * x[0]; };
    f.grad = [](const Vec3& x) { return Vec3{x[0], 0, 0}; };
    f.hess = [](const Vec3&) { return Mat3{{{1, 0, 0}, {0, 0, 0}, {0, 0, 0}}}; };
    f.grad_bound = 1.0;
    f.domain_lo = {-1.0};
    f.domain_hi = {1.0};
    return f;
}

TestFunction make_cosine1d() {
    TestFunction f;
    f.name = "cosine1d";
    f.dim = 1;
    f.eval = [](const Vec3& x) { return std::cos(x[0]); };
    f.grad = [](const Vec3& x) { return Vec3{-std::sin(x[0]), 0, 0}; };
    f.hess = [](const Vec3& x) { return Mat3{{{-std::cos(x[0]), 0, 0}, {0, 0, 0}, {0, 0, 0}}}; };
    f.grad_bound = 1.0;
    f.domain_lo = {0.0};
    f.domain_hi = {2.0 * M_PI};
    return f;
}

TestFunction make_doublewell1d() {
    TestFunction f;
    f.name = "doublewell1d";
    f.dim = 1;
    f.eval = [](const Vec3& x) { return 0.25 * std::pow(x[0], 4) - 0.5 * x[0] * x[0]; };
    f.grad = [](const Vec3& x) { return Vec3{x[0] * x[0] * x[0] - x[0], 0, 0}; };
    f.hess = [](const Vec3& x) {
        return Mat3{{{3.0 * x[0] * x[0] - 1.0, 0, 0}, {0, 0, 0}, {0, 0, 0}}};
    };
    f.grad_bound = 6.0;  // |x^3 - x| at x = ±2
    f.domain_lo = {-2.0};
    f.domain_hi = {2.0};
    return f;
}

TestFunction make_sinusoid2d() {
    TestFunction f;
    f.name = "sinusoid2d";
    f.dim = 2;
    f.eval = [](const Vec3& x) { return std::cos(x[0]) + std::cos(x[1]); };
    f.grad = [](const Vec3& x) { return Vec3{-std::sin(x[0]), -std::sin(x[1]), 0}; };
    f.hess = [](const Vec3& x) {
        return Mat3{{{-std::cos(x[0]), 0, 0}, {0, -std::cos(x[1]), 0}, {0, 0, 0}}};
    };
    f.grad_bound = 1.0;
    f.domain_lo = {0.0, 0.0};
    f.domain_hi = {2.0 * M_PI, 2.0 * M_PI};
    return f;
}

TestFunction make_quadratic3d() {
    TestFunction f;
    f.name = "quadratic3d";
    f.dim = 3;
    f.eval = [](const Vec3& x) {
        return 0.5 * (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
    };
    f.grad = [](const Vec3& x) { return x; };
    f.hess = [](const Vec3&) { return Mat3{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}}; };
    f.grad_bound = 1.0;
    f.domain_lo = {-1.0, -1.0, -1.0};
    f.domain_hi = {1.0, 1.0, 1.0};
    return f;
}

}  // namespace

TestFunction quadratic2d(const Mat3& a) {
    if (a[0][1] != a[1][0])
        throw std::invalid_argument("quadratic2d: matrix must be symmetric");
    const double d = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    if (a[0][0] <= 0.0 || d <= 0.0)
        throw std::invalid_argument("quadratic2d: matrix must be positive definite");
    TestFunction f;
    f.name = "quadratic2d";
    f.dim = 2;
    f.eval = [a](const Vec3& x) {
        return 0.5 * (a[0][0] * x[0] * x[0] + 2.0 * a[0][1] * x[0] * x[1]
                      + a[1][1] * x[1] * x[1]);
    };
    f.grad = [a](const Vec3& x) {
        return Vec3{a[0][0] * x[0] + a[0][1] * x[1], a[1][0] * x[0] + a[1][1] * x[1], 0};
    };
    f.hess = [a](const Vec3&) {
        return Mat3{{{a[0][0], a[0][1], 0}, {a[1][0], a[1][1], 0}, {0, 0, 0}}};
    };
    f.grad_bound = std::max(std::abs(a[0][0]) + std::abs(a[0][1]),
                            std::abs(a[1][0]) + std::abs(a[1][1]));
    f.domain_lo = {-1.0, -1.0};
    f.domain_hi = {1.0, 1.0};
    return f;
}

TestFunction catalog(const std::string& name) {
    if (name == "quadratic1d") return make_quadratic1d();
    if (name == "cosine1d") return make_cosine1d();
    if (name == "doublewell1d") return make_doublewell1d();
    if (name == "quadratic2d")
        return quadratic2d(Mat3{{{2, 0, 0}, {0, 1, 0}, {0, 0, 0}}});
    if (name == "sinusoid2d") return make_sinusoid2d();
    if (name == "quadratic3d") return make_quadratic3d();
    throw std::invalid_argument("catalog: unknown test function '" + name + "'");
}

std::vector<std::string> catalog_names() {
    return {"quadratic1d", "cosine1d", "doublewell1d", "quadratic2d", "sinusoid2d",
            "quadratic3d"};
}

ScalarField sample_field(const TestFunction& f, const BoxDomain& domain, const GridSpec& grid) {
    if (f.dim != domain.dim())
        throw std::invalid_argument("sample_field: function/domain dimension mismatch");
    if (domain.dim() != grid.dim())
        throw std::invalid_argument("sample_field: domain/grid dimension mismatch");

    const int d = domain.dim();
    const auto dx = grid.spacing(domain);
    std::vector<double> values(grid.total());
    std::vector<int> idx(d, 0);
    for (std::size_t flat = 0; flat < values.size(); ++flat) {
        Vec3 x{0, 0, 0};
        for (int a = 0; a < d; ++a) x[a] = domain.lo[a] + (idx[a] + 0.5) * dx[a];
        const double v = f.eval(x);
        if (!std::isfinite(v))
            throw std::runtime_error("sample_field: non-finite evaluation");
        values[flat] = v;
        for (int a = d - 1; a >= 0; --a) {
            if (++idx[a] < grid.n[a]) break;
            idx[a] = 0;
        }
    }
    return ScalarField(domain, grid, std::move(values));
}

void save_field_csv(const ScalarField& field, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_field_csv: cannot open " + path);
    out << "# d=" << field.dim() << " lo=";
    char buf[64];
    auto put = [&](double v, bool comma) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        if (comma) out << ',';
        out << buf;
    };
    for (int i = 0; i < field.dim(); ++i) put(field.domain.lo[i], i > 0);
    out << " hi=";
    for (int i = 0; i < field.dim(); ++i) put(field.domain.hi[i], i > 0);
    out << " n=";
    for (int i = 0; i < field.dim(); ++i) {
        if (i > 0) out << ',';
        out << field.grid.n[i];
    }
    out << '\n';
    for (double v : field.values) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        out << buf << '\n';
    }
    if (!out) throw std::runtime_error("save_field_csv: write failed for " + path);
}

namespace {

std::vector<double> parse_double_list(const std::string& s, const char* what) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        std::size_t pos = 0;
        double v;
        try {
            v = std::stod(tok, &pos);
        } catch (const std::exception&) {
            throw std::runtime_error(std::string("load_field_csv: malformed ") + what);
        }
        if (pos != tok.size())
            throw std::runtime_error(std::string("load_field_csv: malformed ") + what);
        out.push_back(v);
    }
    if (out.empty()) throw std::runtime_error(std::string("load_field_csv: malformed ") + what);
    return out;
}

std::string header_item(const std::string& header, const std::string& key) {
    const auto pos = header.find(key + "=");
    if (pos == std::string::npos)
        throw std::runtime_error("load_field_csv: malformed header (missing " + key + ")");
    const auto start = pos + key.size() + 1;
    auto end = header.find(' ', start);
    if (end == std::string::npos) end = header.size();
    return header.substr(start, end - start);
}

}  // namespace

ScalarField load_field_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_field_csv: cannot open " + path);
    std::string header;
    if (!std::getline(in, header) || header.empty() || header[0] != '#')
        throw std::runtime_error("load_field_csv: malformed header");

    const int d = static_cast<int>(std::stol(header_item(header, "d")));
    if (d < 1 || d > kMaxDim) throw std::runtime_error("load_field_csv: bad dimension");
    const auto lo = parse_double_list(header_item(header, "lo"), "lo");
    const auto hi = parse_double_list(header_item(header, "hi"), "hi");
    const auto nd = parse_double_list(header_item(header, "n"), "n");
    if (static_cast<int>(lo.size()) != d || static_cast<int>(hi.size()) != d
        || static_cast<int>(nd.size()) != d)
        throw std::runtime_error("load_field_csv: malformed header (axis count)");
    std::vector<int> n(d);
    for (int i = 0; i < d; ++i) {
        n[i] = static_cast<int>(nd[i]);
        if (n[i] < 1 || nd[i] != n[i])
            throw std::runtime_error("load_field_csv: malformed header (n)");
    }

    BoxDomain domain(lo, hi);
    GridSpec grid(n);
    std::vector<double> values;
    values.reserve(grid.total());
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::size_t pos = 0;
        double v;
        try {
            v = std::stod(line, &pos);
        } catch (const std::exception&) {
            throw std::runtime_error("load_field_csv: malformed value line");
        }
        if (!std::isfinite(v)) throw std::runtime_error("load_field_csv: non-finite entry");
        values.push_back(v);
    }
    if (values.size() != grid.total())
        throw std::runtime_error("load_field_csv: value count does not match n");
    return ScalarField(std::move(domain), std::move(grid), std::move(values));
}

namespace {

int pgm_next_int(std::istream& in) {
    // Skips whitespace and '#' comments per the Netpbm header grammar.
    while (true) {
        const int c = in.peek();
        if (c == EOF) throw std::runtime_error("load_image_pgm: truncated header");
        if (c == '#') {
            std::string comment;
            std::getline(in, comment);
            continue;
        }
        if (std::isspace(c)) {
            in.get();
            continue;
        }
        break;
    }
    int v;
    if (!(in >> v)) throw std::runtime_error("load_image_pgm: truncated header");
    return v;
}

}  // namespace

ScalarField load_image_pgm(const std::string& path, double intensity_scale) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("load_image_pgm: cannot open " + path);
    std::string magic;
    in >> magic;
    if (magic != "P2" && magic != "P5")
        throw std::runtime_error("load_image_pgm: unsupported magic number '" + magic + "'");
    const int width = pgm_next_int(in);
    const int height = pgm_next_int(in);
    const int maxval = pgm_next_int(in);
    if (width < 1 || height < 1 || maxval < 1 || maxval > 65535)
        throw std::runtime_error("load_image_pgm: bad dimensions or maxval");

    std::vector<double> pixels(static_cast<std::size_t>(width) * height);
    if (magic == "P2") {
        for (auto& p : pixels) {
            int v;
            if (!(in >> v)) throw std::runtime_error("load_image_pgm: truncated payload");
            p = v;
        }
    } else {
        in.get();  // single whitespace after maxval
        const int bytes = maxval > 255 ? 2 : 1;
        std::vector<unsigned char> raw(pixels.size() * bytes);
        in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
        if (in.gcount() != static_cast<std::streamsize>(raw.size()))
            throw std::runtime_error("load_image_pgm: truncated payload");
        for (std::size_t i = 0; i < pixels.size(); ++i)
            pixels[i] = bytes == 1 ? raw[i] : raw[2 * i] * 256.0 + raw[2 * i + 1];
    }

    // Field on [0,W]x[0,H] in pixel units; file row 0 maps to smallest x2.
    BoxDomain domain({0.0, 0.0}, {static_cast<double>(width), static_cast<double>(height)});
    GridSpec grid({width, height});
    std::vector<double> values(pixels.size());
    for (int col = 0; col < width; ++col)
        for (int row = 0; row < height; ++row)
            values[static_cast<std::size_t>(col) * height + row] =
                intensity_scale * pixels[static_cast<std::size_t>(row) * width + col];
    return ScalarField(std::move(domain), std::move(grid), std::move(values));
}

}  // namespace gradwave
