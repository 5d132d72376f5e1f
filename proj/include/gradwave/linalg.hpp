// Small fixed-dimension linear algebra for d <= 3: determinants, linear
// solves and symmetric eigendecomposition, plus compensated summation.
#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace gradwave {

inline constexpr int kMaxDim = 3;

using Vec3 = std::array<double, 3>;
using Mat3 = std::array<std::array<double, 3>, 3>;

inline Vec3 to_vec3(const std::vector<double>& v) {
    Vec3 out{0.0, 0.0, 0.0};
    for (std::size_t i = 0; i < v.size() && i < 3; ++i) out[i] = v[i];
    return out;
}

inline std::vector<double> to_vector(const Vec3& v, int dim) {
    return std::vector<double>(v.begin(), v.begin() + dim);
}

inline double dot(int dim, const Vec3& a, const Vec3& b) {
    double s = 0.0;
    for (int i = 0; i < dim; ++i) s += a[i] * b[i];
    return s;
}

inline double inf_norm(int dim, const Vec3& a) {
    double m = 0.0;
    for (int i = 0; i < dim; ++i) m = std::max(m, std::abs(a[i]));
    return m;
}

inline double det(const Mat3& m, int dim) {
    switch (dim) {
        case 1:
            return m[0][0];
        case 2:
            return m[0][0] * m[1][1] - m[0][1] * m[1][0];
        case 3:
            return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
                 - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                 + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
        default:
            throw std::invalid_argument("det: dimension must be 1, 2 or 3");
    }
}

// Gaussian elimination with partial pivoting. Returns false when a pivot
// underflows rel_pivot_tol times the matrix scale (treated as singular).
inline bool solve(Mat3 a, Vec3 b, int dim, Vec3& out,
                  double rel_pivot_tol = 1e-14) {
    double scale = 0.0;
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) scale = std::max(scale, std::abs(a[i][j]));
    if (scale == 0.0) return false;
    const double tiny = rel_pivot_tol * scale;

    std::array<int, 3> perm{0, 1, 2};
    for (int col = 0; col < dim; ++col) {
        int pivot = col;
        for (int r = col + 1; r < dim; ++r)
            if (std::abs(a[perm[r]][col]) > std::abs(a[perm[pivot]][col])) pivot = r;
        std::swap(perm[col], perm[pivot]);
        const double p = a[perm[col]][col];
        if (std::abs(p) <= tiny) return false;
        for (int r = col + 1; r < dim; ++r) {
            const double f = a[perm[r]][col] / p;
            a[perm[r]][col] = 0.0;
            for (int c = col + 1; c < dim; ++c) a[perm[r]][c] -= f * a[perm[col]][c];
            b[perm[r]] -= f * b[perm[col]];
        }
    }
    for (int row = dim - 1; row >= 0; --row) {
        double s = b[perm[row]];
        for (int c = row + 1; c < dim; ++c) s -= a[perm[row]][c] * out[c];
        out[row] = s / a[perm[row]][row];
    }
    return true;
}

// Cyclic Jacobi sweeps; input must be symmetric. Eigenvalues land in eigs[0..dim).
inline void symmetric_eigenvalues(Mat3 a, int dim, Vec3& eigs) {
    if (dim == 1) {
        eigs[0] = a[0][0];
        return;
    }
    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < dim; ++p)
            for (int q = p + 1; q < dim; ++q) off += a[p][q] * a[p][q];
        double diag = 0.0;
        for (int p = 0; p < dim; ++p) diag = std::max(diag, std::abs(a[p][p]));
        if (off <= 1e-30 * std::max(1.0, diag * diag)) break;
        for (int p = 0; p < dim; ++p) {
            for (int q = p + 1; q < dim; ++q) {
                if (a[p][q] == 0.0) continue;
                const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                const double t = (theta >= 0 ? 1.0 : -1.0)
                               / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (int k = 0; k < dim; ++k) {
                    const double akp = a[k][p], akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for (int k = 0; k < dim; ++k) {
                    const double apk = a[p][k], aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    for (int i = 0; i < dim; ++i) eigs[i] = a[i][i];
}

struct KahanSum {
    double sum = 0.0;
    double carry = 0.0;
    void add(double x) {
        const double y = x - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    double value() const { return sum; }
};

}  // namespace gradwave
