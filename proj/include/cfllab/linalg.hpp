#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "cfllab/errors.hpp"

namespace cfllab {

/// Dense square matrix of doubles, row-major. Sized for the small systems in
/// this library (multistep companions, transport systems, Newton Jacobians).
struct Mat {
    int n = 0;
    std::vector<double> a;

    Mat() = default;
    explicit Mat(int dim) : n(dim), a(static_cast<std::size_t>(dim) * static_cast<std::size_t>(dim), 0.0) {}
    Mat(int dim, std::vector<double> values) : n(dim), a(std::move(values)) {
        if (a.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(n))
            throw ContractError("Mat: element count does not match dimension");
    }

    double& at(int i, int j) { return a[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) + static_cast<std::size_t>(j)]; }
    double at(int i, int j) const { return a[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) + static_cast<std::size_t>(j)]; }

    static Mat identity(int dim) {
        Mat m(dim);
        for (int i = 0; i < dim; ++i) m.at(i, i) = 1.0;
        return m;
    }

    double trace() const {
        double t = 0.0;
        for (int i = 0; i < n; ++i) t += at(i, i);
        return t;
    }

    double max_abs() const {
        double m = 0.0;
        for (double v : a) m = std::max(m, std::abs(v));
        return m;
    }

    friend Mat operator*(const Mat& x, const Mat& y) {
        if (x.n != y.n) throw ContractError("Mat: dimension mismatch");
        Mat r(x.n);
        for (int i = 0; i < x.n; ++i)
            for (int k = 0; k < x.n; ++k) {
                const double xik = x.at(i, k);
                if (xik == 0.0) continue;
                for (int j = 0; j < x.n; ++j) r.at(i, j) += xik * y.at(k, j);
            }
        return r;
    }
    friend Mat operator+(const Mat& x, const Mat& y) {
        if (x.n != y.n) throw ContractError("Mat: dimension mismatch");
        Mat r = x;
        for (std::size_t i = 0; i < r.a.size(); ++i) r.a[i] += y.a[i];
        return r;
    }
    friend Mat operator*(double s, const Mat& x) {
        Mat r = x;
        for (double& v : r.a) v *= s;
        return r;
    }
};

/// Solves A x = b by Gaussian elimination with partial pivoting.
inline std::vector<double> solve_linear(Mat A, std::vector<double> b) {
    const int n = A.n;
    if (static_cast<int>(b.size()) != n) throw ContractError("solve_linear: size mismatch");
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(A.at(r, col)) > std::abs(A.at(piv, col))) piv = r;
        if (std::abs(A.at(piv, col)) < 1e-300) throw SingularError("solve_linear: singular matrix");
        if (piv != col) {
            for (int j = 0; j < n; ++j) std::swap(A.at(piv, j), A.at(col, j));
            std::swap(b[static_cast<std::size_t>(piv)], b[static_cast<std::size_t>(col)]);
        }
        for (int r = col + 1; r < n; ++r) {
            const double f = A.at(r, col) / A.at(col, col);
            if (f == 0.0) continue;
            for (int j = col; j < n; ++j) A.at(r, j) -= f * A.at(col, j);
            b[static_cast<std::size_t>(r)] -= f * b[static_cast<std::size_t>(col)];
        }
    }
    std::vector<double> x(static_cast<std::size_t>(n), 0.0);
    for (int r = n - 1; r >= 0; --r) {
        double s = b[static_cast<std::size_t>(r)];
        for (int j = r + 1; j < n; ++j) s -= A.at(r, j) * x[static_cast<std::size_t>(j)];
        x[static_cast<std::size_t>(r)] = s / A.at(r, r);
    }
    return x;
}

/// Numerical rank by row echelon reduction with the given absolute tolerance.
inline int rank(Mat A, double tol) {
    const int n = A.n;
    int r = 0;
    for (int col = 0; col < n && r < n; ++col) {
        int piv = r;
        for (int i = r + 1; i < n; ++i)
            if (std::abs(A.at(i, col)) > std::abs(A.at(piv, col))) piv = i;
        if (std::abs(A.at(piv, col)) <= tol) continue;
        if (piv != r)
            for (int j = 0; j < n; ++j) std::swap(A.at(piv, j), A.at(r, j));
        for (int i = r + 1; i < n; ++i) {
            const double f = A.at(i, col) / A.at(r, col);
            for (int j = col; j < n; ++j) A.at(i, j) -= f * A.at(r, j);
        }
        ++r;
    }
    return r;
}

/// Characteristic polynomial det(X I - A) by the Faddeev-LeVerrier recurrence.
/// Returns monic coefficients indexed by power of X. Adequate for the small
/// well-scaled matrices used here.
inline std::vector<double> char_poly(const Mat& A) {
    const int n = A.n;
    std::vector<double> c(static_cast<std::size_t>(n) + 1, 0.0);
    c[static_cast<std::size_t>(n)] = 1.0;
    Mat M = Mat::identity(n);
    for (int k = 1; k <= n; ++k) {
        M = A * M;
        const double ck = -M.trace() / static_cast<double>(k);
        c[static_cast<std::size_t>(n - k)] = ck;
        for (int i = 0; i < n; ++i) M.at(i, i) += ck;
    }
    return c;
}

} // namespace cfllab
