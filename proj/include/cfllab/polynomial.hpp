#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "cfllab/errors.hpp"

namespace cfllab {

using cdouble = std::complex<double>;

/// Dense univariate polynomial with real coefficients, index = power of the
/// variable. Coefficient vectors are kept trimmed of leading zeros.
class RPoly {
  public:
    RPoly() : c_{0.0} {}
    explicit RPoly(std::vector<double> coeffs) : c_(std::move(coeffs)) {
        if (c_.empty()) c_.push_back(0.0);
        trim();
    }
    static RPoly constant(double v) { return RPoly({v}); }
    static RPoly x() { return RPoly({0.0, 1.0}); }

    int degree() const { return static_cast<int>(c_.size()) - 1; }
    double coeff(int k) const {
        return (k >= 0 && k < static_cast<int>(c_.size())) ? c_[static_cast<std::size_t>(k)] : 0.0;
    }
    const std::vector<double>& coeffs() const { return c_; }
    bool is_zero() const { return c_.size() == 1 && c_[0] == 0.0; }

    friend RPoly operator+(const RPoly& a, const RPoly& b) {
        std::vector<double> c(std::max(a.c_.size(), b.c_.size()), 0.0);
        for (std::size_t k = 0; k < c.size(); ++k) c[k] = a.coeff(static_cast<int>(k)) + b.coeff(static_cast<int>(k));
        return RPoly(std::move(c));
    }
    friend RPoly operator-(const RPoly& a, const RPoly& b) {
        std::vector<double> c(std::max(a.c_.size(), b.c_.size()), 0.0);
        for (std::size_t k = 0; k < c.size(); ++k) c[k] = a.coeff(static_cast<int>(k)) - b.coeff(static_cast<int>(k));
        return RPoly(std::move(c));
    }
    friend RPoly operator*(const RPoly& a, const RPoly& b) {
        if (a.is_zero() || b.is_zero()) return RPoly();
        std::vector<double> c(a.c_.size() + b.c_.size() - 1, 0.0);
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
        return RPoly(std::move(c));
    }
    friend RPoly operator*(double s, const RPoly& a) {
        std::vector<double> c = a.c_;
        for (double& v : c) v *= s;
        return RPoly(std::move(c));
    }
    RPoly& operator+=(const RPoly& b) { return *this = *this + b; }
    RPoly& operator-=(const RPoly& b) { return *this = *this - b; }
    RPoly& operator*=(const RPoly& b) { return *this = *this * b; }

    RPoly derivative() const {
        if (c_.size() == 1) return RPoly();
        std::vector<double> d(c_.size() - 1);
        for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = static_cast<double>(k) * c_[k];
        return RPoly(std::move(d));
    }

    template <class T> T eval(T z) const {
        T acc = T(c_.back());
        for (std::size_t k = c_.size() - 1; k-- > 0;) acc = acc * z + T(c_[k]);
        return acc;
    }

  private:
    void trim() {
        while (c_.size() > 1 && c_.back() == 0.0) c_.pop_back();
    }
    std::vector<double> c_;
};

namespace detail {

inline double poly_scale_at(const std::vector<cdouble>& c, const cdouble& z) {
    double s = 0.0;
    double zp = 1.0;
    const double az = std::abs(z);
    for (const cdouble& ck : c) {
        s += std::abs(ck) * zp;
        zp *= az;
    }
    return s;
}

inline cdouble poly_eval(const std::vector<cdouble>& c, const cdouble& z) {
    cdouble acc = c.back();
    for (std::size_t k = c.size() - 1; k-- > 0;) acc = acc * z + c[k];
    return acc;
}

} // namespace detail

/// All complex roots of a polynomial given by its coefficient list
/// (index = power). Simultaneous Durand-Kerner iteration from a fixed,
/// deterministically phased circle, followed by a Newton polish.
/// Throws ConvergenceError if the residual target is not met in max_sweeps.
inline std::vector<cdouble> all_roots(std::vector<cdouble> coeffs, double residual_tol = 1e-12,
                                      int max_sweeps = 200) {
    double cmax = 0.0;
    for (const cdouble& c : coeffs) cmax = std::max(cmax, std::abs(c));
    if (cmax == 0.0) throw ContractError("all_roots: zero polynomial");
    while (coeffs.size() > 1 && std::abs(coeffs.back()) < 1e-14 * cmax) coeffs.pop_back();
    const int d = static_cast<int>(coeffs.size()) - 1;
    if (d == 0) return {};

    // Monic normalization.
    const cdouble lead = coeffs.back();
    for (cdouble& c : coeffs) c /= lead;

    double radius = 0.0;
    for (int k = 0; k < d; ++k) radius = std::max(radius, std::abs(coeffs[static_cast<std::size_t>(k)]));
    radius = 1.0 + radius;

    std::vector<cdouble> z(static_cast<std::size_t>(d));
    for (int j = 0; j < d; ++j) {
        // Fixed phase offset keeps the start set asymmetric to the real axis.
        const double ang = 2.0 * M_PI * (static_cast<double>(j) + 0.25) / d + 0.4;
        z[static_cast<std::size_t>(j)] = radius * cdouble(std::cos(ang), std::sin(ang));
    }

    bool converged = false;
    for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
        double max_step = 0.0;
        for (int j = 0; j < d; ++j) {
            cdouble denom(1.0, 0.0);
            for (int k = 0; k < d; ++k) {
                if (k == j) continue;
                denom *= (z[static_cast<std::size_t>(j)] - z[static_cast<std::size_t>(k)]);
            }
            if (std::abs(denom) < 1e-290) {
                z[static_cast<std::size_t>(j)] += cdouble(1e-8 * radius, 1e-8 * radius);
                max_step = 1.0;
                continue;
            }
            const cdouble step = detail::poly_eval(coeffs, z[static_cast<std::size_t>(j)]) / denom;
            z[static_cast<std::size_t>(j)] -= step;
            max_step = std::max(max_step, std::abs(step) / (1.0 + std::abs(z[static_cast<std::size_t>(j)])));
        }
        if (max_step < 1e-15) {
            converged = true;
        } else if (sweep + 1 == max_sweeps || max_step < 1e-13) {
            converged = true;
            for (int j = 0; j < d; ++j) {
                const cdouble zj = z[static_cast<std::size_t>(j)];
                if (std::abs(detail::poly_eval(coeffs, zj)) >
                    residual_tol * std::max(1.0, detail::poly_scale_at(coeffs, zj))) {
                    converged = false;
                    break;
                }
            }
            if (!converged && sweep + 1 == max_sweeps)
                throw ConvergenceError("all_roots: Durand-Kerner did not converge");
        }
    }

    // Newton polish; harmless near multiple roots (step is skipped when the
    // derivative underflows).
    std::vector<cdouble> dcoef(static_cast<std::size_t>(d));
    for (int k = 1; k <= d; ++k)
        dcoef[static_cast<std::size_t>(k - 1)] = static_cast<double>(k) * coeffs[static_cast<std::size_t>(k)];
    for (cdouble& r : z) {
        for (int it = 0; it < 2; ++it) {
            const cdouble dp = detail::poly_eval(dcoef, r);
            if (std::abs(dp) < 1e-200) break;
            r -= detail::poly_eval(coeffs, r) / dp;
        }
    }
    return z;
}

/// Real roots of a real-coefficient polynomial, deduplicated and sorted.
inline std::vector<double> real_roots(const RPoly& p, double imag_tol = 1e-9) {
    if (p.degree() == 0) return {};
    std::vector<cdouble> c(p.coeffs().begin(), p.coeffs().end());
    std::vector<double> out;
    for (const cdouble& r : all_roots(std::move(c))) {
        if (std::abs(r.imag()) <= imag_tol * (1.0 + std::abs(r.real()))) out.push_back(r.real());
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace cfllab
