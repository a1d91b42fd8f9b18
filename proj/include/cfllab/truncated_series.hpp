#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "cfllab/errors.hpp"
#include "cfllab/polynomial.hpp"

namespace cfllab {

/// Power series in one formal variable, truncated at a fixed order T.
/// coeffs()[k] multiplies theta^k; the vector always has exactly T+1 entries
/// and no operation ever reads or writes beyond index T.
class TruncatedSeries {
  public:
    explicit TruncatedSeries(int truncation_order)
        : c_(static_cast<std::size_t>(check_order(truncation_order)) + 1, cdouble(0.0, 0.0)) {}

    TruncatedSeries(std::vector<cdouble> coeffs, int truncation_order)
        : TruncatedSeries(truncation_order) {
        const std::size_t m = std::min(coeffs.size(), c_.size());
        for (std::size_t k = 0; k < m; ++k) c_[k] = coeffs[k];
    }

    static TruncatedSeries constant(cdouble value, int truncation_order) {
        TruncatedSeries s(truncation_order);
        s.c_[0] = value;
        return s;
    }

    int truncation_order() const { return static_cast<int>(c_.size()) - 1; }
    const std::vector<cdouble>& coeffs() const { return c_; }
    cdouble coeff(int k) const { return c_[static_cast<std::size_t>(k)]; }
    cdouble& coeff(int k) { return c_[static_cast<std::size_t>(k)]; }

    TruncatedSeries& operator+=(const TruncatedSeries& b) {
        require_same_order(b);
        for (std::size_t k = 0; k < c_.size(); ++k) c_[k] += b.c_[k];
        return *this;
    }
    TruncatedSeries& operator-=(const TruncatedSeries& b) {
        require_same_order(b);
        for (std::size_t k = 0; k < c_.size(); ++k) c_[k] -= b.c_[k];
        return *this;
    }
    friend TruncatedSeries operator+(TruncatedSeries a, const TruncatedSeries& b) { return a += b; }
    friend TruncatedSeries operator-(TruncatedSeries a, const TruncatedSeries& b) { return a -= b; }
    friend TruncatedSeries operator*(cdouble s, const TruncatedSeries& a) {
        TruncatedSeries r = a;
        for (cdouble& v : r.c_) v *= s;
        return r;
    }

    double max_abs_coeff() const {
        double m = 0.0;
        for (const cdouble& v : c_) m = std::max(m, std::abs(v));
        return m;
    }

    void require_same_order(const TruncatedSeries& b) const {
        if (c_.size() != b.c_.size())
            throw ContractError("TruncatedSeries: mismatched truncation orders");
    }

  private:
    static int check_order(int T) {
        if (T < 0) throw ContractError("TruncatedSeries: truncation order must be >= 0");
        return T;
    }
    std::vector<cdouble> c_;
};

/// Cauchy product truncated at the shared order.
inline TruncatedSeries series_mul(const TruncatedSeries& a, const TruncatedSeries& b) {
    a.require_same_order(b);
    const int T = a.truncation_order();
    TruncatedSeries r(T);
    for (int k = 0; k <= T; ++k) {
        cdouble s(0.0, 0.0);
        for (int j = 0; j <= k; ++j) s += a.coeff(j) * b.coeff(k - j);
        r.coeff(k) = s;
    }
    return r;
}

/// Multiplicative inverse: series_mul(a, r) = 1 + O(theta^{T+1}).
/// Requires a nonzero constant term.
inline TruncatedSeries series_reciprocal(const TruncatedSeries& a) {
    const int T = a.truncation_order();
    if (std::abs(a.coeff(0)) <= 1e-300)
        throw SingularError("series_reciprocal: zero constant term");
    const cdouble inv0 = 1.0 / a.coeff(0);
    TruncatedSeries r(T);
    r.coeff(0) = inv0;
    for (int k = 1; k <= T; ++k) {
        cdouble s(0.0, 0.0);
        for (int j = 1; j <= k; ++j) s += a.coeff(j) * r.coeff(k - j);
        r.coeff(k) = -inv0 * s;
    }
    return r;
}

/// Series of exp(i * scale * theta): coefficients (i*scale)^k / k!.
inline TruncatedSeries exp_i_theta(double scale, int T) {
    TruncatedSeries r(T);
    cdouble term(1.0, 0.0);
    r.coeff(0) = term;
    for (int k = 1; k <= T; ++k) {
        term *= cdouble(0.0, scale) / static_cast<double>(k);
        r.coeff(k) = term;
    }
    return r;
}

/// Series solution Y of P(Y) = 0 with Y(0) = y0, where P(Y) = sum_k c_k * Y^k
/// and the c_k are themselves truncated series. y0 must be a simple root of
/// the order-zero polynomial. Newton on series doubles the correct order at
/// each step, so ceil(log2(T+1)) + 2 iterations suffice.
inline TruncatedSeries series_root_newton(const std::vector<TruncatedSeries>& poly_coeffs,
                                          cdouble y0, int T) {
    if (poly_coeffs.size() < 2) throw ContractError("series_root_newton: need degree >= 1");
    std::vector<TruncatedSeries> cs;
    cs.reserve(poly_coeffs.size());
    for (const TruncatedSeries& c : poly_coeffs) cs.emplace_back(c.coeffs(), T);

    // Derivative of the order-zero polynomial at y0 decides simplicity.
    cdouble dp0(0.0, 0.0);
    for (std::size_t k = 1; k < cs.size(); ++k) {
        cdouble ypow(1.0, 0.0);
        for (std::size_t j = 1; j < k; ++j) ypow *= y0;
        dp0 += static_cast<double>(k) * cs[k].coeff(0) * ypow;
    }
    if (std::abs(dp0) <= 1e-10)
        throw SingularError("series_root_newton: root is not simple at order zero");

    const auto eval_p = [&](const TruncatedSeries& y) {
        TruncatedSeries acc = cs.back();
        for (std::size_t k = cs.size() - 1; k-- > 0;) acc = series_mul(acc, y) + cs[k];
        return acc;
    };
    const auto eval_dp = [&](const TruncatedSeries& y) {
        TruncatedSeries acc = static_cast<double>(cs.size() - 1) * cdouble(1.0, 0.0) * cs.back();
        for (std::size_t k = cs.size() - 1; k-- > 1;)
            acc = series_mul(acc, y) + static_cast<double>(k) * cdouble(1.0, 0.0) * cs[k];
        return acc;
    };

    TruncatedSeries y = TruncatedSeries::constant(y0, T);
    const int iters = static_cast<int>(std::ceil(std::log2(static_cast<double>(T) + 1.0))) + 2;
    for (int it = 0; it < iters; ++it) {
        y -= series_mul(eval_p(y), series_reciprocal(eval_dp(y)));
    }

    const TruncatedSeries residual = eval_p(y);
    double scale = 0.0;
    for (const TruncatedSeries& c : cs) scale = std::max(scale, c.max_abs_coeff());
    scale = std::max(scale, 1.0);
    if (residual.max_abs_coeff() > 1e-11 * scale)
        throw ConvergenceError("series_root_newton: residual above tolerance");
    return y;
}

} // namespace cfllab
