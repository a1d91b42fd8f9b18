#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "cfllab/errors.hpp"
#include "cfllab/rational.hpp"
#include "cfllab/scheme.hpp"
#include "cfllab/truncated_series.hpp"

namespace cfllab {

/// Coefficients beta_0..beta_s of the amplification factor
/// g(zeta) = sum_l beta_l zeta^l, the per-step multiplier of a linear mode.
struct AmplificationPolynomial {
    std::vector<double> betas;

    int max_power() const { return static_cast<int>(betas.size()) - 1; }
    double beta(int l) const {
        return (l >= 0 && l < static_cast<int>(betas.size())) ? betas[static_cast<std::size_t>(l)] : 0.0;
    }
    bool consistent(double tol = 1e-12) const {
        return betas.size() >= 2 && std::abs(betas[0] - 1.0) <= tol && std::abs(betas[1] - 1.0) <= tol;
    }
};

enum class Regime { neutral, shrinking_cfl, linear_cfl };

inline const char* to_string(Regime r) {
    switch (r) {
        case Regime::neutral: return "neutral";
        case Regime::shrinking_cfl: return "shrinking_cfl";
        case Regime::linear_cfl: return "linear_cfl";
    }
    return "?";
}

/// Outcome of the energy-coefficient analysis. For the shrinking regime the
/// stability condition reads dt <= constant_factor * (dx/a)^exponent with
/// exponent = 2r/(2r-1) and constant_factor = (2C/S_r)^(1/(2r-1)).
struct StabilityPrediction {
    std::vector<double> energy_coeffs;
    std::optional<int> r;
    Regime regime = Regime::neutral;
    std::optional<Rational> exponent;
    std::optional<double> constant_factor;
};

/// Amplification polynomial of a one-step scheme. For a chain the closed form
/// is beta_m = a_1 a_2 ... a_m; for a tableau the stages are propagated with F
/// replaced by scalar multiplication by zeta.
inline AmplificationPolynomial amplification(const SchemeSpec& s) {
    s.validate();
    AmplificationPolynomial g;
    switch (s.kind) {
        case SchemeKind::rk_chain: {
            g.betas.assign(s.rk_chain_alphas.size() + 1, 0.0);
            g.betas[0] = 1.0;
            double prod = 1.0;
            for (std::size_t m = 0; m < s.rk_chain_alphas.size(); ++m) {
                prod *= s.rk_chain_alphas[m];
                g.betas[m + 1] = prod;
            }
            break;
        }
        case SchemeKind::explicit_tableau: {
            const std::size_t stages = s.tableau_a.size();
            // stage_g[i] = polynomial multiplier of stage i, stage 0 is u_n.
            std::vector<std::vector<double>> stage_g(stages + 1);
            stage_g[0] = {1.0};
            for (std::size_t l = 1; l <= stages; ++l) {
                std::vector<double> acc(l + 1, 0.0);
                for (std::size_t i = 0; i < l; ++i) {
                    const double a = s.tableau_a[l - 1][i];
                    const double b = s.tableau_b[l - 1][i];
                    for (std::size_t k = 0; k < stage_g[i].size(); ++k) {
                        acc[k] += a * stage_g[i][k];
                        acc[k + 1] += b * stage_g[i][k];
                    }
                }
                while (acc.size() > 1 && acc.back() == 0.0) acc.pop_back();
                stage_g[l] = std::move(acc);
            }
            g.betas = stage_g[stages];
            break;
        }
        case SchemeKind::adams_bashforth:
            throw ContractError(
                "amplification: adams_bashforth multiplier is a matrix; use ab_dominant_multiplier");
    }
    return g;
}

/// Energy coefficients S_l = sum_j (-1)^{l+j} beta_j beta_{2l-j} for
/// l = 0..max_ell, with beta_j = 0 beyond the stored range. These are the
/// coefficients of |g(-i a xi dt)|^2 in powers of (a xi dt)^2.
inline std::vector<double> energy_coefficients(const AmplificationPolynomial& g, int max_ell = -1) {
    if (g.betas.empty()) throw ContractError("energy_coefficients: empty amplification polynomial");
    const int s = g.max_power();
    if (max_ell < 0) max_ell = s;
    std::vector<double> out(static_cast<std::size_t>(max_ell) + 1, 0.0);
    for (int l = 0; l <= max_ell; ++l) {
        double acc = 0.0;
        const int jlo = std::max(0, 2 * l - s);
        const int jhi = std::min(2 * l, s);
        for (int j = jlo; j <= jhi; ++j) {
            const double sign = ((l + j) % 2 == 0) ? 1.0 : -1.0;
            acc += sign * g.beta(j) * g.beta(2 * l - j);
        }
        out[static_cast<std::size_t>(l)] = acc;
    }
    return out;
}

/// Regime classification from the first nonzero energy coefficient.
/// C is the allowed exponential error-growth rate in rho <= 1 + C dt.
/// max_r limits the search when the betas come from a truncated series
/// (coefficients S_l beyond half the truncation order are not trustworthy).
inline StabilityPrediction classify(const AmplificationPolynomial& g, double C = 1.0,
                                    double zero_tol = 1e-12, int max_r = -1) {
    if (C <= 0.0) throw ContractError("classify: C must be positive");
    if (!g.consistent()) throw ContractError("classify: inconsistent betas (beta_0 = beta_1 = 1 required)");
    StabilityPrediction p;
    const int search_max = max_r < 0 ? g.max_power() : std::min(max_r, g.max_power());
    p.energy_coeffs = energy_coefficients(g, search_max);
    for (int l = 1; l <= search_max; ++l) {
        if (std::abs(p.energy_coeffs[static_cast<std::size_t>(l)]) > zero_tol) {
            p.r = l;
            break;
        }
    }
    if (!p.r) {
        p.regime = Regime::neutral;
        return p;
    }
    const double sr = p.energy_coeffs[static_cast<std::size_t>(*p.r)];
    if (sr > 0.0) {
        p.regime = Regime::shrinking_cfl;
        p.exponent = Rational(2 * *p.r, 2 * *p.r - 1);
        p.constant_factor = std::pow(2.0 * C / sr, 1.0 / (2.0 * *p.r - 1.0));
    } else {
        p.regime = Regime::linear_cfl;
    }
    return p;
}

/// Largest m with beta_l = 1/l! for all l <= m. A full order statement only
/// for linear problems or order <= 2; certificates carry that caveat.
inline int scheme_order(const AmplificationPolynomial& g, double tol = 1e-12) {
    if (!g.consistent(tol)) throw ContractError("scheme_order: inconsistent betas");
    int order = 0;
    double factorial = 1.0;
    for (int l = 1;; ++l) {
        factorial *= static_cast<double>(l);
        if (std::abs(g.beta(l) - 1.0 / factorial) > tol) break;
        order = l;
        if (l > g.max_power()) break;
    }
    return order;
}

/// Series expansion in zeta of the dominant multiplier of an Adams-Bashforth
/// scheme: the root X(zeta) of X^{K+1} - X^K - sum_k alpha_k zeta X^{K-k}
/// with X(0) = 1.
inline TruncatedSeries ab_dominant_multiplier(const SchemeSpec& s, int T = 16) {
    if (s.kind != SchemeKind::adams_bashforth)
        throw ContractError("ab_dominant_multiplier: scheme is not adams_bashforth");
    s.validate();
    const int K = static_cast<int>(s.ab_alphas.size()) - 1;
    std::vector<TruncatedSeries> cs(static_cast<std::size_t>(K) + 2, TruncatedSeries(T));
    cs[static_cast<std::size_t>(K) + 1].coeff(0) = 1.0;
    cs[static_cast<std::size_t>(K)].coeff(0) = -1.0;
    for (int k = 0; k <= K; ++k) cs[static_cast<std::size_t>(K - k)].coeff(1) -= s.ab_alphas[static_cast<std::size_t>(k)];
    return series_root_newton(cs, cdouble(1.0, 0.0), T);
}

/// Classification entry point for any scheme kind. RK kinds go through the
/// amplification polynomial; Adams-Bashforth through the dominant-multiplier
/// series, whose real coefficients feed the same S_l quadratic form.
inline StabilityPrediction classify_scheme(const SchemeSpec& s, double C = 1.0, int series_T = 16) {
    if (s.kind != SchemeKind::adams_bashforth) return classify(amplification(s), C);
    const TruncatedSeries y = ab_dominant_multiplier(s, series_T);
    AmplificationPolynomial g;
    g.betas.reserve(y.coeffs().size());
    for (const cdouble& c : y.coeffs()) {
        if (std::abs(c.imag()) > 1e-10)
            throw ConvergenceError("classify_scheme: dominant multiplier has non-real coefficients");
        g.betas.push_back(c.real());
    }
    return classify(g, C, 1e-12, series_T / 2);
}

} // namespace cfllab
