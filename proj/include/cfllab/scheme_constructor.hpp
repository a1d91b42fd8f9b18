#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cfllab/errors.hpp"
#include "cfllab/linalg.hpp"
#include "cfllab/polynomial.hpp"
#include "cfllab/scheme_algebra.hpp"

namespace cfllab {

/// Thrown when a scheme synthesis has no admissible branch or an iteration
/// fails to converge on one.
struct ConstructionError : Error {
    using Error::Error;
};

namespace detail {

/// Bivariate polynomial in two elimination symbols (x, y): yc[k] is the
/// coefficient of y^k as a polynomial in x. Supports the small systems that
/// appear when zeroing energy coefficients of a chain.
struct Biv {
    std::vector<RPoly> yc;

    Biv() : yc{RPoly()} {}
    static Biv constant(double v) {
        Biv b;
        b.yc[0] = RPoly::constant(v);
        return b;
    }
    static Biv var_x() {
        Biv b;
        b.yc[0] = RPoly::x();
        return b;
    }
    static Biv var_y() {
        Biv b;
        b.yc = {RPoly(), RPoly::constant(1.0)};
        return b;
    }

    int ydeg() const { return static_cast<int>(yc.size()) - 1; }
    RPoly ycoeff(int k) const {
        return (k >= 0 && k < static_cast<int>(yc.size())) ? yc[static_cast<std::size_t>(k)] : RPoly();
    }
    void trim() {
        while (yc.size() > 1 && yc.back().is_zero()) yc.pop_back();
    }

    friend Biv operator+(const Biv& a, const Biv& b) {
        Biv r;
        r.yc.assign(std::max(a.yc.size(), b.yc.size()), RPoly());
        for (std::size_t k = 0; k < r.yc.size(); ++k)
            r.yc[k] = a.ycoeff(static_cast<int>(k)) + b.ycoeff(static_cast<int>(k));
        r.trim();
        return r;
    }
    friend Biv operator-(const Biv& a, const Biv& b) {
        Biv r;
        r.yc.assign(std::max(a.yc.size(), b.yc.size()), RPoly());
        for (std::size_t k = 0; k < r.yc.size(); ++k)
            r.yc[k] = a.ycoeff(static_cast<int>(k)) - b.ycoeff(static_cast<int>(k));
        r.trim();
        return r;
    }
    friend Biv operator*(const Biv& a, const Biv& b) {
        Biv r;
        r.yc.assign(a.yc.size() + b.yc.size() - 1, RPoly());
        for (std::size_t i = 0; i < a.yc.size(); ++i)
            for (std::size_t j = 0; j < b.yc.size(); ++j) r.yc[i + j] += a.yc[i] * b.yc[j];
        r.trim();
        return r;
    }
    friend Biv operator*(double s, const Biv& a) {
        Biv r = a;
        for (RPoly& p : r.yc) p = s * p;
        r.trim();
        return r;
    }

    double max_abs_coeff() const {
        double m = 0.0;
        for (const RPoly& p : yc)
            for (double v : p.coeffs()) m = std::max(m, std::abs(v));
        return m;
    }
    bool is_identically_zero(double tol = 1e-13) const { return max_abs_coeff() <= tol; }
    std::optional<double> as_constant(double tol = 1e-13) const {
        const double scale = std::max(1.0, max_abs_coeff());
        for (std::size_t k = 0; k < yc.size(); ++k)
            for (std::size_t j = 0; j < yc[k].coeffs().size(); ++j)
                if ((k > 0 || j > 0) && std::abs(yc[k].coeffs()[j]) > tol * scale) return std::nullopt;
        return yc[0].coeff(0);
    }
    double eval(double x, double y) const {
        double acc = 0.0;
        double yp = 1.0;
        for (const RPoly& p : yc) {
            acc += p.eval(x) * yp;
            yp *= y;
        }
        return acc;
    }
};

/// Sylvester resultant in y of two bivariate polynomials; the result is a
/// polynomial in x whose roots are the x-components of common zeros.
inline RPoly resultant_y(const Biv& p, const Biv& q) {
    const int dp = p.ydeg();
    const int dq = q.ydeg();
    if (dp < 1 || dq < 1) throw ContractError("resultant_y: both arguments must depend on y");
    const int n = dp + dq;
    std::vector<RPoly> m(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), RPoly());
    const auto at = [&](int i, int j) -> RPoly& {
        return m[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) + static_cast<std::size_t>(j)];
    };
    for (int r = 0; r < dq; ++r)
        for (int k = 0; k <= dp; ++k) at(r, r + k) = p.ycoeff(dp - k);
    for (int r = 0; r < dp; ++r)
        for (int k = 0; k <= dq; ++k) at(dq + r, r + k) = q.ycoeff(dq - k);

    // Cofactor expansion; the matrices here are at most 4x4.
    const std::function<RPoly(std::vector<int>, std::vector<int>)> det =
        [&](std::vector<int> rows, std::vector<int> cols) -> RPoly {
        if (rows.size() == 1) return at(rows[0], cols[0]);
        RPoly acc;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            std::vector<int> sub_rows;
            for (std::size_t k = 0; k < rows.size(); ++k)
                if (k != i) sub_rows.push_back(rows[k]);
            std::vector<int> sub_cols(cols.begin() + 1, cols.end());
            const RPoly minor = det(sub_rows, sub_cols);
            const RPoly term = at(rows[i], cols[0]) * minor;
            acc = (i % 2 == 0) ? acc + term : acc - term;
        }
        return acc;
    };
    std::vector<int> idx(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) idx[static_cast<std::size_t>(i)] = i;
    return det(idx, idx);
}

struct ChainSolution {
    std::vector<double> betas;
};

/// Enumerates every real solution of the system { S_l = 0 } for the
/// amplification coefficients beta_{P+1}..beta_s, given the fixed prefix
/// beta_0..beta_P. Equations are taken in increasing l; each one either
/// eliminates its frontier coefficient (when the frontier enters with a
/// constant factor) or joins the residual system, which is solved exactly by
/// root enumeration (univariate) or a Sylvester resultant (bivariate).
inline std::vector<ChainSolution> enumerate_chain_solutions(const std::vector<double>& prefix, int s,
                                                            std::vector<int>* imposed_out = nullptr) {
    const int P = static_cast<int>(prefix.size()) - 1;
    if (P < 1 || s < P) throw ContractError("enumerate_chain_solutions: bad prefix");
    std::vector<Biv> beta(static_cast<std::size_t>(s) + 1);
    std::vector<bool> assigned(static_cast<std::size_t>(s) + 1, false);
    for (int j = 0; j <= P; ++j) {
        beta[static_cast<std::size_t>(j)] = Biv::constant(prefix[static_cast<std::size_t>(j)]);
        assigned[static_cast<std::size_t>(j)] = true;
    }
    int n_free = 0;
    std::vector<Biv> leftovers;
    std::vector<int> imposed;

    const auto make_free = [&](int j) {
        if (n_free == 0)
            beta[static_cast<std::size_t>(j)] = Biv::var_x();
        else if (n_free == 1)
            beta[static_cast<std::size_t>(j)] = Biv::var_y();
        else
            throw ContractError("enumerate_chain_solutions: more than two residual unknowns");
        ++n_free;
        assigned[static_cast<std::size_t>(j)] = true;
    };
    const auto all_assigned = [&]() {
        for (int j = P + 1; j <= s; ++j)
            if (!assigned[static_cast<std::size_t>(j)]) return false;
        return true;
    };
    const auto s_ell = [&](int l) {
        Biv acc;
        const int jlo = std::max(0, 2 * l - s);
        const int jhi = std::min(2 * l, s);
        for (int j = jlo; j <= jhi; ++j) {
            const Biv term = beta[static_cast<std::size_t>(j)] * beta[static_cast<std::size_t>(2 * l - j)];
            acc = ((l + j) % 2 == 0) ? acc + term : acc - term;
        }
        return acc;
    };

    for (int l = 1; l <= s - 1; ++l) {
        if (all_assigned() && static_cast<int>(leftovers.size()) == n_free) break;
        const int jlo = std::max(0, 2 * l - s);
        const int h = std::min(2 * l, s);
        for (int j = jlo; j < h; ++j)
            if (!assigned[static_cast<std::size_t>(j)]) make_free(j);

        if (!assigned[static_cast<std::size_t>(h)]) {
            // S_l is linear in the frontier beta_h: S_l = A beta_h + B.
            beta[static_cast<std::size_t>(h)] = Biv::constant(0.0);
            const Biv B = s_ell(l);
            beta[static_cast<std::size_t>(h)] = Biv::constant(1.0);
            const Biv A = s_ell(l) - B;
            if (const std::optional<double> a = A.as_constant(); a && std::abs(*a) > 1e-12) {
                beta[static_cast<std::size_t>(h)] = (-1.0 / *a) * B;
                assigned[static_cast<std::size_t>(h)] = true;
                imposed.push_back(l);
            } else {
                make_free(h);
                leftovers.push_back(s_ell(l));
                imposed.push_back(l);
            }
        } else {
            const Biv e = s_ell(l);
            if (e.is_identically_zero()) {
                imposed.push_back(l); // vanishes for free
            } else if (n_free == 0) {
                throw ConstructionError("chain system: S_" + std::to_string(l) +
                                        " cannot be zeroed with the given stage budget");
            } else {
                leftovers.push_back(e);
                imposed.push_back(l);
            }
        }
    }
    if (!all_assigned() || static_cast<int>(leftovers.size()) != n_free)
        throw ConstructionError("chain system: equations and unknowns do not balance");
    if (imposed_out) *imposed_out = imposed;

    // Residual roots in the free symbols.
    std::vector<std::pair<double, double>> points;
    if (n_free == 0) {
        points.emplace_back(0.0, 0.0);
    } else if (n_free == 1) {
        if (leftovers[0].ydeg() != 0)
            throw ConstructionError("chain system: unexpected second symbol");
        for (double x : real_roots(leftovers[0].ycoeff(0))) points.emplace_back(x, 0.0);
    } else {
        const RPoly res = resultant_y(leftovers[0], leftovers[1]);
        if (res.is_zero()) throw ConstructionError("chain system: degenerate resultant");
        for (double x : real_roots(res)) {
            // Common y-roots at this x.
            std::vector<double> c0;
            for (int k = 0; k <= leftovers[0].ydeg(); ++k) c0.push_back(leftovers[0].ycoeff(k).eval(x));
            const RPoly p0{std::vector<double>(c0)};
            std::vector<double> ys = p0.degree() >= 1 ? real_roots(p0, 1e-7) : std::vector<double>{};
            for (double y : ys) {
                const double q = leftovers[1].eval(x, y);
                double scale = std::max(1.0, leftovers[1].max_abs_coeff());
                scale *= std::max(1.0, std::pow(std::max(std::abs(x), std::abs(y)), leftovers[1].ydeg() + 2));
                if (std::abs(q) <= 1e-6 * scale) points.emplace_back(x, y);
            }
        }
    }

    std::vector<ChainSolution> out;
    for (const auto& [x, y] : points) {
        ChainSolution sol;
        sol.betas.reserve(static_cast<std::size_t>(s) + 1);
        bool ok = true;
        for (int j = 0; j <= s; ++j) {
            const double v = beta[static_cast<std::size_t>(j)].eval(x, y);
            if (!std::isfinite(v)) ok = false;
            sol.betas.push_back(v);
        }
        if (!ok) continue;
        // Polish with a few Newton steps on the imposed equations when the
        // residual system was solved numerically, then verify.
        AmplificationPolynomial g{sol.betas};
        const std::vector<double> S = energy_coefficients(g, s);
        double res = 0.0;
        for (int l : imposed) res = std::max(res, std::abs(S[static_cast<std::size_t>(l)]));
        if (res > 1e-9) continue;
        out.push_back(std::move(sol));
    }

    // Deterministic order, duplicates merged.
    std::sort(out.begin(), out.end(), [](const ChainSolution& a, const ChainSolution& b) {
        return std::lexicographical_compare(a.betas.begin(), a.betas.end(), b.betas.begin(), b.betas.end());
    });
    out.erase(std::unique(out.begin(), out.end(),
                          [](const ChainSolution& a, const ChainSolution& b) {
                              for (std::size_t i = 0; i < a.betas.size(); ++i)
                                  if (std::abs(a.betas[i] - b.betas[i]) > 1e-8) return false;
                              return true;
                          }),
              out.end());
    return out;
}

inline const std::vector<std::vector<double>>& classical_ab_table() {
    static const std::vector<std::vector<double>> table = {
        {1.0},
        {3.0 / 2.0, -1.0 / 2.0},
        {23.0 / 12.0, -16.0 / 12.0, 5.0 / 12.0},
        {55.0 / 24.0, -59.0 / 24.0, 37.0 / 24.0, -9.0 / 24.0},
        {1901.0 / 720.0, -2774.0 / 720.0, 2616.0 / 720.0, -1274.0 / 720.0, 251.0 / 720.0},
    };
    return table;
}

} // namespace detail

/// Classical Adams-Bashforth coefficients of the given order (1..5).
inline std::vector<double> classical_ab_coefficients(int order) {
    if (order < 1 || order > 5) throw ContractError("classical_ab_coefficients: order must be 1..5");
    return detail::classical_ab_table()[static_cast<std::size_t>(order - 1)];
}

/// A synthesized scheme together with its analysis artifacts.
struct ConstructedScheme {
    SchemeSpec scheme;
    std::optional<AmplificationPolynomial> betas; // chain branch
    std::optional<std::vector<double>> tangency;  // AB branch, index k holds T_k
    int order = 0;
    StabilityPrediction prediction;
    std::string branch_choices;
};

/// Moment sums Upsilon_l = sum_k k^l alpha_k for l = 0..max_ell (0^0 = 1).
/// An Adams-Bashforth scheme has order m iff Upsilon_l = (-1)^l/(l+1) for all
/// l < m.
inline std::vector<double> upsilon_sums(const std::vector<double>& ab_alphas, int max_ell) {
    if (ab_alphas.empty()) throw ContractError("upsilon_sums: empty coefficient list");
    if (max_ell < 0) throw ContractError("upsilon_sums: max_ell must be >= 0");
    std::vector<double> out(static_cast<std::size_t>(max_ell) + 1, 0.0);
    for (int l = 0; l <= max_ell; ++l) {
        double acc = 0.0;
        for (std::size_t k = 0; k < ab_alphas.size(); ++k) {
            const double kp = (l == 0) ? 1.0 : std::pow(static_cast<double>(k), l);
            acc += kp * ab_alphas[k];
        }
        out[static_cast<std::size_t>(l)] = acc;
    }
    return out;
}

/// Order of an Adams-Bashforth scheme from its moment sums.
inline int ab_order(const std::vector<double>& ab_alphas, double tol = 1e-10) {
    const int max_ell = static_cast<int>(ab_alphas.size());
    const std::vector<double> u = upsilon_sums(ab_alphas, max_ell);
    int order = 0;
    for (int l = 0; l <= max_ell; ++l) {
        const double target = ((l % 2 == 0) ? 1.0 : -1.0) / static_cast<double>(l + 1);
        if (std::abs(u[static_cast<std::size_t>(l)] - target) > tol) break;
        order = l + 1;
    }
    return order;
}

/// Taylor coefficients T_1..T_max_order of the stability-domain boundary
/// zeta(theta) = (e^{i theta} - 1) / sum_k alpha_k e^{-i k theta},
/// expanded as a truncated-series quotient. Even coefficients are the real
/// parts, odd coefficients the imaginary parts. Index k of the returned
/// vector holds T_k; index 0 is unused.
inline std::vector<double> ab_tangency(const std::vector<double>& ab_alphas, int max_order) {
    if (max_order < 1) throw ContractError("ab_tangency: max_order must be >= 1");
    const std::vector<double> u = upsilon_sums(ab_alphas, 0);
    if (std::abs(u[0] - 1.0) > 1e-10)
        throw ContractError("ab_tangency: Upsilon_0 must equal 1 (scheme of order >= 1)");
    const int T = max_order;
    TruncatedSeries num = exp_i_theta(1.0, T);
    num.coeff(0) -= 1.0;
    TruncatedSeries den(T);
    for (std::size_t k = 0; k < ab_alphas.size(); ++k)
        den += ab_alphas[k] * cdouble(1.0, 0.0) * exp_i_theta(-static_cast<double>(k), T);
    const TruncatedSeries zeta = series_mul(num, series_reciprocal(den));
    std::vector<double> t(static_cast<std::size_t>(max_order) + 1, 0.0);
    for (int k = 1; k <= max_order; ++k)
        t[static_cast<std::size_t>(k)] = (k % 2 == 0) ? zeta.coeff(k).real() : zeta.coeff(k).imag();
    return t;
}

namespace detail {

inline ConstructedScheme finish_chain(std::vector<ChainSolution> candidates, int s,
                                      const std::vector<int>& imposed, const std::string& name) {
    // Chain realizability needs every prefix product nonzero.
    std::vector<ChainSolution> usable;
    for (ChainSolution& c : candidates) {
        bool ok = std::abs(c.betas[static_cast<std::size_t>(s)]) > 1e-13;
        for (int j = 1; j < s && ok; ++j)
            if (std::abs(c.betas[static_cast<std::size_t>(j)]) < 1e-13) ok = false;
        if (ok) usable.push_back(std::move(c));
    }

    std::ostringstream record;
    record.precision(12);
    record << "real branches (beta_" << s << "): [";
    for (std::size_t i = 0; i < usable.size(); ++i)
        record << (i ? ", " : "") << usable[i].betas[static_cast<std::size_t>(s)];
    record << "]";

    const ChainSolution* best = nullptr;
    for (const ChainSolution& c : usable) {
        if (c.betas[static_cast<std::size_t>(s)] <= 0.0) continue;
        if (!best || c.betas[static_cast<std::size_t>(s)] < best->betas[static_cast<std::size_t>(s)] - 1e-12) {
            best = &c;
        } else if (std::abs(c.betas[static_cast<std::size_t>(s)] - best->betas[static_cast<std::size_t>(s)]) <= 1e-12 &&
                   std::lexicographical_compare(c.betas.begin(), c.betas.end(), best->betas.begin(),
                                                best->betas.end())) {
            best = &c; // tie on beta_s: smallest vector wins
        }
    }
    if (!best) throw ConstructionError(name + ": no real branch with positive leading beta");
    record << "; selected minimal positive " << best->betas[static_cast<std::size_t>(s)];

    ConstructedScheme out;
    out.scheme.kind = SchemeKind::rk_chain;
    out.scheme.name = name;
    out.scheme.rk_chain_alphas.resize(static_cast<std::size_t>(s));
    for (int l = 1; l <= s; ++l)
        out.scheme.rk_chain_alphas[static_cast<std::size_t>(l - 1)] =
            best->betas[static_cast<std::size_t>(l)] / best->betas[static_cast<std::size_t>(l - 1)];
    out.betas = AmplificationPolynomial{best->betas};
    out.order = scheme_order(*out.betas);
    out.prediction = classify(*out.betas);
    (void)imposed;
    out.branch_choices = record.str();
    return out;
}

} // namespace detail

/// Chain of m stages with S_1 = ... = S_{m-1} = 0 and the smallest positive
/// beta_m among all real branches: the stability exponent becomes 2m/(2m-1).
inline ConstructedScheme build_rk_chain(int m) {
    if (m < 1 || m > 7) throw ContractError("build_rk_chain: m must be in 1..7");
    std::vector<int> imposed;
    std::vector<detail::ChainSolution> sols = detail::enumerate_chain_solutions({1.0, 1.0}, m, &imposed);
    return detail::finish_chain(std::move(sols), m, imposed, "chain" + std::to_string(m));
}

/// Chain with the Taylor prefix beta_l = 1/l! for l <= p and the remaining
/// coefficients zeroing the longest achievable prefix of the S_l.
inline ConstructedScheme build_taylor_chain(int p, int s) {
    if (p < 1 || s < p) throw ContractError("build_taylor_chain: need 1 <= p <= s");
    if (s > 9) throw ContractError("build_taylor_chain: s too large");
    std::vector<double> prefix(static_cast<std::size_t>(p) + 1, 1.0);
    double fact = 1.0;
    for (int l = 1; l <= p; ++l) {
        fact *= static_cast<double>(l);
        prefix[static_cast<std::size_t>(l)] = 1.0 / fact;
    }
    std::vector<int> imposed;
    std::vector<detail::ChainSolution> sols = detail::enumerate_chain_solutions(prefix, s, &imposed);
    return detail::finish_chain(std::move(sols), s, imposed,
                                "taylor" + std::to_string(p) + "_" + std::to_string(s));
}

/// ab_tangency with the Upsilon_0 = 1 precondition relaxed, for use inside
/// the Newton loop where intermediate iterates drift off the constraint
/// surface.
inline std::vector<double> ab_tangency_guarded(const std::vector<double>& ab_alphas, int max_order) {
    const std::vector<double> u = upsilon_sums(ab_alphas, 0);
    if (std::abs(u[0]) < 1e-6)
        throw ConstructionError("ab_tangency_guarded: near-singular coefficient sum");
    const int T = std::max(1, max_order);
    TruncatedSeries num = exp_i_theta(1.0, T);
    num.coeff(0) -= 1.0;
    TruncatedSeries den(T);
    for (std::size_t k = 0; k < ab_alphas.size(); ++k)
        den += ab_alphas[k] * cdouble(1.0, 0.0) * exp_i_theta(-static_cast<double>(k), T);
    const TruncatedSeries zeta = series_mul(num, series_reciprocal(den));
    std::vector<double> t(static_cast<std::size_t>(max_order) + 1, 0.0);
    for (int k = 1; k <= max_order; ++k)
        t[static_cast<std::size_t>(k)] = (k % 2 == 0) ? zeta.coeff(k).real() : zeta.coeff(k).imag();
    return t;
}

/// Modified Adams-Bashforth scheme on K+1 steps with maximal axis tangency:
/// Upsilon_0 = 1 and T_2 = T_4 = ... = T_{2K} = 0, solved by Newton with a
/// finite-difference Jacobian from the classical order-(K+1) coefficients.
inline ConstructedScheme build_modified_ab(int K) {
    if (K < 1 || K > 4) throw ContractError("build_modified_ab: K must be in 1..4");
    const int n = K + 1;
    std::vector<double> alpha = classical_ab_coefficients(n);

    const auto residual = [&](const std::vector<double>& a) {
        std::vector<double> f(static_cast<std::size_t>(n), 0.0);
        f[0] = upsilon_sums(a, 0)[0] - 1.0;
        const std::vector<double> t = ab_tangency_guarded(a, 2 * K);
        for (int j = 1; j <= K; ++j) f[static_cast<std::size_t>(j)] = t[static_cast<std::size_t>(2 * j)];
        return f;
    };

    int iters = 0;
    double max_res = 0.0;
    for (; iters < 50; ++iters) {
        const std::vector<double> f = residual(alpha);
        max_res = 0.0;
        for (double v : f) max_res = std::max(max_res, std::abs(v));
        if (max_res < 1e-12) break;
        Mat J(n);
        const double h = 1e-7;
        for (int j = 0; j < n; ++j) {
            std::vector<double> ap = alpha;
            ap[static_cast<std::size_t>(j)] += h;
            const std::vector<double> fp = residual(ap);
            for (int i = 0; i < n; ++i) J.at(i, j) = (fp[static_cast<std::size_t>(i)] - f[static_cast<std::size_t>(i)]) / h;
        }
        std::vector<double> neg_f = f;
        for (double& v : neg_f) v = -v;
        const std::vector<double> delta = solve_linear(J, neg_f);
        for (int j = 0; j < n; ++j) alpha[static_cast<std::size_t>(j)] += delta[static_cast<std::size_t>(j)];
    }
    if (max_res >= 1e-12)
        throw ConstructionError("build_modified_ab: Newton did not converge in 50 iterations");

    ConstructedScheme out;
    out.scheme.kind = SchemeKind::adams_bashforth;
    out.scheme.name = "absch" + std::to_string(K + 1);
    out.scheme.ab_alphas = alpha;
    out.tangency = ab_tangency(alpha, 2 * K + 2);
    out.order = ab_order(alpha);
    out.prediction = classify_scheme(out.scheme);
    std::ostringstream record;
    record << "Newton from classical AB" << n << " start, " << iters << " iterations";
    out.branch_choices = record.str();
    return out;
}

} // namespace cfllab
