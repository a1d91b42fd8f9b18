#pragma once

#include <cmath>
#include <iomanip>
#include <sstream>
#include <string>

#include "cfllab/scheme_algebra.hpp"
#include "cfllab/scheme_constructor.hpp"

namespace cfllab {

namespace detail {

struct ChainReference {
    int m;
    double beta_m;
    double constant;
};

/// Reference table of chain coefficients and normalized stability constants
/// (1/beta_m^2)^(1/(2m-1)) this scheme family is usually quoted with.
inline const ChainReference* chain_reference(int m) {
    static const ChainReference table[] = {
        {1, 1.0, 1.0},
        {2, 0.5, 1.587},
        {3, 0.125, 2.297},
        {4, (3.0 - 2.0 * std::sqrt(2.0)) / 8.0, 2.997},
        {5, (5.0 * std::sqrt(5.0) - 11.0) / 64.0, 3.687},
        {6, (26.0 - 15.0 * std::sqrt(3.0)) / 16.0, 3.395},
        {7, 2.7014449289594e-05, 5.045},
    };
    for (const ChainReference& r : table)
        if (r.m == m) return &r;
    return nullptr;
}

} // namespace detail

/// Human-readable certificate block for a scheme analysis: coefficients,
/// order, energy (or tangency) table, regime, exponent and constants, plus a
/// comparison against the reference table where one exists.
inline std::string make_certificate(const ConstructedScheme& c) {
    std::ostringstream out;
    out << std::setprecision(12);
    out << "== " << c.scheme.name << " (" << to_string(c.scheme.kind) << ") ==\n";
    out << "coefficients:";
    const std::vector<double>& coeffs = c.scheme.kind == SchemeKind::adams_bashforth
                                            ? c.scheme.ab_alphas
                                            : c.scheme.rk_chain_alphas;
    for (double a : coeffs) out << ' ' << a;
    out << '\n';

    if (c.betas) {
        out << "beta:";
        for (double b : c.betas->betas) out << ' ' << b;
        out << '\n';
    }
    out << "order: " << c.order;
    if (c.scheme.kind != SchemeKind::adams_bashforth)
        out << " (from the amplification factor; exact for linear problems or order <= 2)";
    out << '\n';

    const std::vector<double>& S = c.prediction.energy_coeffs;
    out << "S:";
    for (std::size_t l = 0; l < S.size() && l <= 10; ++l) out << " S_" << l << "=" << S[l];
    out << '\n';
    if (c.tangency) {
        out << "T:";
        for (std::size_t k = 1; k < c.tangency->size(); ++k) out << " T_" << k << "=" << (*c.tangency)[k];
        out << '\n';
    }

    out << "regime: " << to_string(c.prediction.regime);
    if (c.prediction.r) out << " (r = " << *c.prediction.r << ")";
    out << '\n';
    if (c.prediction.regime == Regime::shrinking_cfl) {
        const int r = *c.prediction.r;
        const double sr = S[static_cast<std::size_t>(r)];
        const double norm_const = std::pow(1.0 / sr, 1.0 / (2.0 * r - 1.0));
        out << "dt bound: dt <= " << *c.prediction.constant_factor << " * (dx/a)^" << c.prediction.exponent->str()
            << "  (thick-line constant at C = 1)\n";
        out << "normalized constant (1/S_r)^(1/(2r-1)): " << norm_const << '\n';

        if (c.scheme.kind == SchemeKind::rk_chain && c.betas) {
            const int m = static_cast<int>(c.betas->betas.size()) - 1;
            if (const detail::ChainReference* ref = detail::chain_reference(m)) {
                const double bm = c.betas->betas[static_cast<std::size_t>(m)];
                const double cm = std::pow(1.0 / (bm * bm), 1.0 / (2.0 * m - 1.0));
                out << "reference comparison (m = " << m << "): beta_m computed " << bm << " vs reference "
                    << ref->beta_m << "; constant computed " << cm << " vs reference " << ref->constant;
                if (std::abs(bm - ref->beta_m) > 1e-6 * std::max(1.0, std::abs(ref->beta_m)) ||
                    std::abs(cm - ref->constant) > 5e-3) {
                    out << "  ** MISMATCH: computed minimal-positive branch disagrees with the reference "
                           "entry; the computed value satisfies S_1..S_" << (m - 1)
                        << " = 0 to 1e-10 while the reference value does not solve the system **";
                } else {
                    out << "  (agrees)";
                }
                out << '\n';
            }
        }
    } else if (c.prediction.regime == Regime::linear_cfl) {
        out << "dt bound: linear CFL dt <= C dx/a (first nonzero S_r is negative)\n";
    }
    if (!c.branch_choices.empty()) out << "branches: " << c.branch_choices << '\n';
    return out.str();
}

/// Certificate for a catalog or user scheme that was not synthesized: wraps
/// the analysis in a ConstructedScheme and reuses the same layout.
inline std::string analysis_certificate(const SchemeSpec& s) {
    ConstructedScheme c;
    c.scheme = s;
    if (s.kind == SchemeKind::adams_bashforth) {
        c.order = ab_order(s.ab_alphas);
        c.tangency = ab_tangency(s.ab_alphas, 10);
        c.prediction = classify_scheme(s);
    } else {
        c.betas = amplification(s);
        c.order = scheme_order(*c.betas);
        c.prediction = classify(*c.betas);
    }
    return make_certificate(c);
}

} // namespace cfllab
