#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cfllab/errors.hpp"
#include "cfllab/linalg.hpp"
#include "cfllab/polynomial.hpp"
#include "cfllab/rational.hpp"

namespace cfllab {

/// Finite-difference differentiation stencil at unit grid spacing:
/// u'(x) ~ sum_j weights[j] u(x + offsets[j] dx) / dx.
struct Stencil {
    std::vector<int> offsets;
    std::vector<double> weights;
    std::string label;

    void validate() const {
        if (offsets.empty() || offsets.size() != weights.size())
            throw ContractError("Stencil: offsets/weights size mismatch");
        double sum = 0.0, moment = 0.0;
        for (std::size_t i = 0; i < offsets.size(); ++i) {
            sum += weights[i];
            moment += offsets[i] * weights[i];
        }
        if (std::abs(sum) > 1e-12) throw ContractError("Stencil: weights must sum to zero");
        if (std::abs(moment - 1.0) > 1e-12) throw ContractError("Stencil: first moment must equal 1");
    }
};

/// Dimensionless spectrum sigma dx (theta) = sum_j w_j e^{i offset_j theta}
/// of a differentiation stencil, sampled on [-pi, pi].
struct SymbolCurve {
    std::vector<double> thetas;
    std::vector<cdouble> sigma_dx;
    std::string label;
};

inline SymbolCurve stencil_symbol(const Stencil& st, int n_points) {
    st.validate();
    if (n_points < 2) throw ContractError("stencil_symbol: n_points must be >= 2");
    SymbolCurve c;
    c.label = st.label;
    c.thetas.reserve(static_cast<std::size_t>(n_points) + 1);
    for (int i = 0; i <= n_points; ++i) {
        const double theta = -M_PI + 2.0 * M_PI * i / n_points;
        cdouble s(0.0, 0.0);
        for (std::size_t j = 0; j < st.offsets.size(); ++j)
            s += st.weights[j] * std::exp(cdouble(0.0, st.offsets[j] * theta));
        c.thetas.push_back(theta);
        c.sigma_dx.push_back(s);
    }
    return c;
}

/// The ideal (spectral) differentiation symbol, sigma dx = i theta.
inline SymbolCurve ideal_symbol(int n_points) {
    if (n_points < 2) throw ContractError("ideal_symbol: n_points must be >= 2");
    SymbolCurve c;
    c.label = "spectral";
    for (int i = 0; i <= n_points; ++i) {
        const double theta = -M_PI + 2.0 * M_PI * i / n_points;
        c.thetas.push_back(theta);
        c.sigma_dx.push_back(cdouble(0.0, theta));
    }
    return c;
}

/// Tangency of a stencil spectrum at the origin. For
/// sigma dx (theta) = i theta + V_{2p} theta^{2p} + ... this returns (p, V_2p);
/// centered stencils have no real part at all and report the infinite-order
/// sentinel (p_infinite = true).
struct StencilTangency {
    bool p_infinite = false;
    int p = 0;
    double v2p = 0.0;
};

inline StencilTangency stencil_tangency(const Stencil& st, double zero_tol = 1e-12) {
    st.validate();
    StencilTangency out;
    // Exact Taylor coefficients of the real part: Re coeff of theta^{2l} is
    // sum_j w_j (-1)^l j^{2l} / (2l)!.
    double factorial = 1.0; // (2l)!
    for (int l = 1; l <= 8; ++l) {
        factorial *= (2.0 * l - 1.0) * (2.0 * l);
        double coef = 0.0;
        for (std::size_t j = 0; j < st.offsets.size(); ++j)
            coef += st.weights[j] * std::pow(static_cast<double>(st.offsets[j]), 2 * l);
        coef *= ((l % 2 == 0) ? 1.0 : -1.0) / factorial;
        if (std::abs(coef) > zero_tol) {
            out.p = l;
            out.v2p = coef;
            return out;
        }
    }
    out.p_infinite = true;
    return out;
}

/// Space-time CFL exponent for an upwind-type stencil of tangency order p
/// combined with a time scheme of tangency order q (both with negative
/// leading real coefficients, checked by the caller):
///   p <= q          -> 1            (plain linear CFL)
///   p >= q (finite) -> q(2p-1)/(p(2q-1))
///   p infinite      -> 2q/(2q-1)    (the centered / spectral limit)
struct CombinedCondition {
    bool unconditionally_unstable = false;
    Rational exponent{1, 1};
};

inline CombinedCondition combined_exponent(const StencilTangency& space, int q) {
    if (q < 1) throw ContractError("combined_exponent: q must be >= 1");
    CombinedCondition out;
    if (!space.p_infinite && space.v2p > 0.0) {
        out.unconditionally_unstable = true;
        return out;
    }
    if (space.p_infinite) {
        out.exponent = Rational(2 * q, 2 * q - 1);
    } else if (space.p <= q) {
        out.exponent = Rational(1, 1);
    } else {
        out.exponent = Rational(static_cast<std::int64_t>(q) * (2 * space.p - 1),
                                static_cast<std::int64_t>(space.p) * (2 * q - 1));
    }
    return out;
}

/// Constant-coefficient transport system d_t X = sum_i M_i d_{x_i} X.
struct SystemSpec {
    std::vector<Mat> matrices;

    void validate() const {
        if (matrices.empty()) throw ContractError("SystemSpec: needs at least one matrix");
        const int n = matrices[0].n;
        for (const Mat& m : matrices)
            if (m.n != n) throw ContractError("SystemSpec: matrices must share their size");
    }
};

struct ReductionResult {
    double a_eff = 0.0;
    bool jordan_warning = false;
    std::vector<double> defective_direction;
};

/// Uniform direction samples for the given space dimension.
inline std::vector<std::vector<double>> sample_directions(int dim, int count = 256) {
    if (dim < 1) throw ContractError("sample_directions: dim must be >= 1");
    std::vector<std::vector<double>> dirs;
    if (dim == 1) {
        dirs.push_back({1.0});
        return dirs;
    }
    if (dim == 2) {
        for (int i = 0; i < count; ++i) {
            const double ang = M_PI * i / count; // antipodal directions are equivalent
            dirs.push_back({std::cos(ang), std::sin(ang)});
        }
        return dirs;
    }
    // Fibonacci sphere for dim == 3; higher dimensions are out of scope.
    if (dim != 3) throw ContractError("sample_directions: dim must be 1, 2 or 3");
    const double golden = M_PI * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < count; ++i) {
        const double z = 1.0 - 2.0 * (i + 0.5) / count;
        const double rad = std::sqrt(std::max(0.0, 1.0 - z * z));
        dirs.push_back({rad * std::cos(golden * i), rad * std::sin(golden * i), z});
    }
    return dirs;
}

/// Effective transport speed of a multi-component system: the largest
/// eigenvalue magnitude of M(xi) = sum_i xi_i M_i over the sampled unit
/// directions. Eigenvalues must be real (hyperbolicity); a direction where
/// M(xi) is defective is reported as a Jordan-block warning, since the
/// coupling then acts as a source term rather than independent transport.
inline ReductionResult reduce_system(const SystemSpec& sys, const std::vector<std::vector<double>>& directions) {
    sys.validate();
    if (directions.empty()) throw ContractError("reduce_system: no directions given");
    const int n = sys.matrices[0].n;
    ReductionResult out;
    for (const std::vector<double>& xi : directions) {
        if (static_cast<int>(xi.size()) != static_cast<int>(sys.matrices.size()))
            throw ContractError("reduce_system: direction dimension mismatch");
        Mat M(n);
        for (std::size_t d = 0; d < sys.matrices.size(); ++d) M = M + xi[d] * sys.matrices[d];
        const double scale = std::max(1.0, M.max_abs());

        const std::vector<double> cp = char_poly(M);
        std::vector<cdouble> cc(cp.begin(), cp.end());
        std::vector<cdouble> eig = all_roots(cc);
        // Repeated real eigenvalues come back as tight conjugate clusters;
        // replacing a cluster by its centroid removes the spurious imaginary
        // parts without masking genuinely complex spectra.
        std::vector<bool> used(eig.size(), false);
        std::vector<cdouble> cleaned;
        for (std::size_t a = 0; a < eig.size(); ++a) {
            if (used[a]) continue;
            cdouble sum = eig[a];
            int count = 1;
            used[a] = true;
            for (std::size_t b = a + 1; b < eig.size(); ++b) {
                if (!used[b] && std::abs(eig[b] - eig[a]) < 1e-6 * scale) {
                    sum += eig[b];
                    ++count;
                    used[b] = true;
                }
            }
            for (int r = 0; r < count; ++r) cleaned.push_back(sum / static_cast<double>(count));
        }
        std::vector<double> lambdas;
        for (const cdouble& l : cleaned) {
            if (std::abs(l.imag()) > 1e-8 * scale)
                throw SingularError("reduce_system: non-real eigenvalues (system is not hyperbolic)");
            lambdas.push_back(l.real());
            out.a_eff = std::max(out.a_eff, std::abs(l.real()));
        }

        // Diagonalizability: each eigenvalue cluster needs geometric
        // multiplicity equal to its algebraic multiplicity.
        std::sort(lambdas.begin(), lambdas.end());
        const double cluster_tol = 1e-7 * scale;
        std::size_t i = 0;
        while (i < lambdas.size() && !out.jordan_warning) {
            std::size_t j = i + 1;
            while (j < lambdas.size() && lambdas[j] - lambdas[j - 1] <= cluster_tol) ++j;
            const std::size_t mult = j - i;
            if (mult > 1) {
                double lam = 0.0;
                for (std::size_t k = i; k < j; ++k) lam += lambdas[k];
                lam /= static_cast<double>(mult);
                Mat shifted = M;
                for (int d = 0; d < n; ++d) shifted.at(d, d) -= lam;
                const int rk = rank(shifted, 1e-8 * scale);
                if (n - rk < static_cast<int>(mult)) {
                    out.jordan_warning = true;
                    out.defective_direction = xi;
                }
            }
            i = j;
        }
    }
    return out;
}

inline ReductionResult reduce_system(const SystemSpec& sys) {
    sys.validate();
    return reduce_system(sys, sample_directions(static_cast<int>(sys.matrices.size())));
}

/// Stencil catalog record: "label offset... | weight...".
inline Stencil parse_stencil_line(const std::string& line) {
    std::istringstream in(line);
    Stencil st;
    if (!(in >> st.label)) throw ParseError("stencil record needs a label");
    std::string tok;
    bool in_weights = false;
    while (in >> tok) {
        if (tok == "|") {
            in_weights = true;
            continue;
        }
        try {
            if (in_weights)
                st.weights.push_back(std::stod(tok));
            else
                st.offsets.push_back(std::stoi(tok));
        } catch (const std::exception&) {
            throw ParseError("stencil record: bad token '" + tok + "'");
        }
    }
    st.validate();
    return st;
}

inline std::string format_stencil(const Stencil& st) {
    std::ostringstream out;
    out.precision(17);
    out << st.label;
    for (int o : st.offsets) out << ' ' << o;
    out << " |";
    for (double w : st.weights) out << ' ' << w;
    return out.str();
}

/// CSV dump of a symbol curve: theta, re, im.
inline std::string symbol_csv(const SymbolCurve& c) {
    std::ostringstream out;
    out.precision(15);
    out << "theta,re,im\n";
    for (std::size_t i = 0; i < c.thetas.size(); ++i)
        out << c.thetas[i] << ',' << c.sigma_dx[i].real() << ',' << c.sigma_dx[i].imag() << '\n';
    return out.str();
}

} // namespace cfllab
