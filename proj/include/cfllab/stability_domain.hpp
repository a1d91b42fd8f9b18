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
#include "cfllab/scheme_algebra.hpp"

namespace cfllab {

/// Square matrix with entries polynomial in zeta. Multistep schemes get their
/// companion form; one-step schemes a 1x1 matrix holding g(zeta); anything
/// else (mixed schemes) can be supplied directly.
struct MultiplierMatrix {
    std::string name;
    int dim = 0;
    std::vector<RPoly> entries; // row-major, dim x dim
    std::optional<SchemeSpec> scheme;

    RPoly& at(int i, int j) { return entries[static_cast<std::size_t>(i) * static_cast<std::size_t>(dim) + static_cast<std::size_t>(j)]; }
    const RPoly& at(int i, int j) const {
        return entries[static_cast<std::size_t>(i) * static_cast<std::size_t>(dim) + static_cast<std::size_t>(j)];
    }
    bool is_scalar() const { return dim == 1; }

    static MultiplierMatrix from_scheme(const SchemeSpec& s) {
        s.validate();
        MultiplierMatrix m;
        m.name = s.name;
        m.scheme = s;
        if (s.kind == SchemeKind::adams_bashforth) {
            const int K = static_cast<int>(s.ab_alphas.size()) - 1;
            m.dim = K + 1;
            m.entries.assign(static_cast<std::size_t>(m.dim) * static_cast<std::size_t>(m.dim), RPoly());
            m.at(0, 0) = RPoly({1.0, s.ab_alphas[0]});
            for (int k = 1; k <= K; ++k) m.at(0, k) = RPoly({0.0, s.ab_alphas[static_cast<std::size_t>(k)]});
            for (int i = 1; i <= K; ++i) m.at(i, i - 1) = RPoly::constant(1.0);
        } else {
            m.dim = 1;
            m.entries.assign(1, RPoly(std::vector<double>(amplification(s).betas)));
        }
        return m;
    }

    /// Two-step scheme u_{n+1} = u_n + dt F((u_n + u_{n-1})/2 + dt F(u_n));
    /// its mode multiplier matrix is [[1 + z/2 + z^2, z/2], [1, 0]].
    static MultiplierMatrix pseudo_leap_frog() {
        MultiplierMatrix m;
        m.name = "pseudo-leap-frog";
        m.dim = 2;
        m.entries.assign(4, RPoly());
        m.at(0, 0) = RPoly({1.0, 0.5, 1.0});
        m.at(0, 1) = RPoly({0.0, 0.5});
        m.at(1, 0) = RPoly::constant(1.0);
        return m;
    }

    /// Coefficients c_j(zeta) of det(X I - M(zeta)) = sum_j c_j(zeta) X^j,
    /// by the Faddeev-LeVerrier recurrence over polynomial entries.
    std::vector<RPoly> char_poly_coeffs() const {
        const int n = dim;
        std::vector<RPoly> c(static_cast<std::size_t>(n) + 1, RPoly());
        c[static_cast<std::size_t>(n)] = RPoly::constant(1.0);
        std::vector<RPoly> M(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), RPoly());
        for (int i = 0; i < n; ++i) M[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) + static_cast<std::size_t>(i)] = RPoly::constant(1.0);
        const auto mat_at = [&](std::vector<RPoly>& m, int i, int j) -> RPoly& {
            return m[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) + static_cast<std::size_t>(j)];
        };
        for (int k = 1; k <= n; ++k) {
            std::vector<RPoly> AM(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), RPoly());
            for (int i = 0; i < n; ++i)
                for (int l = 0; l < n; ++l) {
                    if (at(i, l).is_zero()) continue;
                    for (int j = 0; j < n; ++j) mat_at(AM, i, j) += at(i, l) * mat_at(M, l, j);
                }
            M = std::move(AM);
            RPoly tr;
            for (int i = 0; i < n; ++i) tr += mat_at(M, i, i);
            const RPoly ck = (-1.0 / static_cast<double>(k)) * tr;
            c[static_cast<std::size_t>(n - k)] = ck;
            for (int i = 0; i < n; ++i) mat_at(M, i, i) += ck;
        }
        return c;
    }
};

/// Spectral radius of the multiplier matrix at the given zeta: |g(zeta)| for
/// one-step schemes, the largest characteristic-root magnitude otherwise.
inline double spectral_radius(const MultiplierMatrix& m, cdouble zeta) {
    if (m.is_scalar()) return std::abs(m.at(0, 0).eval(zeta));
    const std::vector<RPoly> coeffs = m.char_poly_coeffs();
    std::vector<cdouble> cx(coeffs.size());
    for (std::size_t j = 0; j < coeffs.size(); ++j) cx[j] = coeffs[j].eval(zeta);
    double rho = 0.0;
    for (const cdouble& root : all_roots(cx)) rho = std::max(rho, std::abs(root));
    return rho;
}

inline double spectral_radius(const SchemeSpec& s, cdouble zeta) {
    return spectral_radius(MultiplierMatrix::from_scheme(s), zeta);
}

/// Thick-line stability test rho(M(zeta)) <= 1 + C dt.
inline bool is_stable(const MultiplierMatrix& m, cdouble zeta, double C, double dt) {
    if (dt <= 0.0) throw ContractError("is_stable: dt must be positive");
    if (C < 0.0) throw ContractError("is_stable: C must be nonnegative");
    return spectral_radius(m, zeta) <= 1.0 + C * dt;
}

inline bool is_stable(const SchemeSpec& s, cdouble zeta, double C, double dt) {
    return is_stable(MultiplierMatrix::from_scheme(s), zeta, C, dt);
}

/// One connected piece of a traced stability-domain boundary.
struct BoundaryBranch {
    std::vector<double> thetas;
    std::vector<cdouble> zetas;
};

/// Polylines in the zeta plane where some characteristic root has modulus 1,
/// parameterized by theta in [-pi, pi].
struct DomainBoundary {
    std::string scheme_name;
    std::vector<BoundaryBranch> branches;
};

namespace detail {

struct BranchWalker {
    // Polynomial-in-zeta coefficients of det(e^{i theta} I - M(zeta)) given X.
    // For the scalar case this is g(zeta) - X.
    const MultiplierMatrix& mm;
    std::vector<RPoly> char_c;

    explicit BranchWalker(const MultiplierMatrix& m) : mm(m) {
        if (!mm.is_scalar()) char_c = mm.char_poly_coeffs();
    }

    std::vector<cdouble> zeta_poly(cdouble X) const {
        if (mm.is_scalar()) {
            std::vector<cdouble> c(mm.at(0, 0).coeffs().begin(), mm.at(0, 0).coeffs().end());
            c[0] -= X;
            return c;
        }
        int zdeg = 0;
        for (const RPoly& p : char_c) zdeg = std::max(zdeg, p.degree());
        std::vector<cdouble> c(static_cast<std::size_t>(zdeg) + 1, cdouble(0.0, 0.0));
        cdouble Xp(1.0, 0.0);
        for (std::size_t j = 0; j < char_c.size(); ++j) {
            for (int k = 0; k <= char_c[j].degree(); ++k) c[static_cast<std::size_t>(k)] += char_c[j].coeff(k) * Xp;
            Xp *= X;
        }
        return c;
    }

    std::vector<cdouble> roots_at(double theta) const {
        return all_roots(zeta_poly(cdouble(std::cos(theta), std::sin(theta))));
    }
};

/// Greedy distance matching of new roots onto current branch heads.
/// Returns matched roots in branch order; nullopt when the assignment is
/// ambiguous (two candidates equidistant within tol) or jumps too far.
inline std::optional<std::vector<cdouble>> match_roots(const std::vector<cdouble>& heads,
                                                       std::vector<cdouble> roots, double jump_tol,
                                                       double ambiguity_tol = 1e-9) {
    const std::size_t n = heads.size();
    if (roots.size() != n) return std::nullopt;
    std::vector<cdouble> matched(n);
    std::vector<bool> head_used(n, false), root_used(n, false);
    for (std::size_t pick = 0; pick < n; ++pick) {
        double best = 1e300;
        std::size_t bi = 0, bj = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (head_used[i]) continue;
            for (std::size_t j = 0; j < n; ++j) {
                if (root_used[j]) continue;
                const double d = std::abs(heads[i] - roots[j]);
                if (d < best) {
                    best = d;
                    bi = i;
                    bj = j;
                }
            }
        }
        // Ambiguity: another free root nearly as close to the chosen head.
        for (std::size_t j = 0; j < n; ++j) {
            if (j == bj || root_used[j]) continue;
            const double d = std::abs(heads[bi] - roots[j]);
            if (std::abs(d - best) < ambiguity_tol) return std::nullopt;
        }
        if (best > jump_tol) return std::nullopt;
        matched[bi] = roots[bj];
        head_used[bi] = true;
        root_used[bj] = true;
    }
    return matched;
}

inline void walk_half(const BranchWalker& walker, std::vector<BoundaryBranch>& branches, double step0,
                      int direction) {
    const std::size_t nb = branches.size();
    std::vector<cdouble> heads(nb);
    for (std::size_t b = 0; b < nb; ++b) heads[b] = branches[b].zetas.back();
    double theta = 0.0;
    double step = step0;
    const double min_step = step0 / 4096.0;
    double scale = 1.0;
    for (const cdouble& h : heads) scale = std::max(scale, std::abs(h));
    while (theta < M_PI - 1e-12) {
        const double next = std::min(theta + step, M_PI);
        const std::vector<cdouble> roots = walker.roots_at(direction * next);
        const double jump_tol = std::max(20.0 * (next - theta) * scale, 1e-5);
        const auto matched = match_roots(heads, roots, jump_tol);
        if (!matched) {
            step *= 0.5;
            if (step < min_step)
                throw TraceError("trace_boundary: ambiguous branch continuation near theta = " +
                                 std::to_string(direction * next));
            continue;
        }
        for (std::size_t b = 0; b < nb; ++b) {
            branches[b].thetas.push_back(direction * next);
            branches[b].zetas.push_back((*matched)[b]);
        }
        heads = *matched;
        scale = 1.0;
        for (const cdouble& h : heads) scale = std::max(scale, std::abs(h));
        theta = next;
        step = std::min(step * 2.0, step0);
    }
}

} // namespace detail

/// Traces the von Neumann stability-domain boundary. Adams-Bashforth schemes
/// use the closed form zeta(theta) = (e^{i theta} - 1)/sum_k alpha_k e^{-ik theta}
/// (single branch); other kinds solve det(e^{i theta} I - M(zeta)) = 0 in zeta
/// for each theta and continue the root set branch by branch from the seeds
/// at theta = 0 (the roots of g(zeta) = 1, one of which is zeta = 0).
inline DomainBoundary trace_boundary(const MultiplierMatrix& mm, int n_points) {
    if (n_points < 64) throw ContractError("trace_boundary: n_points must be >= 64");
    DomainBoundary out;
    out.scheme_name = mm.name;

    if (mm.scheme && mm.scheme->kind == SchemeKind::adams_bashforth) {
        const std::vector<double>& a = mm.scheme->ab_alphas;
        BoundaryBranch br;
        br.thetas.reserve(static_cast<std::size_t>(n_points) + 1);
        for (int i = 0; i <= n_points; ++i) {
            const double theta = -M_PI + 2.0 * M_PI * i / n_points;
            cdouble den(0.0, 0.0);
            for (std::size_t k = 0; k < a.size(); ++k)
                den += a[k] * std::exp(cdouble(0.0, -static_cast<double>(k) * theta));
            const cdouble z = (std::exp(cdouble(0.0, theta)) - 1.0) / den;
            br.thetas.push_back(theta);
            br.zetas.push_back(z);
        }
        out.branches.push_back(std::move(br));
        return out;
    }

    const detail::BranchWalker walker(mm);
    std::vector<cdouble> seeds = walker.roots_at(0.0);
    // Snap the consistency root: zeta = 0 is always a solution at theta = 0.
    std::size_t nearest = 0;
    for (std::size_t i = 1; i < seeds.size(); ++i)
        if (std::abs(seeds[i]) < std::abs(seeds[nearest])) nearest = i;
    if (std::abs(seeds[nearest]) < 1e-7) seeds[nearest] = cdouble(0.0, 0.0);

    std::vector<BoundaryBranch> pos(seeds.size()), neg(seeds.size());
    for (std::size_t b = 0; b < seeds.size(); ++b) {
        pos[b].thetas.push_back(0.0);
        pos[b].zetas.push_back(seeds[b]);
        neg[b].thetas.push_back(0.0);
        neg[b].zetas.push_back(seeds[b]);
    }
    const double step0 = 2.0 * M_PI / n_points;
    detail::walk_half(walker, pos, step0, +1);
    detail::walk_half(walker, neg, step0, -1);

    for (std::size_t b = 0; b < seeds.size(); ++b) {
        BoundaryBranch br;
        br.thetas.assign(neg[b].thetas.rbegin(), neg[b].thetas.rend());
        br.zetas.assign(neg[b].zetas.rbegin(), neg[b].zetas.rend());
        br.thetas.insert(br.thetas.end(), pos[b].thetas.begin() + 1, pos[b].thetas.end());
        br.zetas.insert(br.zetas.end(), pos[b].zetas.begin() + 1, pos[b].zetas.end());
        out.branches.push_back(std::move(br));
    }
    return out;
}

inline DomainBoundary trace_boundary(const SchemeSpec& s, int n_points) {
    return trace_boundary(MultiplierMatrix::from_scheme(s), n_points);
}

struct TangencyFit {
    int r = 0;
    double t2r = 0.0;
    double residual = 0.0; // relative, from the coarse single-term fit
};

/// Fits Re zeta(theta) = T theta^{2r} near the origin of a traced boundary,
/// choosing r in {1,2,3,4} by least-squares residual, then refines T with a
/// five-term even polynomial so the next-order terms do not bias it.
inline TangencyFit fit_tangency(const DomainBoundary& boundary) {
    const BoundaryBranch* origin = nullptr;
    for (const BoundaryBranch& br : boundary.branches) {
        for (std::size_t i = 0; i < br.thetas.size(); ++i) {
            if (std::abs(br.thetas[i]) < 1e-9 && std::abs(br.zetas[i]) < 1e-6) {
                origin = &br;
                break;
            }
        }
        if (origin) break;
    }
    if (!origin) throw TraceError("fit_tangency: no boundary branch through the origin");

    const auto collect = [&](double window, std::vector<double>& th, std::vector<double>& re) {
        for (std::size_t i = 0; i < origin->thetas.size(); ++i) {
            const double t = origin->thetas[i];
            if (std::abs(t) <= window && std::abs(t) > 1e-9) {
                th.push_back(t);
                re.push_back(origin->zetas[i].real());
            }
        }
    };

    std::vector<double> th, re;
    collect(0.1, th, re);
    if (th.size() < 8) throw TraceError("fit_tangency: too few points near the origin");

    int best_r = 0;
    double best_res = 1e300;
    double signal = 0.0;
    for (double v : re) signal += v * v;
    for (int r = 1; r <= 4; ++r) {
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < th.size(); ++i) {
            const double basis = std::pow(th[i], 2 * r);
            num += re[i] * basis;
            den += basis * basis;
        }
        const double coef = den > 0.0 ? num / den : 0.0;
        double res = 0.0;
        for (std::size_t i = 0; i < th.size(); ++i) {
            const double d = re[i] - coef * std::pow(th[i], 2 * r);
            res += d * d;
        }
        if (res < best_res) {
            best_res = res;
            best_r = r;
        }
    }
    TangencyFit fit;
    fit.r = best_r;
    fit.residual = signal > 0.0 ? std::sqrt(best_res / signal) : 0.0;
    if (fit.residual > 0.10)
        throw TraceError("fit_tangency: inconclusive fit (residual " + std::to_string(fit.residual) + ")");

    // Refinement: a four-term even fit inside a window sized per tangency
    // order, Richardson-extrapolated over two windows. The first unmodeled
    // term contaminates the fitted coefficient proportionally to w^8, so the
    // two-window combination cancels it.
    static constexpr double kWindow[5] = {0.0, 0.20, 0.15, 0.20, 0.30};
    const int terms = 4;
    const auto fit_at = [&](double wmax) {
        std::vector<double> th2, re2;
        collect(wmax, th2, re2);
        if (static_cast<int>(th2.size()) < terms + 3)
            throw TraceError("fit_tangency: too few points in the refinement window");
        Mat gram(terms);
        std::vector<double> rhs(static_cast<std::size_t>(terms), 0.0);
        for (std::size_t i = 0; i < th2.size(); ++i) {
            const double s = (th2[i] / wmax) * (th2[i] / wmax);
            double basis[4];
            basis[0] = std::pow(th2[i], 2 * best_r);
            for (int j = 1; j < terms; ++j) basis[j] = basis[j - 1] * s;
            for (int a = 0; a < terms; ++a) {
                rhs[static_cast<std::size_t>(a)] += basis[a] * re2[i];
                for (int b = 0; b < terms; ++b) gram.at(a, b) += basis[a] * basis[b];
            }
        }
        return solve_linear(gram, rhs)[0];
    };
    const double w = kWindow[best_r];
    const double shrink = 1.25;
    const double coarse = fit_at(w);
    const double fine = fit_at(w / shrink);
    const double R = std::pow(shrink, 2.0 * terms);
    fit.t2r = (R * fine - coarse) / (R - 1.0);
    return fit;
}

/// CSV dump of a traced boundary: theta, re_zeta, im_zeta, branch_id.
inline std::string boundary_csv(const DomainBoundary& boundary) {
    std::ostringstream out;
    out.precision(15);
    out << "theta,re_zeta,im_zeta,branch_id\n";
    for (std::size_t b = 0; b < boundary.branches.size(); ++b) {
        const BoundaryBranch& br = boundary.branches[b];
        for (std::size_t i = 0; i < br.thetas.size(); ++i)
            out << br.thetas[i] << ',' << br.zetas[i].real() << ',' << br.zetas[i].imag() << ',' << b << '\n';
    }
    return out.str();
}

} // namespace cfllab
