// Acceptance suite: one pass/fail line per criterion.
//
//   1  exact-algebra values of the energy coefficients
//   2  constructor reproduction of the chain table and modified AB sets
//   3  tangency bridge between traced boundaries and the energy analysis
//   4  series oracles (convolution, dominant-multiplier expansion)
//   5  Burgers desk-scale sweep slopes and the RK2/AB2 constant ratio
//   6  solver correctness against the exact smooth solution
//   7  transport-model symbols, exponents and system reduction
//
// Run with no arguments for all criteria, or pass criterion numbers to run a
// subset (e.g. "acceptance_tests 1 4 7").

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cfllab/burgers.hpp"
#include "cfllab/catalog.hpp"
#include "cfllab/certificate.hpp"
#include "cfllab/scheme_constructor.hpp"
#include "cfllab/stability_domain.hpp"
#include "cfllab/transport_models.hpp"

using namespace cfllab;

namespace {

struct Criterion {
    std::string detail;
    bool ok = true;
    int checks = 0;

    void expect(bool cond, const std::string& what) {
        ++checks;
        if (!cond) {
            ok = false;
            detail += "\n    FAILED: " + what;
        }
    }
    void expect_near(double got, double want, double tol, const std::string& what) {
        std::ostringstream msg;
        msg.precision(12);
        msg << what << " (got " << got << ", want " << want << ", tol " << tol << ")";
        expect(std::isfinite(got) && std::abs(got - want) <= tol, msg.str());
    }
    void note(const std::string& text) { detail += "\n    note: " + text; }
};

// ---------------------------------------------------------------- criterion 1
void criterion_1(Criterion& c) {
    const std::vector<double> s_euler = energy_coefficients(AmplificationPolynomial{{1.0, 1.0}});
    c.expect_near(s_euler[1], 1.0, 1e-12, "Euler S_1");

    const std::vector<double> s_rk2 = energy_coefficients(AmplificationPolynomial{{1.0, 1.0, 0.5}});
    c.expect_near(s_rk2[1], 0.0, 1e-12, "RK2 S_1");
    c.expect_near(s_rk2[2], 0.25, 1e-12, "RK2 S_2");

    const std::vector<double> s_rk4 =
        energy_coefficients(AmplificationPolynomial{{1.0, 1.0, 0.5, 1.0 / 6.0, 1.0 / 24.0}});
    c.expect_near(s_rk4[3], -1.0 / 72.0, 1e-12, "RK4 S_3");
    c.expect_near(s_rk4[4], 1.0 / 576.0, 1e-12, "RK4 S_4");

    const std::vector<double> s_scheme5 =
        energy_coefficients(AmplificationPolynomial{{1.0, 1.0, 0.5, 1.0 / 6.0, 1.0 / 24.0, 1.0 / 144.0}});
    c.expect(s_scheme5[4] < 0.0, "five-stage order-4 chain has S_4 < 0");
    c.expect_near(s_scheme5[4], -1.0 / 1728.0, 1e-12, "five-stage order-4 chain S_4");
}

// ---------------------------------------------------------------- criterion 2
void criterion_2(Criterion& c) {
    const double sqrt2 = std::sqrt(2.0);
    const double sqrt3 = std::sqrt(3.0);
    const double sqrt5 = std::sqrt(5.0);

    const double beta_ref[6] = {0.0, 1.0, 0.5, 0.125, (3.0 - 2.0 * sqrt2) / 8.0, (5.0 * sqrt5 - 11.0) / 64.0};
    const double const_ref[6] = {0.0, 1.0, 1.587, 2.297, 2.997, 3.687};
    for (int m = 2; m <= 5; ++m) {
        const ConstructedScheme chain = build_rk_chain(m);
        const double bm = chain.betas->betas[static_cast<std::size_t>(m)];
        c.expect_near(bm, beta_ref[m], 1e-10, "chain" + std::to_string(m) + " beta_m closed form");
        const double constant = std::pow(1.0 / (bm * bm), 1.0 / (2.0 * m - 1.0));
        c.expect_near(constant, const_ref[m], 5e-4, "chain" + std::to_string(m) + " constant");
    }

    // m = 6 and 7: computed and compared against the printed reference, with
    // any discrepancy reported rather than asserted away.
    const ConstructedScheme m6 = build_rk_chain(6);
    const double b6 = m6.betas->betas[6];
    const double c6 = std::pow(1.0 / (b6 * b6), 1.0 / 11.0);
    {
        const std::vector<double> S = energy_coefficients(*m6.betas);
        for (int l = 1; l <= 5; ++l)
            c.expect(std::abs(S[static_cast<std::size_t>(l)]) < 1e-10, "chain6 S_" + std::to_string(l) + " = 0");
        c.expect(b6 > 0.0, "chain6 beta_6 > 0");
        const double ref_b6 = (26.0 - 15.0 * sqrt3) / 16.0;
        std::ostringstream note;
        note.precision(10);
        note << "chain6 computed beta_6 = " << b6 << " -> constant " << c6
             << "; reference entry beta_6 = " << ref_b6 << " -> constant 3.395";
        if (std::abs(b6 - ref_b6) > 1e-8) {
            note << "  ** discrepancy flagged: computed branch equals (26-15*sqrt3)/64 = "
                 << (26.0 - 15.0 * sqrt3) / 64.0
                 << "; the reference value does not satisfy S_1..S_5 = 0 for a six-stage chain **";
        }
        c.note(note.str());
        const std::string certificate = make_certificate(m6);
        c.expect(certificate.find("MISMATCH") != std::string::npos ||
                     std::abs(b6 - ref_b6) <= 1e-8,
                 "chain6 certificate carries the discrepancy report");
    }
    const ConstructedScheme m7 = build_rk_chain(7);
    {
        const double b7 = m7.betas->betas[7];
        const double c7 = std::pow(1.0 / (b7 * b7), 1.0 / 13.0);
        const std::vector<double> S = energy_coefficients(*m7.betas);
        for (int l = 1; l <= 6; ++l)
            c.expect(std::abs(S[static_cast<std::size_t>(l)]) < 1e-10, "chain7 S_" + std::to_string(l) + " = 0");
        // Reference closed form: beta_7 = -1/64 + 7a/128, a^3 - 9a^2 - a + 1 = 0.
        const double a = 128.0 / 7.0 * (b7 + 1.0 / 64.0);
        c.expect(std::abs(a * a * a - 9.0 * a * a - a + 1.0) < 1e-8, "chain7 beta_7 matches the cubic closed form");
        std::ostringstream note;
        note.precision(10);
        note << "chain7 computed beta_7 = " << b7 << " -> constant " << c7 << " (reference 5.045)";
        c.note(note.str());
        c.expect(std::abs(c7 - 5.045) < 5e-3, "chain7 constant near the reference 5.045");
    }

    // Modified Adams-Bashforth reproductions.
    const ConstructedScheme k1 = build_modified_ab(1);
    c.expect_near(k1.scheme.ab_alphas[0], 1.5, 1e-10, "absch2 alpha_0");
    c.expect_near(k1.scheme.ab_alphas[1], -0.5, 1e-10, "absch2 alpha_1");
    const ConstructedScheme k2 = build_modified_ab(2);
    c.expect_near(k2.scheme.ab_alphas[0], 5.0 / 3.0, 1e-10, "absch3 alpha_0");
    c.expect_near(k2.scheme.ab_alphas[1], -5.0 / 6.0, 1e-10, "absch3 alpha_1");
    c.expect_near(k2.scheme.ab_alphas[2], 1.0 / 6.0, 1e-10, "absch3 alpha_2");
    const ConstructedScheme k3 = build_modified_ab(3);
    c.expect_near(k3.scheme.ab_alphas[0], 7.0 / 4.0, 1e-10, "absch4 alpha_0");
    c.expect_near(k3.scheme.ab_alphas[1], -21.0 / 20.0, 1e-10, "absch4 alpha_1");
    c.expect_near(k3.scheme.ab_alphas[2], 7.0 / 20.0, 1e-10, "absch4 alpha_2");
    c.expect_near(k3.scheme.ab_alphas[3], -1.0 / 20.0, 1e-10, "absch4 alpha_3");

    c.expect_near(ab_tangency({1.5, -0.5}, 4)[4], -0.25, 1e-10, "AB2 T_4");
    c.expect_near((*k2.tangency)[6], -1.0 / 12.0, 1e-10, "absch3 T_6");
    c.expect_near((*k3.tangency)[8], -1.0 / 40.0, 1e-10, "absch4 T_8");
}

// ---------------------------------------------------------------- criterion 3
void criterion_3(Criterion& c) {
    // Every catalog scheme in the shrinking regime whose tangency order lies
    // in the fit's supported range r <= 4. chain5..chain7 have r = 5..7,
    // beyond both the fit contract and double-precision visibility of
    // T_{2r} theta^{2r} near the origin; they are excluded by that contract.
    for (const std::string& name : catalog_names()) {
        const CatalogEntry e = catalog_lookup(name);
        if (!e.scheme) continue;
        const StabilityPrediction p = classify_scheme(*e.scheme);
        if (p.regime != Regime::shrinking_cfl || *p.r > 4) continue;
        const DomainBoundary b = trace_boundary(e.multiplier, 8192);
        const TangencyFit fit = fit_tangency(b);
        c.expect(fit.r == *p.r, name + ": fitted r matches classify");
        const double sr = p.energy_coeffs[static_cast<std::size_t>(*p.r)];
        const double expected = -sr / 2.0;
        std::ostringstream what;
        what << name << ": T_" << 2 * fit.r << " = -S_r/2";
        c.expect(std::abs(fit.t2r - expected) <= 1e-6 * std::abs(expected), what.str());
        if (e.scheme->kind == SchemeKind::adams_bashforth) {
            const std::vector<double> t = ab_tangency(e.scheme->ab_alphas, 2 * *p.r);
            c.expect(std::abs(fit.t2r - t[static_cast<std::size_t>(2 * *p.r)]) <= 1e-6 * std::abs(expected),
                     name + ": fit matches ab_tangency");
        }
    }
    // Pseudo-Leap-Frog: right-oriented tangency.
    const TangencyFit plf = fit_tangency(trace_boundary(MultiplierMatrix::pseudo_leap_frog(), 8192));
    c.expect(plf.r == 2, "pseudo-leap-frog fitted r = 2");
    c.expect(plf.t2r > 0.0, "pseudo-leap-frog T_4 > 0 (right tangency)");
}

// ---------------------------------------------------------------- criterion 4
void criterion_4(Criterion& c) {
    // Multiplication against a brute-force convolution.
    const int T = 8;
    TruncatedSeries a(T), b(T);
    std::uint64_t state = 12345;
    const auto next = [&state]() {
        state = state * 6364136223846793005ULL + 1442695040888963407ULL;
        return static_cast<double>(state >> 11) / 9007199254740992.0 * 2.0 - 1.0;
    };
    for (int k = 0; k <= T; ++k) {
        a.coeff(k) = cdouble(next(), next());
        b.coeff(k) = cdouble(next(), next());
    }
    const TruncatedSeries prod = series_mul(a, b);
    for (int k = 0; k <= T; ++k) {
        cdouble want(0.0, 0.0);
        for (int i = 0; i <= k; ++i) want += a.coeff(i) * b.coeff(k - i);
        c.expect(std::abs(prod.coeff(k) - want) < 1e-14, "series_mul coefficient " + std::to_string(k));
    }

    SchemeSpec ab2;
    ab2.kind = SchemeKind::adams_bashforth;
    ab2.name = "ab2";
    ab2.ab_alphas = {1.5, -0.5};
    const TruncatedSeries y = ab_dominant_multiplier(ab2, 8);
    const double expect[5] = {1.0, 1.0, 0.5, -0.25, -0.125};
    for (int k = 0; k <= 4; ++k) {
        c.expect(std::abs(y.coeff(k) - expect[k]) < 1e-12,
                 "AB2 dominant multiplier coefficient " + std::to_string(k));
    }
}

// ---------------------------------------------------------------- criterion 5
void criterion_5(Criterion& c) {
    const std::vector<int> ladder = {16, 32, 64, 128, 256, 512, 1024};
    BurgersConfig cfg; // T = 1, K_tv = 1.1, 2/3 dealiasing, 0.5% dichotomy
    const int jobs = 1;

    struct Case {
        const char* name;
        double slope;
    };
    const Case cases[] = {{"euler", -2.0},        {"rk2", -4.0 / 3.0},    {"ab2", -4.0 / 3.0},
                          {"chain3", -6.0 / 5.0}, {"absch3", -6.0 / 5.0}, {"chain4", -8.0 / 7.0},
                          {"absch4", -8.0 / 7.0}, {"rk3", -1.0},          {"rk4", -1.0}};

    SweepResult rk2_result, ab2_result;
    for (const Case& cs : cases) {
        const auto t0 = std::chrono::steady_clock::now();
        const SchemeSpec scheme = *catalog_lookup(cs.name).scheme;
        const SweepResult r = sweep(ladder, scheme, cfg, jobs);
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        for (const SweepRow& row : r.rows)
            c.expect(row.error.empty(), std::string(cs.name) + " row n=" + std::to_string(row.n) + ": " + row.error);
        // Monotone decrease in n.
        for (std::size_t i = 1; i < r.rows.size(); ++i)
            c.expect(r.rows[i].dt_max < r.rows[i - 1].dt_max,
                     std::string(cs.name) + " dt_max decreasing at n=" + std::to_string(r.rows[i].n));
        std::ostringstream what;
        what << cs.name << " fitted slope (" << secs << " s)";
        c.expect_near(r.fitted_slope, cs.slope, 0.07, what.str());
        {
            std::ostringstream note;
            note.precision(4);
            note << cs.name << ": slope " << r.fitted_slope << " (predicted " << cs.slope << "), "
                 << secs << " s";
            c.note(note.str());
        }
        if (std::string(cs.name) == "rk2") rk2_result = r;
        if (std::string(cs.name) == "ab2") ab2_result = r;
    }

    // RK2/AB2 dt_max ratio at n >= 256 within 10% of 2^(1/3).
    const double want_ratio = std::pow(2.0, 1.0 / 3.0);
    for (std::size_t i = 0; i < ladder.size(); ++i) {
        if (ladder[i] < 256) continue;
        const double ratio = rk2_result.rows[i].dt_max / ab2_result.rows[i].dt_max;
        std::ostringstream what;
        what << "RK2/AB2 dt_max ratio at n=" << ladder[i];
        c.expect(std::abs(ratio - want_ratio) <= 0.1 * want_ratio, what.str() + " within 10% of 2^(1/3)");
        std::ostringstream note;
        note.precision(5);
        note << what.str() << " = " << ratio << " (2^(1/3) = " << want_ratio << ")";
        c.note(note.str());
    }
}

// ---------------------------------------------------------------- criterion 6
void criterion_6(Criterion& c) {
    const SchemeSpec rk4 = *catalog_lookup("rk4").scheme;
    BurgersConfig cfg;
    const int n = 128;
    const double dtmax = find_dtmax(n, rk4, cfg);
    const double dt = dtmax / 4.0;
    const double T = 0.5;

    BurgersSolver solver(n, cfg.dealias_fraction);
    TimeStepper stepper(rk4, solver, cfg.bootstrap);
    GridState u = initial_condition(n);
    const double mean0 = [&]() {
        double m = 0.0;
        for (double v : u.values) m += v;
        return m / u.n;
    }();
    const long steps = static_cast<long>(std::ceil(T / dt));
    for (long i = 0; i < steps; ++i) stepper.step(u, i == steps - 1 ? T - dt * (steps - 1) : dt);

    double err2 = 0.0, mean1 = 0.0;
    for (int j = 0; j < n; ++j) {
        const double d = u.values[static_cast<std::size_t>(j)] - exact_solution(u.node(j), T);
        err2 += d * d;
        mean1 += u.values[static_cast<std::size_t>(j)];
    }
    mean1 /= n;
    const double l2 = std::sqrt(err2 / n);
    c.expect(l2 < 1e-5, "RK4 n=128 L2 error vs exact solution < 1e-5 (got " + std::to_string(l2) + ")");
    c.expect(std::abs(mean1 - mean0) <= 1e-10 * std::abs(mean0), "mean of u conserved to 1e-10 relative");
    std::ostringstream note;
    note.precision(4);
    note << "dt_max(128) = " << dtmax << ", L2 error = " << l2;
    c.note(note.str());
}

// ---------------------------------------------------------------- criterion 7
void criterion_7(Criterion& c) {
    const SymbolCurve centered = stencil_symbol(stencil_lookup("centered2"), 512);
    for (const cdouble& z : centered.sigma_dx)
        c.expect(std::abs(z.real()) < 1e-12, "centered symbol purely imaginary");

    const StencilTangency up1 = stencil_tangency(stencil_lookup("upwind1"));
    c.expect(!up1.p_infinite && up1.p == 1, "upwind1 p = 1");
    c.expect_near(up1.v2p, -0.5, 1e-12, "upwind1 V_2");

    c.expect(combined_exponent(StencilTangency{false, 1, -0.5}, 2).exponent == Rational(1, 1),
             "combined exponent p=1,q=2 -> 1");
    c.expect(combined_exponent(StencilTangency{true, 0, 0.0}, 2).exponent == Rational(4, 3),
             "combined exponent p=inf,q=2 -> 4/3");
    c.expect(combined_exponent(StencilTangency{false, 3, -0.1}, 2).exponent == Rational(10, 9),
             "combined exponent p=3,q=2 -> 10/9");
    c.expect(combined_exponent(StencilTangency{false, 1, 0.5}, 2).unconditionally_unstable,
             "downwind input flags unconditional instability");

    SystemSpec wave;
    wave.matrices = {Mat(2, {0.0, 1.0, 1.0, 0.0})};
    c.expect_near(reduce_system(wave).a_eff, 1.0, 1e-12, "wave system a_eff");
}

} // namespace

int main(int argc, char** argv) {
    std::set<int> selected;
    for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

    struct Entry {
        int id;
        const char* label;
        void (*fn)(Criterion&);
    };
    const Entry entries[] = {
        {1, "exact algebra (energy coefficients)", criterion_1},
        {2, "constructor (chain table, modified AB)", criterion_2},
        {3, "tangency bridge (boundary fit vs classification)", criterion_3},
        {4, "series oracles", criterion_4},
        {5, "Burgers desk-scale sweep", criterion_5},
        {6, "solver correctness vs exact solution", criterion_6},
        {7, "transport models", criterion_7},
    };

    int failures = 0;
    for (const Entry& e : entries) {
        if (!selected.empty() && !selected.count(e.id)) continue;
        Criterion c;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            e.fn(c);
        } catch (const std::exception& ex) {
            c.ok = false;
            c.detail += std::string("\n    EXCEPTION: ") + ex.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("criterion %d [%s]: %s  (%d checks, %.1f s)%s\n", e.id, e.label,
                    c.ok ? "PASS" : "FAIL", c.checks, secs, c.detail.c_str());
        std::fflush(stdout);
        if (!c.ok) ++failures;
    }
    return failures == 0 ? 0 : 1;
}
