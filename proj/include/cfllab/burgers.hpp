#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <deque>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "cfllab/errors.hpp"
#include "cfllab/fft.hpp"
#include "cfllab/scheme_algebra.hpp"
#include "cfllab/stability_domain.hpp"

namespace cfllab {

/// Nodal values of u on the periodic grid x_j = -1 + 2j/n.
struct GridState {
    int n = 0;
    std::vector<double> values;
    double time = 0.0;

    GridState() = default;
    GridState(int n_points, std::vector<double> v, double t) : n(n_points), values(std::move(v)), time(t) {
        validate();
    }

    void validate() const {
        if (n < 16 || n > 8192 || !detail::is_power_of_two(static_cast<std::size_t>(n)))
            throw ContractError("GridState: n must be a power of two in [16, 8192]");
        if (static_cast<int>(values.size()) != n) throw ContractError("GridState: value count != n");
        for (double v : values)
            if (!std::isfinite(v)) throw ContractError("GridState: non-finite value");
    }

    double node(int j) const { return -1.0 + 2.0 * static_cast<double>(j) / n; }
};

/// Transport amplitude of the test profile u0(x) = 10 - 0.1 sin(pi x).
inline constexpr double kMeanVelocity = 10.0;
inline constexpr double kWaveAmplitude = 0.1;

inline GridState initial_condition(int n) {
    GridState u;
    u.n = n;
    u.time = 0.0;
    u.values.resize(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j)
        u.values[static_cast<std::size_t>(j)] = kMeanVelocity - kWaveAmplitude * std::sin(M_PI * u.node(j));
    u.validate();
    return u;
}

/// Discrete total variation with periodic wrap.
inline double total_variation(const std::vector<double>& v) {
    double tv = 0.0;
    for (std::size_t j = 0; j + 1 < v.size(); ++j) tv += std::abs(v[j + 1] - v[j]);
    tv += std::abs(v.front() - v.back());
    return tv;
}

/// Smooth solution of d_t u + u d_x u = 0 with the test profile: u(x,t) =
/// u0(a) where a - x + u0(a) t = 0, valid for t < 10/pi. Newton from
/// a = x - 10t; the map is monotone before the shock so the iteration is safe.
inline double exact_solution(double x, double t) {
    if (t < 0.0 || t >= 10.0 / M_PI) throw ContractError("exact_solution: t outside [0, 10/pi)");
    const auto u0 = [](double a) { return kMeanVelocity - kWaveAmplitude * std::sin(M_PI * a); };
    double a = x - kMeanVelocity * t;
    for (int it = 0; it < 100; ++it) {
        const double f = a - x + u0(a) * t;
        if (std::abs(f) < 1e-13) return u0(a);
        const double df = 1.0 - kWaveAmplitude * M_PI * std::cos(M_PI * a) * t;
        a -= f / df;
    }
    throw ConvergenceError("exact_solution: Newton failed");
}

/// Pseudo-spectral evaluation of F(u) = -u d_x u on the periodic grid,
/// de-aliased by zeroing product modes above dealias_fraction * (n/2).
/// Owns the transform plan and scratch buffers for one grid size.
class BurgersSolver {
  public:
    BurgersSolver(int n, double dealias_fraction)
        : n_(n), fft_(static_cast<std::size_t>(n)), spec_(fft_.spectrum_size()), dspec_(fft_.spectrum_size()),
          ux_(static_cast<std::size_t>(n)), prod_(static_cast<std::size_t>(n)) {
        if (dealias_fraction <= 0.0 || dealias_fraction > 1.0)
            throw ContractError("BurgersSolver: dealias_fraction must lie in (0, 1]");
        cutoff_ = static_cast<int>(dealias_fraction * (n / 2));
    }

    int n() const { return n_; }
    int cutoff() const { return cutoff_; }
    std::size_t spectrum_size() const { return fft_.spectrum_size(); }

    void forward(const std::vector<double>& u, std::vector<std::complex<double>>& spec) const {
        spec.resize(fft_.spectrum_size());
        fft_.forward(u.data(), spec.data());
    }
    void inverse(const std::vector<std::complex<double>>& spec, std::vector<double>& u) const {
        u.resize(static_cast<std::size_t>(n_));
        fft_.inverse(spec.data(), u.data());
    }

    /// Spectrum of F(u) = -u u_x given u in both representations; two
    /// transforms. The product spectrum is truncated at the cutoff and the
    /// Nyquist derivative dropped.
    void rhs_spectral(const std::vector<double>& u_phys, const std::vector<std::complex<double>>& u_spec,
                      std::vector<std::complex<double>>& w_spec) {
        const int m = n_ / 2;
        for (int k = 0; k < m; ++k)
            dspec_[static_cast<std::size_t>(k)] =
                std::complex<double>(0.0, M_PI * k) * u_spec[static_cast<std::size_t>(k)];
        dspec_[static_cast<std::size_t>(m)] = 0.0; // Nyquist derivative dropped
        fft_.inverse(dspec_.data(), ux_.data());
        for (int j = 0; j < n_; ++j)
            prod_[static_cast<std::size_t>(j)] =
                -u_phys[static_cast<std::size_t>(j)] * ux_[static_cast<std::size_t>(j)];
        w_spec.resize(fft_.spectrum_size());
        fft_.forward(prod_.data(), w_spec.data());
        for (int k = cutoff_ + 1; k <= m; ++k) w_spec[static_cast<std::size_t>(k)] = 0.0;
    }

    /// out = -u u_x. out may not alias u.
    void rhs(const std::vector<double>& u, std::vector<double>& out) {
        fft_.forward(u.data(), spec_.data());
        rhs_spectral(u, spec_, wspec_);
        out.resize(static_cast<std::size_t>(n_));
        fft_.inverse(wspec_.data(), out.data());
    }

  private:
    int n_;
    int cutoff_;
    RealFft fft_;
    std::vector<std::complex<double>> spec_, dspec_, wspec_;
    std::vector<double> ux_, prod_;
};

/// One evaluation of the de-aliased right-hand side as a grid-shaped field.
inline GridState burgers_rhs(const GridState& u, double dealias_fraction = 2.0 / 3.0) {
    u.validate();
    BurgersSolver solver(u.n, dealias_fraction);
    GridState out;
    out.n = u.n;
    out.time = u.time;
    solver.rhs(u.values, out.values);
    return out;
}

struct RunOutcome {
    enum class Status { stable, diverged };
    Status status = Status::stable;
    long steps_taken = 0;
    double final_tv = 0.0;
    std::optional<long> divergence_step;
};

struct BurgersConfig {
    double time_horizon = 1.0;
    double k_tv = 1.1;
    double dealias_fraction = 2.0 / 3.0;
    double dichotomy_accuracy = 0.005;
    enum class Bootstrap { rk4, exact } bootstrap = Bootstrap::rk4;
    double growth_constant = 1.0; // C in the thick-line bound, for bracket seeding
    int max_bracket_doublings = 20;
};

namespace detail {

inline SchemeSpec classical_rk4_tableau() {
    SchemeSpec s;
    s.kind = SchemeKind::explicit_tableau;
    s.name = "rk4";
    s.tableau_a = {{1.0}, {1.0, 0.0}, {1.0, 0.0, 0.0}, {1.0, 0.0, 0.0, 0.0}};
    s.tableau_b = {{0.5}, {0.0, 0.5}, {0.0, 0.0, 1.0}, {1.0 / 6.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 6.0}};
    return s;
}

} // namespace detail

/// Advances the solution with one scheme on one grid. The state is carried in
/// both physical and spectral form so every stage costs three transforms (the
/// stage combinations are linear and run in spectral space). Multistep
/// schemes keep their F-history as spectra; the first K steps of an
/// Adams-Bashforth run are bootstrapped with the classical RK4 tableau at the
/// same dt (or with exact samples when so configured).
class TimeStepper {
  public:
    using Spectrum = std::vector<std::complex<double>>;

    TimeStepper(const SchemeSpec& scheme, BurgersSolver& solver, BurgersConfig::Bootstrap bootstrap)
        : scheme_(scheme), solver_(solver), bootstrap_(bootstrap) {
        scheme_.validate();
        if (scheme_.kind == SchemeKind::explicit_tableau) {
            stage_spec_.resize(scheme_.tableau_a.size() + 1);
            stage_w_.resize(scheme_.tableau_a.size());
        }
    }

    /// One step from u (in place). dt = 0 leaves the state unchanged.
    void step(GridState& u, double dt) {
        if (dt == 0.0) return;
        if (!spec_valid_) {
            solver_.forward(u.values, ustate_);
            spec_valid_ = true;
        }
        switch (scheme_.kind) {
            case SchemeKind::rk_chain: chain_step(u, dt); break;
            case SchemeKind::explicit_tableau: tableau_step(u, dt); break;
            case SchemeKind::adams_bashforth: ab_step(u, dt); break;
        }
        u.time += dt;
    }

    void reset_history() {
        f_history_.clear();
        spec_valid_ = false;
    }

  private:
    void spectral_axpy(Spectrum& out, const Spectrum& base, double c, const Spectrum& w) const {
        out.resize(base.size());
        for (std::size_t k = 0; k < base.size(); ++k) out[k] = base[k] + c * w[k];
    }

    void chain_step(GridState& u, double dt) {
        const std::vector<double>& alphas = scheme_.rk_chain_alphas;
        vphys_ = u.values;
        vspec_ = ustate_;
        for (std::size_t j = alphas.size(); j-- > 0;) {
            solver_.rhs_spectral(vphys_, vspec_, w_);
            spectral_axpy(vspec_, ustate_, alphas[j] * dt, w_);
            solver_.inverse(vspec_, vphys_);
        }
        u.values.swap(vphys_);
        ustate_.swap(vspec_);
    }

    void tableau_step(GridState& u, double dt) {
        const std::size_t stages = scheme_.tableau_a.size();
        stage_spec_[0] = ustate_;
        solver_.rhs_spectral(u.values, stage_spec_[0], stage_w_[0]);
        for (std::size_t l = 1; l <= stages; ++l) {
            Spectrum& spec = stage_spec_[l];
            spec.assign(ustate_.size(), std::complex<double>(0.0, 0.0));
            for (std::size_t i = 0; i < l; ++i) {
                const double a = scheme_.tableau_a[l - 1][i];
                const double b = scheme_.tableau_b[l - 1][i] * dt;
                if (a == 0.0 && b == 0.0) continue;
                const Spectrum& si = stage_spec_[i];
                const Spectrum& wi = stage_w_[i];
                for (std::size_t k = 0; k < spec.size(); ++k) spec[k] += a * si[k] + b * wi[k];
            }
            solver_.inverse(spec, vphys_);
            if (l < stages) solver_.rhs_spectral(vphys_, spec, stage_w_[l]);
        }
        u.values.swap(vphys_);
        ustate_ = stage_spec_[stages];
    }

    void ab_step(GridState& u, double dt) {
        const std::size_t K = scheme_.ab_alphas.size() - 1;
        if (f_history_.size() < K) {
            // Bootstrap step: record the spectrum of F(u_n), then advance by
            // RK4 (or by exact samples); the mirror is refreshed afterwards.
            f_history_.emplace_front();
            solver_.rhs_spectral(u.values, ustate_, f_history_.front());
            if (bootstrap_ == BurgersConfig::Bootstrap::exact) {
                const double t1 = u.time + dt;
                for (int j = 0; j < u.n; ++j) u.values[static_cast<std::size_t>(j)] = exact_solution(u.node(j), t1);
            } else {
                if (!rk4_bootstrap_) rk4_bootstrap_ = std::make_unique<TimeStepper>(
                        detail::classical_rk4_tableau(), solver_, BurgersConfig::Bootstrap::rk4);
                const double t_saved = u.time;
                rk4_bootstrap_->step(u, dt);
                u.time = t_saved; // outer step() adds dt once
            }
            solver_.forward(u.values, ustate_);
            return;
        }
        f_history_.emplace_front();
        solver_.rhs_spectral(u.values, ustate_, f_history_.front());
        for (std::size_t k = 0; k <= K; ++k) {
            const double c = scheme_.ab_alphas[k] * dt;
            const Spectrum& wk = f_history_[k];
            for (std::size_t i = 0; i < ustate_.size(); ++i) ustate_[i] += c * wk[i];
        }
        solver_.inverse(ustate_, u.values);
        while (f_history_.size() > K) f_history_.pop_back();
    }

    SchemeSpec scheme_;
    BurgersSolver& solver_;
    BurgersConfig::Bootstrap bootstrap_;
    bool spec_valid_ = false;
    Spectrum ustate_, vspec_, w_;
    std::vector<double> vphys_;
    std::vector<Spectrum> stage_spec_, stage_w_;
    std::deque<Spectrum> f_history_;
    std::unique_ptr<TimeStepper> rk4_bootstrap_;
};

/// One step of the scheme given the available history, newest first.
/// Adams-Bashforth kinds require K+1 states; fewer is a contract violation.
inline GridState step(const std::vector<GridState>& history_newest_first, double dt,
                      const SchemeSpec& scheme, double dealias_fraction = 2.0 / 3.0) {
    if (history_newest_first.empty()) throw ContractError("step: empty history");
    if (dt < 0.0) throw ContractError("step: dt must be >= 0");
    const GridState& u = history_newest_first.front();
    u.validate();
    if (static_cast<int>(history_newest_first.size()) < scheme.history_depth())
        throw ContractError("step: scheme needs " + std::to_string(scheme.history_depth()) +
                            " history states, got " + std::to_string(history_newest_first.size()));
    BurgersSolver solver(u.n, dealias_fraction);
    GridState out = u;
    if (dt == 0.0) return out;
    if (scheme.kind == SchemeKind::adams_bashforth) {
        const std::size_t K = scheme.ab_alphas.size() - 1;
        std::vector<double> f;
        out.values = u.values;
        for (std::size_t k = 0; k <= K; ++k) {
            solver.rhs(history_newest_first[k].values, f);
            const double c = scheme.ab_alphas[k] * dt;
            for (std::size_t j = 0; j < out.values.size(); ++j) out.values[j] += c * f[j];
        }
        out.time = u.time + dt;
        return out;
    }
    TimeStepper stepper(scheme, solver, BurgersConfig::Bootstrap::rk4);
    stepper.step(out, dt);
    return out;
}

/// Runs until time T with the total-variation admissibility check
/// ||u_n||_TV <= K_tv ||u_0||_TV applied after every step. A violation or any
/// non-finite value counts as divergence (a result, not an error).
inline RunOutcome run_until(const GridState& u0, double T, double dt, const SchemeSpec& scheme,
                            double k_tv, const BurgersConfig& config = {}) {
    if (T <= 0.0) throw ContractError("run_until: T must be positive");
    if (dt <= 0.0) throw ContractError("run_until: dt must be positive");
    if (k_tv <= 1.0) throw ContractError("run_until: K_tv must exceed 1");
    u0.validate();

    BurgersSolver solver(u0.n, config.dealias_fraction);
    TimeStepper stepper(scheme, solver, config.bootstrap);
    GridState u = u0;
    const double tv0 = total_variation(u.values);
    const long steps = static_cast<long>(std::ceil(T / dt - 1e-12));
    RunOutcome out;
    for (long i = 0; i < steps; ++i) {
        const double this_dt = (i == steps - 1) ? T - dt * static_cast<double>(steps - 1) : dt;
        if (this_dt <= 0.0) break;
        stepper.step(u, this_dt);
        out.steps_taken = i + 1;
        const double tv = total_variation(u.values);
        out.final_tv = tv;
        if (!std::isfinite(tv) || tv > k_tv * tv0) {
            out.status = RunOutcome::Status::diverged;
            out.divergence_step = i + 1;
            return out;
        }
    }
    out.status = RunOutcome::Status::stable;
    return out;
}

namespace detail {

/// Extent of the stability domain along the imaginary axis, for seeding the
/// dichotomy bracket of schemes under a plain linear CFL condition.
inline double imaginary_axis_extent(const SchemeSpec& scheme) {
    const MultiplierMatrix mm = MultiplierMatrix::from_scheme(scheme);
    double lo = 0.0, hi = 8.0;
    if (spectral_radius(mm, cdouble(0.0, 1e-4)) > 1.0 + 1e-9) return 1e-4;
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (spectral_radius(mm, cdouble(0.0, mid)) <= 1.0 + 1e-9)
            lo = mid;
        else
            hi = mid;
    }
    return lo;
}

inline double predicted_dt(int n, const SchemeSpec& scheme, const BurgersConfig& config) {
    const double a = kMeanVelocity + kWaveAmplitude;
    const double dx = 2.0 / n;
    const StabilityPrediction p = classify_scheme(scheme, config.growth_constant);
    if (p.regime == Regime::shrinking_cfl)
        return *p.constant_factor * std::pow(dx / a, p.exponent->value());
    const int cutoff = static_cast<int>(config.dealias_fraction * (n / 2));
    return imaginary_axis_extent(scheme) / (a * M_PI * cutoff);
}

} // namespace detail

/// Largest stable time step on an n-point grid, located by dichotomy to the
/// configured relative accuracy. The search window starts at the theoretical
/// prediction scaled by [1/32, 32] and expands geometrically when
/// mis-bracketed; the returned value is the certified-stable lower end.
inline double find_dtmax(int n, const SchemeSpec& scheme, const BurgersConfig& config = {}) {
    const GridState u0 = initial_condition(n);
    const auto stable = [&](double dt) {
        return run_until(u0, config.time_horizon, dt, scheme, config.k_tv, config).status ==
               RunOutcome::Status::stable;
    };

    const double pred = detail::predicted_dt(n, scheme, config);
    double hi = 32.0 * pred;
    const double floor_dt = pred / 32.0 / std::pow(2.0, config.max_bracket_doublings);

    // Make the upper end unstable, expanding upward if the window was low.
    int expand = 0;
    while (stable(hi)) {
        hi *= 2.0;
        if (++expand > config.max_bracket_doublings)
            throw ConvergenceError("find_dtmax: no unstable dt found while expanding upward");
    }
    double lo = 0.0;
    if (expand > 0) {
        lo = hi / 2.0; // last stable probe
    } else {
        // Walk down from the unstable end; unstable probes fail fast.
        double probe = hi / 2.0;
        while (!stable(probe)) {
            hi = probe;
            probe /= 2.0;
            if (probe < floor_dt)
                throw ConvergenceError("find_dtmax: no stable dt found while expanding downward");
        }
        lo = probe;
    }

    while ((hi - lo) / lo > config.dichotomy_accuracy) {
        const double mid = 0.5 * (lo + hi);
        if (stable(mid))
            lo = mid;
        else
            hi = mid;
    }
    return lo;
}

struct SweepRow {
    int n = 0;
    double dt_max = 0.0;
    std::string error; // empty on success
};

struct SweepResult {
    std::string scheme_name;
    std::vector<SweepRow> rows;
    double fitted_slope = 0.0;
    double fitted_log_constant = 0.0;
    std::pair<int, int> fit_window{0, 0};
};

/// dt_max over a ladder of grid sizes plus the log-log slope fitted on the
/// upper half of the ladder (the asymptotic tail). Rows are independent and
/// may be computed by several worker threads.
inline SweepResult sweep(const std::vector<int>& n_list, const SchemeSpec& scheme,
                         const BurgersConfig& config = {}, int jobs = 1) {
    if (n_list.empty()) throw ContractError("sweep: empty n list");
    for (std::size_t i = 1; i < n_list.size(); ++i)
        if (n_list[i] <= n_list[i - 1]) throw ContractError("sweep: n list must be ascending");

    SweepResult result;
    result.scheme_name = scheme.name;
    result.rows.resize(n_list.size());

    std::atomic<std::size_t> next{0};
    const auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n_list.size()) return;
            SweepRow& row = result.rows[i];
            row.n = n_list[i];
            try {
                row.dt_max = find_dtmax(n_list[i], scheme, config);
            } catch (const Error& e) {
                row.error = e.what();
            }
        }
    };
    if (jobs <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }

    const std::size_t start = n_list.size() / 2;
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    int count = 0;
    for (std::size_t i = start; i < result.rows.size(); ++i) {
        if (!result.rows[i].error.empty()) continue;
        const double x = std::log(static_cast<double>(result.rows[i].n));
        const double y = std::log(result.rows[i].dt_max);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++count;
    }
    if (count >= 2) {
        const double denom = count * sxx - sx * sx;
        result.fitted_slope = (count * sxy - sx * sy) / denom;
        result.fitted_log_constant = (sy - result.fitted_slope * sx) / count;
    }
    result.fit_window = {n_list[start], n_list.back()};
    return result;
}

/// Sweep CSV: scheme, n, dt_max, predicted_exponent, fitted_slope, with the
/// fit summary repeated in a footer block.
inline std::string sweep_csv(const SweepResult& r, const Rational& predicted_exponent) {
    std::ostringstream out;
    out.precision(12);
    out << "scheme,n,dt_max,predicted_exponent,fitted_slope\n";
    for (const SweepRow& row : r.rows) {
        out << r.scheme_name << ',' << row.n << ',';
        if (row.error.empty())
            out << row.dt_max;
        else
            out << "error:" << row.error;
        out << ',' << predicted_exponent.str() << ',' << r.fitted_slope << '\n';
    }
    out << "# fitted_slope=" << r.fitted_slope << " fitted_log_constant=" << r.fitted_log_constant
        << " fit_window=" << r.fit_window.first << ".." << r.fit_window.second << '\n';
    return out.str();
}

/// Profile snapshot CSV: x, u.
inline std::string grid_csv(const GridState& u) {
    std::ostringstream out;
    out.precision(15);
    out << "x,u\n";
    for (int j = 0; j < u.n; ++j) out << u.node(j) << ',' << u.values[static_cast<std::size_t>(j)] << '\n';
    return out.str();
}

} // namespace cfllab
