// cfl-lab: stability analysis, scheme synthesis, domain tracing and Burgers
// sweeps for explicit time integrators on convection-dominated problems.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "cfllab/burgers.hpp"
#include "cfllab/catalog.hpp"
#include "cfllab/certificate.hpp"
#include "cfllab/scheme.hpp"
#include "cfllab/svg.hpp"

namespace fs = std::filesystem;
using namespace cfllab;

namespace {

constexpr const char* kUsage = R"(usage: cfl-lab <command> [options] [names...]

commands:
  analyze       print stability certificates for schemes (catalog names or files)
  construct     synthesize the chain and modified Adams-Bashforth families
  domain        trace stability-domain boundaries to CSV + SVG, fit tangencies
  burgers-sweep measure dt_max(N) on the periodic Burgers problem
  transport     stencil spectra, tangencies and combined CFL exponents
  report        one-stop summary of analyses, constructions and tangency fits

options:
  --scheme a,b,c     scheme list (catalog names or scheme files)
  --n-min N          smallest grid size of the sweep ladder   [16]
  --n-max N          largest grid size of the sweep ladder    [1024]
  --time-horizon T   integration horizon of each probe run    [1.0]
  --k-tv K           total-variation divergence factor        [1.1]
  --dealias F        dealiasing fraction of the product modes [0.6667]
  --tolerance E      dichotomy relative accuracy              [0.005]
  --points N         boundary trace resolution                [4096]
  --snapshot N       dump profiles at 0.97/1.00/1.03 dt_max on an N grid
  --jobs J           worker threads for sweep rows            [1]
  --out-dir D        output directory                         [cfl-lab-out]
  --config FILE      key=value defaults for the options above

exit codes: 0 success, 1 usage, 2 input parse, 3 numerical failure
)";

struct Options {
    std::string command;
    std::vector<std::string> names;
    std::vector<int> ladder;
    int n_min = 16;
    int n_max = 1024;
    int points = 4096;
    int jobs = 1;
    int snapshot_n = 0; // when set, dump profiles at 0.97/1.00/1.03 dt_max
    std::string out_dir = "cfl-lab-out";
    BurgersConfig burgers;
};

int parse_int(const std::string& s) {
    std::size_t used = 0;
    const int v = std::stoi(s, &used);
    if (used != s.size()) throw ParseError("not an integer: " + s);
    return v;
}

double parse_double(const std::string& s) {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw ParseError("not a number: " + s);
    return v;
}

void apply_key(Options& opt, const std::string& key, const std::string& value) {
    if (key == "scheme" || key == "schemes") {
        std::istringstream in(value);
        std::string tok;
        while (std::getline(in, tok, ','))
            if (!tok.empty()) opt.names.push_back(tok);
    } else if (key == "n-min" || key == "n_min") {
        opt.n_min = parse_int(value);
    } else if (key == "n-max" || key == "n_max") {
        opt.n_max = parse_int(value);
    } else if (key == "time-horizon" || key == "time_horizon" || key == "T") {
        opt.burgers.time_horizon = parse_double(value);
    } else if (key == "k-tv" || key == "k_tv") {
        opt.burgers.k_tv = parse_double(value);
    } else if (key == "dealias" || key == "dealias_fraction") {
        opt.burgers.dealias_fraction = parse_double(value);
    } else if (key == "tolerance" || key == "dichotomy_accuracy") {
        opt.burgers.dichotomy_accuracy = parse_double(value);
    } else if (key == "bootstrap") {
        if (value == "rk4")
            opt.burgers.bootstrap = BurgersConfig::Bootstrap::rk4;
        else if (value == "exact")
            opt.burgers.bootstrap = BurgersConfig::Bootstrap::exact;
        else
            throw ParseError("bootstrap must be rk4 or exact, got '" + value + "'");
    } else if (key == "points") {
        opt.points = parse_int(value);
    } else if (key == "snapshot") {
        opt.snapshot_n = parse_int(value);
    } else if (key == "jobs") {
        opt.jobs = parse_int(value);
    } else if (key == "out-dir" || key == "out_dir") {
        opt.out_dir = value;
    } else {
        throw ParseError("unknown option '" + key + "'");
    }
}

void load_config_file(Options& opt, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open config file '" + path + "'");
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::string trimmed;
        for (char ch : line)
            if (!std::isspace(static_cast<unsigned char>(ch))) trimmed += ch;
        if (trimmed.empty()) continue;
        const auto eq = trimmed.find('=');
        if (eq == std::string::npos)
            throw ParseError("config line " + std::to_string(lineno) + ": expected key=value");
        apply_key(opt, trimmed.substr(0, eq), trimmed.substr(eq + 1));
    }
}

Options parse_args(int argc, char** argv) {
    if (argc < 2) throw std::invalid_argument("missing command");
    Options opt;
    opt.command = argv[1];
    std::vector<std::pair<std::string, std::string>> flag_values;
    for (int i = 2; i < argc; ++i) {
        std::string arg = argv[i];
        if (arg.rfind("--", 0) == 0) {
            const std::string key = arg.substr(2);
            if (i + 1 >= argc) throw std::invalid_argument("flag " + arg + " needs a value");
            flag_values.emplace_back(key, argv[++i]);
        } else {
            opt.names.push_back(arg);
        }
    }
    // Config file first so explicit flags override it.
    for (const auto& [key, value] : flag_values)
        if (key == "config") load_config_file(opt, value);
    for (const auto& [key, value] : flag_values)
        if (key != "config") apply_key(opt, key, value);
    if (const char* env = std::getenv("CFL_LAB_OUT"); env && *env) opt.out_dir = env;

    for (int n = opt.n_min; n <= opt.n_max; n *= 2) opt.ladder.push_back(n);
    if (opt.ladder.empty()) throw std::invalid_argument("empty grid ladder");
    return opt;
}

/// A named scheme argument is either a catalog name or a path to a catalog
/// file holding one or more scheme records.
std::vector<CatalogEntry> resolve_schemes(const std::vector<std::string>& names) {
    std::vector<CatalogEntry> out;
    for (const std::string& name : names) {
        if (fs::exists(name) && fs::is_regular_file(name)) {
            std::ifstream in(name);
            for (SchemeSpec& s : parse_catalog(in)) {
                CatalogEntry e;
                e.name = s.name;
                e.multiplier = MultiplierMatrix::from_scheme(s);
                e.scheme = std::move(s);
                out.push_back(std::move(e));
            }
        } else {
            out.push_back(catalog_lookup(name));
        }
    }
    return out;
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    out << content;
}

std::string analyze_csv(const CatalogEntry& e) {
    std::ostringstream csv;
    csv.precision(15);
    if (e.scheme && e.scheme->kind != SchemeKind::adams_bashforth) {
        const AmplificationPolynomial g = amplification(*e.scheme);
        const std::vector<double> S = energy_coefficients(g);
        csv << "l,beta_l,S_l\n";
        for (std::size_t l = 0; l < g.betas.size(); ++l)
            csv << l << ',' << g.betas[l] << ',' << (l < S.size() ? S[l] : 0.0) << '\n';
    } else if (e.scheme) {
        const std::vector<double> t = ab_tangency(e.scheme->ab_alphas, 10);
        const StabilityPrediction p = classify_scheme(*e.scheme);
        csv << "l,alpha_or_T,S_l\n";
        for (std::size_t l = 0; l < std::max(t.size(), p.energy_coeffs.size()); ++l) {
            csv << l << ',';
            if (l < t.size()) csv << t[l];
            csv << ',';
            if (l < p.energy_coeffs.size()) csv << p.energy_coeffs[l];
            csv << '\n';
        }
    }
    return csv.str();
}

int cmd_analyze(const Options& opt) {
    if (opt.names.empty()) throw std::invalid_argument("analyze: no schemes given");
    fs::create_directories(opt.out_dir);
    for (const CatalogEntry& e : resolve_schemes(opt.names)) {
        if (!e.scheme) {
            // Multiplier-matrix-only entry: report via the traced tangency.
            const DomainBoundary b = trace_boundary(e.multiplier, opt.points);
            const TangencyFit fit = fit_tangency(b);
            std::cout << "== " << e.name << " (multiplier matrix) ==\n"
                      << "tangency: r = " << fit.r << ", T_" << 2 * fit.r << " = " << fit.t2r
                      << (fit.t2r > 0 ? "  (right-oriented: linear CFL at best)" : "") << "\n\n";
            continue;
        }
        std::cout << analysis_certificate(*e.scheme) << '\n';
        write_file(fs::path(opt.out_dir) / (e.name + "_analysis.csv"), analyze_csv(e));
    }
    return 0;
}

int cmd_construct(const Options& opt) {
    fs::create_directories(opt.out_dir);
    std::ostringstream catalog, certificates;
    const bool chains = opt.names.empty() || opt.names[0] == "chains" || opt.names[0] == "all";
    const bool abs = opt.names.empty() || opt.names[0] == "ab" || opt.names[0] == "all";
    if (chains) {
        for (int m = 1; m <= 7; ++m) {
            const ConstructedScheme c = build_rk_chain(m);
            catalog << format_scheme(c.scheme) << '\n';
            certificates << make_certificate(c) << '\n';
        }
        const ConstructedScheme s5 = build_taylor_chain(3, 5);
        catalog << format_scheme(s5.scheme) << '\n';
        certificates << make_certificate(s5) << '\n';
    }
    if (abs) {
        for (int K = 1; K <= 4; ++K) {
            const ConstructedScheme c = build_modified_ab(K);
            catalog << format_scheme(c.scheme) << '\n';
            certificates << make_certificate(c) << '\n';
        }
    }
    write_file(fs::path(opt.out_dir) / "constructed_schemes.txt", catalog.str());
    write_file(fs::path(opt.out_dir) / "certificates.txt", certificates.str());
    std::cout << certificates.str();
    std::cout << "wrote " << (fs::path(opt.out_dir) / "constructed_schemes.txt").string() << '\n';
    return 0;
}

int cmd_domain(const Options& opt) {
    if (opt.names.empty()) throw std::invalid_argument("domain: no schemes given");
    fs::create_directories(opt.out_dir);
    std::vector<DomainBoundary> boundaries;
    std::ostringstream summary;
    for (const CatalogEntry& e : resolve_schemes(opt.names)) {
        DomainBoundary b = trace_boundary(e.multiplier, opt.points);
        write_file(fs::path(opt.out_dir) / (e.name + "_boundary.csv"), boundary_csv(b));
        summary << e.name << ": ";
        try {
            const TangencyFit fit = fit_tangency(b);
            summary << "tangency r = " << fit.r << ", T_" << 2 * fit.r << " = " << fit.t2r;
            if (fit.t2r > 0.0) summary << "  (oriented to the right)";
        } catch (const TraceError& err) {
            summary << "tangency fit: " << err.what();
        }
        summary << '\n';
        boundaries.push_back(std::move(b));
    }
    write_file(fs::path(opt.out_dir) / "domains.svg", render_svg(boundaries));
    write_file(fs::path(opt.out_dir) / "tangency_summary.txt", summary.str());
    std::cout << summary.str();
    std::cout << "wrote " << (fs::path(opt.out_dir) / "domains.svg").string() << '\n';
    return 0;
}

/// Profile snapshots at 0.97, 1.00 and 1.03 times dt_max, run with the
/// loose divergence factor K = 5 so the blown-up profile is visible.
void write_snapshots(const Options& opt, const CatalogEntry& e) {
    BurgersConfig cfg = opt.burgers;
    cfg.k_tv = 5.0;
    const double dtmax = find_dtmax(opt.snapshot_n, *e.scheme, cfg);
    for (double factor : {0.97, 1.0, 1.03}) {
        const double dt = factor * dtmax;
        GridState u = initial_condition(opt.snapshot_n);
        BurgersSolver solver(opt.snapshot_n, cfg.dealias_fraction);
        TimeStepper stepper(*e.scheme, solver, cfg.bootstrap);
        const long steps = static_cast<long>(std::ceil(cfg.time_horizon / dt));
        for (long i = 0; i < steps; ++i) {
            const double this_dt = (i == steps - 1) ? cfg.time_horizon - dt * (steps - 1) : dt;
            if (this_dt <= 0.0) break;
            stepper.step(u, this_dt);
            bool finite = true;
            for (double v : u.values)
                if (!std::isfinite(v)) finite = false;
            if (!finite) break;
        }
        std::ostringstream fname;
        fname << e.name << "_n" << opt.snapshot_n << "_dt" << factor << "_profile.csv";
        write_file(fs::path(opt.out_dir) / fname.str(), grid_csv(u));
    }
    std::cout << e.name << ": profile snapshots at n = " << opt.snapshot_n << " (dt_max = " << dtmax
              << ", K = 5)\n";
}

int cmd_sweep(const Options& opt) {
    if (opt.names.empty()) throw std::invalid_argument("burgers-sweep: no schemes given");
    fs::create_directories(opt.out_dir);
    std::vector<SweepResult> results;
    for (const CatalogEntry& e : resolve_schemes(opt.names)) {
        if (!e.scheme) {
            std::cout << e.name << ": not steppable, skipped\n";
            continue;
        }
        if (opt.snapshot_n > 0) {
            write_snapshots(opt, e);
            continue;
        }
        const StabilityPrediction p = classify_scheme(*e.scheme);
        const Rational exponent = p.regime == Regime::shrinking_cfl ? *p.exponent : Rational(1, 1);
        SweepResult r = sweep(opt.ladder, *e.scheme, opt.burgers, opt.jobs);
        write_file(fs::path(opt.out_dir) / (e.name + "_sweep.csv"), sweep_csv(r, exponent));
        std::cout << e.name << ": fitted slope " << r.fitted_slope << " (predicted -" << exponent.str()
                  << "), window n = " << r.fit_window.first << ".." << r.fit_window.second << '\n';
        results.push_back(std::move(r));
    }
    if (!results.empty()) write_file(fs::path(opt.out_dir) / "sweep.svg", render_sweep_svg(results));
    return 0;
}

int cmd_transport(const Options& opt) {
    fs::create_directories(opt.out_dir);
    std::vector<Stencil> stencils;
    if (opt.names.empty())
        stencils = stencil_catalog();
    else
        for (const std::string& n : opt.names) stencils.push_back(stencil_lookup(n));

    std::ostringstream summary;
    for (const Stencil& st : stencils) {
        const SymbolCurve c = stencil_symbol(st, std::max(64, opt.points / 8));
        write_file(fs::path(opt.out_dir) / (st.label + "_symbol.csv"), symbol_csv(c));
        const StencilTangency t = stencil_tangency(st);
        summary << st.label << ": ";
        if (t.p_infinite) {
            summary << "p = inf (purely imaginary spectrum)";
        } else {
            summary << "p = " << t.p << ", V_" << 2 * t.p << " = " << t.v2p;
        }
        summary << "; combined exponents vs q=1..4:";
        for (int q = 1; q <= 4; ++q) {
            const CombinedCondition cc = combined_exponent(t, q);
            if (cc.unconditionally_unstable)
                summary << " unstable";
            else
                summary << ' ' << cc.exponent.str();
        }
        summary << '\n';
    }
    // Multi-component reduction demo: the 1-D wave system.
    SystemSpec wave;
    wave.matrices = {Mat(2, {0.0, 1.0, 1.0, 0.0})};
    summary << "wave system [[0,1],[1,0]]: a_eff = " << reduce_system(wave).a_eff << '\n';
    write_file(fs::path(opt.out_dir) / "transport_summary.txt", summary.str());
    std::cout << summary.str();
    return 0;
}

int cmd_report(const Options& opt) {
    fs::create_directories(opt.out_dir);
    std::ostringstream report;
    report << "cfl-lab report\n==============\n\n-- catalog analyses --\n\n";
    for (const std::string& name : catalog_names()) {
        const CatalogEntry e = catalog_lookup(name);
        if (e.scheme) report << analysis_certificate(*e.scheme) << '\n';
    }
    report << "-- synthesized schemes --\n\n";
    for (int m = 1; m <= 7; ++m) report << make_certificate(build_rk_chain(m)) << '\n';
    report << make_certificate(build_taylor_chain(3, 5)) << '\n';
    for (int K = 1; K <= 4; ++K) report << make_certificate(build_modified_ab(K)) << '\n';

    report << "-- boundary tangencies (fit vs prediction) --\n\n";
    for (const std::string& name : catalog_names()) {
        const CatalogEntry e = catalog_lookup(name);
        if (e.scheme) {
            const StabilityPrediction p = classify_scheme(*e.scheme);
            if (p.regime != Regime::shrinking_cfl || *p.r > 4) continue;
            const TangencyFit fit = fit_tangency(trace_boundary(e.multiplier, opt.points));
            const double sr = p.energy_coeffs[static_cast<std::size_t>(*p.r)];
            report << name << ": fit r = " << fit.r << ", T = " << fit.t2r << ", -S_r/2 = " << -sr / 2.0
                   << '\n';
        } else {
            const TangencyFit fit = fit_tangency(trace_boundary(e.multiplier, opt.points));
            report << name << ": fit r = " << fit.r << ", T = " << fit.t2r << " (right-oriented)\n";
        }
    }
    write_file(fs::path(opt.out_dir) / "report.txt", report.str());
    std::cout << "wrote " << (fs::path(opt.out_dir) / "report.txt").string() << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        const Options opt = parse_args(argc, argv);
        if (opt.command == "analyze") return cmd_analyze(opt);
        if (opt.command == "construct") return cmd_construct(opt);
        if (opt.command == "domain") return cmd_domain(opt);
        if (opt.command == "burgers-sweep") return cmd_sweep(opt);
        if (opt.command == "transport") return cmd_transport(opt);
        if (opt.command == "report") return cmd_report(opt);
        std::cerr << "unknown command '" << opt.command << "'\n" << kUsage;
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n" << kUsage;
        return 1;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return 2;
    } catch (const Error& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
}
