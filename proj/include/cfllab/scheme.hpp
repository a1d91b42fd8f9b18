#pragma once

#include <cmath>
#include <cstddef>
#include <istream>
#include <sstream>
#include <string>
#include <vector>

#include "cfllab/errors.hpp"

namespace cfllab {

enum class SchemeKind { rk_chain, explicit_tableau, adams_bashforth };

inline const char* to_string(SchemeKind k) {
    switch (k) {
        case SchemeKind::rk_chain: return "rk_chain";
        case SchemeKind::explicit_tableau: return "explicit_tableau";
        case SchemeKind::adams_bashforth: return "adams_bashforth";
    }
    return "?";
}

/// Executable description of an explicit integrator.
///
/// rk_chain: the nested two-storage family
///   u_{n+1} = u_n + a_1 dt F(u_n + a_2 dt F(... (u_n + a_p dt F(u_n)) ...))
/// explicit_tableau: stage form u_(l) = sum_i a[l][i] u_(i) + dt sum_i b[l][i] F(u_(i)),
///   rows strictly lower triangular (row l holds entries for i = 0..l-1).
/// adams_bashforth: u_{n+1} = u_n + dt sum_k alpha_k F(u_{n-k}).
struct SchemeSpec {
    SchemeKind kind = SchemeKind::rk_chain;
    std::string name;
    std::vector<double> rk_chain_alphas;
    std::vector<std::vector<double>> tableau_a;
    std::vector<std::vector<double>> tableau_b;
    std::vector<double> ab_alphas;

    int stages() const {
        switch (kind) {
            case SchemeKind::rk_chain: return static_cast<int>(rk_chain_alphas.size());
            case SchemeKind::explicit_tableau: return static_cast<int>(tableau_a.size());
            case SchemeKind::adams_bashforth: return 1;
        }
        return 0;
    }

    /// Number of previous states the scheme reads (K+1 for Adams-Bashforth).
    int history_depth() const {
        return kind == SchemeKind::adams_bashforth ? static_cast<int>(ab_alphas.size()) : 1;
    }

    void validate() const {
        const auto all_finite = [](const std::vector<double>& v) {
            for (double x : v)
                if (!std::isfinite(x)) return false;
            return true;
        };
        switch (kind) {
            case SchemeKind::rk_chain:
                if (rk_chain_alphas.empty()) throw ContractError("rk_chain: needs p >= 1 coefficients");
                if (!all_finite(rk_chain_alphas)) throw ContractError("rk_chain: non-finite coefficient");
                break;
            case SchemeKind::adams_bashforth:
                if (ab_alphas.empty()) throw ContractError("adams_bashforth: needs K >= 0, i.e. one coefficient");
                if (!all_finite(ab_alphas)) throw ContractError("adams_bashforth: non-finite coefficient");
                break;
            case SchemeKind::explicit_tableau:
                if (tableau_a.empty() || tableau_a.size() != tableau_b.size())
                    throw ContractError("explicit_tableau: a/b stage counts differ or empty");
                for (std::size_t l = 0; l < tableau_a.size(); ++l) {
                    if (tableau_a[l].size() != l + 1 || tableau_b[l].size() != l + 1)
                        throw ContractError("explicit_tableau: row " + std::to_string(l + 1) +
                                            " must have exactly " + std::to_string(l + 1) + " entries");
                    if (!all_finite(tableau_a[l]) || !all_finite(tableau_b[l]))
                        throw ContractError("explicit_tableau: non-finite coefficient");
                }
                break;
        }
    }
};

namespace detail {

/// Parses a decimal number or an exact fraction "p/q" to double.
inline double parse_coeff(const std::string& tok) {
    const auto slash = tok.find('/');
    try {
        std::size_t used = 0;
        if (slash == std::string::npos) {
            const double v = std::stod(tok, &used);
            if (used != tok.size()) throw ParseError("trailing characters in number: " + tok);
            return v;
        }
        const double num = std::stod(tok.substr(0, slash), &used);
        if (used != slash) throw ParseError("bad fraction numerator: " + tok);
        const std::string den_s = tok.substr(slash + 1);
        const double den = std::stod(den_s, &used);
        if (used != den_s.size()) throw ParseError("bad fraction denominator: " + tok);
        if (den == 0.0) throw ParseError("zero denominator: " + tok);
        return num / den;
    } catch (const ParseError&) {
        throw;
    } catch (const std::exception&) {
        throw ParseError("not a number: '" + tok + "'");
    }
}

inline std::vector<std::string> tokenize(const std::string& line) {
    std::vector<std::string> toks;
    std::istringstream in(line);
    std::string t;
    while (in >> t) toks.push_back(t);
    return toks;
}

} // namespace detail

/// Parses one catalog record. Format, one scheme per line:
///   rk_chain <name> <a1> <a2> ...
///   adams_bashforth <name> <alpha0> <alpha1> ...
///   explicit_tableau <name> <a-row> | <b-row> ; <a-row> | <b-row> ; ...
/// Coefficients are decimal strings or exact fractions "p/q".
inline SchemeSpec parse_scheme_line(const std::string& line) {
    const std::vector<std::string> toks = detail::tokenize(line);
    if (toks.size() < 3) throw ParseError("scheme record needs kind, name and coefficients: '" + line + "'");
    SchemeSpec s;
    s.name = toks[1];
    const std::string& kind = toks[0];
    if (kind == "rk_chain" || kind == "adams_bashforth") {
        s.kind = kind == "rk_chain" ? SchemeKind::rk_chain : SchemeKind::adams_bashforth;
        std::vector<double>& dst = kind == "rk_chain" ? s.rk_chain_alphas : s.ab_alphas;
        for (std::size_t i = 2; i < toks.size(); ++i) dst.push_back(detail::parse_coeff(toks[i]));
    } else if (kind == "explicit_tableau") {
        s.kind = SchemeKind::explicit_tableau;
        std::vector<double> a_row, b_row;
        bool in_b = false;
        const auto close_stage = [&]() {
            if (a_row.empty() && b_row.empty()) return;
            if (!in_b || a_row.size() != b_row.size())
                throw ParseError("tableau stage needs matching a and b rows: '" + line + "'");
            s.tableau_a.push_back(a_row);
            s.tableau_b.push_back(b_row);
            a_row.clear();
            b_row.clear();
            in_b = false;
        };
        for (std::size_t i = 2; i < toks.size(); ++i) {
            if (toks[i] == "|") {
                if (in_b) throw ParseError("duplicate '|' in tableau stage: '" + line + "'");
                in_b = true;
            } else if (toks[i] == ";") {
                close_stage();
            } else {
                (in_b ? b_row : a_row).push_back(detail::parse_coeff(toks[i]));
            }
        }
        close_stage();
    } else {
        throw ParseError("unknown scheme kind '" + kind + "'");
    }
    s.validate();
    return s;
}

/// Serializes a scheme to the single-line catalog format.
inline std::string format_scheme(const SchemeSpec& s) {
    std::ostringstream out;
    out.precision(17);
    out << to_string(s.kind) << ' ' << s.name;
    switch (s.kind) {
        case SchemeKind::rk_chain:
            for (double a : s.rk_chain_alphas) out << ' ' << a;
            break;
        case SchemeKind::adams_bashforth:
            for (double a : s.ab_alphas) out << ' ' << a;
            break;
        case SchemeKind::explicit_tableau:
            for (std::size_t l = 0; l < s.tableau_a.size(); ++l) {
                if (l > 0) out << " ;";
                for (double a : s.tableau_a[l]) out << ' ' << a;
                out << " |";
                for (double b : s.tableau_b[l]) out << ' ' << b;
            }
            break;
    }
    return out.str();
}

/// Parses a whole catalog stream; '#' starts a comment, blank lines skipped.
inline std::vector<SchemeSpec> parse_catalog(std::istream& in) {
    std::vector<SchemeSpec> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        if (detail::tokenize(line).empty()) continue;
        try {
            out.push_back(parse_scheme_line(line));
        } catch (const ParseError& e) {
            throw ParseError("line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return out;
}

} // namespace cfllab
