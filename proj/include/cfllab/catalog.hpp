#pragma once

#include <string>
#include <vector>

#include "cfllab/errors.hpp"
#include "cfllab/scheme.hpp"
#include "cfllab/scheme_constructor.hpp"
#include "cfllab/stability_domain.hpp"
#include "cfllab/transport_models.hpp"

namespace cfllab {

/// A built-in integrator. Every entry carries a multiplier matrix; entries
/// that are expressible as a SchemeSpec (everything except pseudo-leap-frog)
/// also carry the scheme and can be time-stepped.
struct CatalogEntry {
    std::string name;
    std::string description;
    std::optional<SchemeSpec> scheme;
    MultiplierMatrix multiplier;
};

namespace detail {

inline SchemeSpec chain(const std::string& name, std::vector<double> alphas) {
    SchemeSpec s;
    s.kind = SchemeKind::rk_chain;
    s.name = name;
    s.rk_chain_alphas = std::move(alphas);
    return s;
}

inline SchemeSpec ab(const std::string& name, std::vector<double> alphas) {
    SchemeSpec s;
    s.kind = SchemeKind::adams_bashforth;
    s.name = name;
    s.ab_alphas = std::move(alphas);
    return s;
}

inline SchemeSpec ssp_rk3_tableau() {
    SchemeSpec s;
    s.kind = SchemeKind::explicit_tableau;
    s.name = "rk3";
    s.tableau_a = {{1.0}, {3.0 / 4.0, 1.0 / 4.0}, {1.0 / 3.0, 0.0, 2.0 / 3.0}};
    s.tableau_b = {{1.0}, {0.0, 1.0 / 4.0}, {0.0, 0.0, 2.0 / 3.0}};
    return s;
}

inline SchemeSpec rk4_tableau() {
    SchemeSpec s;
    s.kind = SchemeKind::explicit_tableau;
    s.name = "rk4";
    s.tableau_a = {{1.0}, {1.0, 0.0}, {1.0, 0.0, 0.0}, {1.0, 0.0, 0.0, 0.0}};
    s.tableau_b = {{0.5}, {0.0, 0.5}, {0.0, 0.0, 1.0}, {1.0 / 6.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 6.0}};
    return s;
}

} // namespace detail

inline std::vector<std::string> catalog_names() {
    return {"euler",  "rk2",    "rk3",    "rk4",    "rk5cm92", "ab2",    "ab3",    "ab4",
            "absch3", "absch4", "chain3", "chain4", "chain5",  "chain6", "chain7", "scheme5",
            "pseudo-leap-frog"};
}

/// Looks up a built-in scheme by name. chain5..chain7 are synthesized on
/// demand by the constructor; their coefficients are deterministic.
inline CatalogEntry catalog_lookup(const std::string& name) {
    CatalogEntry e;
    e.name = name;
    const auto from_scheme = [&](SchemeSpec s, std::string description) {
        e.description = std::move(description);
        e.multiplier = MultiplierMatrix::from_scheme(s);
        e.scheme = std::move(s);
        return e;
    };
    if (name == "euler" || name == "rk1")
        return from_scheme(detail::chain(name, {1.0}), "explicit Euler, order 1");
    if (name == "rk2")
        return from_scheme(detail::chain("rk2", {1.0, 0.5}), "midpoint Runge-Kutta, order 2");
    if (name == "rk3") return from_scheme(detail::ssp_rk3_tableau(), "SSP Runge-Kutta, order 3");
    if (name == "rk4") return from_scheme(detail::rk4_tableau(), "classical Runge-Kutta, order 4");
    if (name == "rk5cm92")
        return from_scheme(detail::chain("rk5cm92", {1.0, 0.5, 1.0 / 3.0, 0.25, 0.2, 3.0 / 32.0}),
                           "six-stage chain with the order-5 reference amplification factor");
    if (name == "ab2") return from_scheme(detail::ab("ab2", classical_ab_coefficients(2)), "Adams-Bashforth 2");
    if (name == "ab3") return from_scheme(detail::ab("ab3", classical_ab_coefficients(3)), "Adams-Bashforth 3");
    if (name == "ab4") return from_scheme(detail::ab("ab4", classical_ab_coefficients(4)), "Adams-Bashforth 4");
    if (name == "absch3" || name == "absch4" || name == "absch5") {
        const int K = name == "absch3" ? 2 : (name == "absch4" ? 3 : 4);
        ConstructedScheme c = build_modified_ab(K);
        c.scheme.name = name;
        return from_scheme(c.scheme, "modified Adams-Bashforth, maximal axis tangency");
    }
    if (name.rfind("chain", 0) == 0 && name.size() == 6 && name[5] >= '3' && name[5] <= '7') {
        const int m = name[5] - '0';
        ConstructedScheme c = build_rk_chain(m);
        c.scheme.name = name;
        return from_scheme(c.scheme, "two-storage chain, vanishing S_1..S_" + std::to_string(m - 1));
    }
    if (name == "scheme5") {
        ConstructedScheme c = build_taylor_chain(3, 5);
        c.scheme.name = "scheme5";
        return from_scheme(c.scheme, "five-stage chain of order 4, linear CFL");
    }
    if (name == "pseudo-leap-frog") {
        e.description = "two-step scheme with a right-oriented axis tangency";
        e.multiplier = MultiplierMatrix::pseudo_leap_frog();
        return e;
    }
    throw ParseError("unknown catalog scheme '" + name + "'");
}

/// Built-in differentiation stencils, oriented so that upwind variants carry
/// a nonpositive real symbol part.
inline std::vector<Stencil> stencil_catalog() {
    return {
        {{-1, 1}, {-0.5, 0.5}, "centered2"},
        {{-2, -1, 1, 2}, {1.0 / 12.0, -8.0 / 12.0, 8.0 / 12.0, -1.0 / 12.0}, "centered4"},
        {{0, 1}, {-1.0, 1.0}, "upwind1"},
        {{0, -1}, {1.0, -1.0}, "downwind1"},
        {{-1, 0, 1, 2}, {-1.0 / 3.0, -0.5, 1.0, -1.0 / 6.0}, "upwind3"},
        // One-sided four-point-order stencil; its spectrum leaves the stable
        // half plane away from the origin.
        {{0, -1, -2, -3, -4}, {25.0 / 12.0, -4.0, 3.0, -4.0 / 3.0, 0.25}, "upwind4"},
    };
}

inline Stencil stencil_lookup(const std::string& label) {
    for (Stencil& s : stencil_catalog())
        if (s.label == label) return s;
    throw ParseError("unknown catalog stencil '" + label + "'");
}

} // namespace cfllab
