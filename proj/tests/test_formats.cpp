#include "doctest.h"

#include <sstream>

#include "cfllab/catalog.hpp"
#include "cfllab/scheme.hpp"
#include "cfllab/svg.hpp"
#include "test_helpers.hpp"

using namespace cfllab;

namespace {

std::size_t count_occurrences(const std::string& text, const std::string& needle) {
    std::size_t count = 0, pos = 0;
    while ((pos = text.find(needle, pos)) != std::string::npos) {
        ++count;
        pos += needle.size();
    }
    return count;
}

} // namespace

TEST_CASE("scheme record parsing") {
    const SchemeSpec chain = parse_scheme_line("rk_chain rk2 1 1/2");
    CHECK(chain.kind == SchemeKind::rk_chain);
    CHECK(chain.name == "rk2");
    REQUIRE(chain.rk_chain_alphas.size() == 2);
    CHECK(chain.rk_chain_alphas[1] == doctest::Approx(0.5));

    const SchemeSpec ab = parse_scheme_line("adams_bashforth ab2 3/2 -0.5");
    CHECK(ab.kind == SchemeKind::adams_bashforth);
    CHECK(ab.ab_alphas[0] == doctest::Approx(1.5));

    const SchemeSpec tab = parse_scheme_line(
        "explicit_tableau rk3 1 | 1 ; 3/4 1/4 | 0 1/4 ; 1/3 0 2/3 | 0 0 2/3");
    CHECK(tab.kind == SchemeKind::explicit_tableau);
    REQUIRE(tab.tableau_a.size() == 3);
    CHECK(tab.tableau_a[1][0] == doctest::Approx(0.75));
    CHECK(tab.tableau_b[2][2] == doctest::Approx(2.0 / 3.0));

    CHECK_THROWS_AS(parse_scheme_line("rk_chain"), ParseError);
    CHECK_THROWS_AS(parse_scheme_line("mystery s 1 2"), ParseError);
    CHECK_THROWS_AS(parse_scheme_line("rk_chain s 1 x"), ParseError);
    CHECK_THROWS_AS(parse_scheme_line("rk_chain s 1/0"), ParseError);
    CHECK_THROWS_AS(parse_scheme_line("explicit_tableau t 1 ; 1 0 | 0 1"), ParseError);
}

TEST_CASE("scheme format round trip") {
    for (const char* name : {"euler", "rk2", "rk3", "rk4", "ab2", "absch3", "chain4"}) {
        const SchemeSpec s = catalog_lookup(name).scheme.value();
        const SchemeSpec back = parse_scheme_line(format_scheme(s));
        CHECK(back.kind == s.kind);
        CHECK(back.name == s.name);
        const AmplificationPolynomial ga = s.kind == SchemeKind::adams_bashforth
                                               ? AmplificationPolynomial{s.ab_alphas}
                                               : amplification(s);
        const AmplificationPolynomial gb = back.kind == SchemeKind::adams_bashforth
                                               ? AmplificationPolynomial{back.ab_alphas}
                                               : amplification(back);
        REQUIRE(ga.betas.size() == gb.betas.size());
        for (std::size_t i = 0; i < ga.betas.size(); ++i)
            CHECK(ga.betas[i] == doctest::Approx(gb.betas[i]).epsilon(1e-15));
    }
}

TEST_CASE("catalog stream parsing with comments") {
    std::istringstream in("# two schemes\nrk_chain euler 1\n\nadams_bashforth ab2 3/2 -1/2 # trailing\n");
    const std::vector<SchemeSpec> cat = parse_catalog(in);
    REQUIRE(cat.size() == 2);
    CHECK(cat[0].name == "euler");
    CHECK(cat[1].kind == SchemeKind::adams_bashforth);

    std::istringstream bad("rk_chain euler 1\nnonsense line here\n");
    CHECK_THROWS_WITH_AS(parse_catalog(bad), doctest::Contains("line 2"), ParseError);
}

TEST_CASE("catalog entries are well formed") {
    for (const std::string& name : catalog_names()) {
        const CatalogEntry e = catalog_lookup(name);
        CHECK(e.name == name);
        CHECK(e.multiplier.dim >= 1);
        if (e.scheme) CHECK_NOTHROW(e.scheme->validate());
        if (name == "pseudo-leap-frog") CHECK_FALSE(e.scheme.has_value());
    }
    // rk1 is an accepted alias for the explicit Euler entry.
    const CatalogEntry rk1 = catalog_lookup("rk1");
    CHECK(rk1.scheme->rk_chain_alphas == std::vector<double>{1.0});
    CHECK_THROWS_AS(catalog_lookup("no-such-scheme"), ParseError);
}

TEST_CASE("catalog regimes match the established classification") {
    const auto regime = [](const char* n) { return classify_scheme(*catalog_lookup(n).scheme).regime; };
    CHECK(regime("euler") == Regime::shrinking_cfl);
    CHECK(regime("rk2") == Regime::shrinking_cfl);
    CHECK(regime("rk3") == Regime::linear_cfl);
    CHECK(regime("rk4") == Regime::linear_cfl);
    CHECK(regime("rk5cm92") == Regime::shrinking_cfl);
    CHECK(regime("ab2") == Regime::shrinking_cfl);
    CHECK(regime("ab3") == Regime::linear_cfl);
    CHECK(regime("ab4") == Regime::linear_cfl);
    CHECK(regime("absch3") == Regime::shrinking_cfl);
    CHECK(regime("absch4") == Regime::shrinking_cfl);
    CHECK(regime("scheme5") == Regime::linear_cfl);
}

TEST_CASE("boundary CSV structure") {
    const DomainBoundary b = trace_boundary(catalog_lookup("euler").multiplier, 64);
    const std::string csv = boundary_csv(b);
    CHECK(csv.rfind("theta,re_zeta,im_zeta,branch_id\n", 0) == 0);
    CHECK(count_occurrences(csv, "\n") >= 65);
}

TEST_CASE("domain SVG structure") {
    const DomainBoundary euler = trace_boundary(catalog_lookup("euler").multiplier, 128);
    const std::string one = render_svg({euler});
    CHECK(count_occurrences(one, "<path") == 1);
    CHECK(count_occurrences(one, "class=\"legend\"") == 1);

    std::vector<DomainBoundary> four;
    for (const char* n : {"euler", "rk2", "rk3", "rk4"})
        four.push_back(trace_boundary(catalog_lookup(n).multiplier, 128));
    const std::string svg = render_svg(four);
    CHECK(count_occurrences(svg, "class=\"legend\"") == 4);

    // AB4 renders at least two branches; the loops right of the axis are not
    // part of the stability region.
    const DomainBoundary ab4 = trace_boundary(catalog_lookup("ab4").multiplier, 256);
    const std::string svg4 = render_svg({ab4});
    CHECK(count_occurrences(svg4, "<path") >= 1);

    const DomainBoundary plf = trace_boundary(catalog_lookup("pseudo-leap-frog").multiplier, 128);
    CHECK(plf.branches.size() == 2);
    CHECK(count_occurrences(render_svg({plf}), "<path") == 2);

    CHECK_THROWS_AS(render_svg({}), ContractError);
}

TEST_CASE("sweep SVG carries the five guide slopes") {
    SweepResult r;
    r.scheme_name = "euler";
    r.rows = {{16, 1e-2, ""}, {32, 2.5e-3, ""}, {64, 6.2e-4, ""}};
    r.fitted_slope = -2.0;
    const std::string svg = render_sweep_svg({r});
    for (const char* slope : {"-2", "-4/3", "-6/5", "-8/7", "-1"})
        CHECK(count_occurrences(svg, std::string("data-slope=\"") + slope + "\"") == 1);
}

TEST_CASE("sweep and grid CSV") {
    SweepResult r;
    r.scheme_name = "rk2";
    r.rows = {{16, 1e-2, ""}, {32, 4e-3, ""}};
    r.fitted_slope = -4.0 / 3.0;
    r.fit_window = {16, 32};
    const std::string csv = sweep_csv(r, Rational(4, 3));
    CHECK(csv.rfind("scheme,n,dt_max,predicted_exponent,fitted_slope\n", 0) == 0);
    CHECK(count_occurrences(csv, "rk2,") == 2);
    CHECK(count_occurrences(csv, "4/3") >= 2);
    CHECK(count_occurrences(csv, "# fitted_slope=") == 1);

    const std::string gcsv = grid_csv(initial_condition(16));
    CHECK(gcsv.rfind("x,u\n", 0) == 0);
    CHECK(count_occurrences(gcsv, "\n") == 17);
}
