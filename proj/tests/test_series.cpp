#include "doctest.h"

#include <cmath>
#include <complex>

#include "cfllab/polynomial.hpp"
#include "cfllab/truncated_series.hpp"
#include "test_helpers.hpp"

using namespace cfllab;

namespace {

TruncatedSeries random_series(testutil::Lcg& rng, int T, cdouble first = {0.0, 0.0}) {
    TruncatedSeries s(T);
    s.coeff(0) = (first == cdouble(0.0, 0.0)) ? rng.complex_uniform() : first;
    for (int k = 1; k <= T; ++k) s.coeff(k) = rng.complex_uniform();
    return s;
}

} // namespace

TEST_CASE("series_mul matches hand values") {
    TruncatedSeries one_plus(2);
    one_plus.coeff(0) = 1.0;
    one_plus.coeff(1) = 1.0;
    const TruncatedSeries sq = series_mul(one_plus, one_plus);
    CHECK(std::abs(sq.coeff(0) - 1.0) < 1e-15);
    CHECK(std::abs(sq.coeff(1) - 2.0) < 1e-15);
    CHECK(std::abs(sq.coeff(2) - 1.0) < 1e-15);

    testutil::Lcg rng(7);
    const TruncatedSeries s = random_series(rng, 5);
    const TruncatedSeries id = TruncatedSeries::constant(1.0, 5);
    const TruncatedSeries p = series_mul(id, s);
    for (int k = 0; k <= 5; ++k) CHECK(std::abs(p.coeff(k) - s.coeff(k)) < 1e-15);
}

TEST_CASE("series_mul against brute-force convolution") {
    testutil::Lcg rng(11);
    const int T = 8;
    const TruncatedSeries a = random_series(rng, T);
    const TruncatedSeries b = random_series(rng, T);
    const TruncatedSeries c = series_mul(a, b);
    for (int k = 0; k <= T; ++k) {
        cdouble expect(0.0, 0.0);
        for (int i = 0; i <= T; ++i)
            for (int j = 0; j <= T; ++j)
                if (i + j == k) expect += a.coeff(i) * b.coeff(j);
        CHECK(std::abs(c.coeff(k) - expect) < 1e-14);
    }
}

TEST_CASE("series_mul rejects mismatched truncation orders") {
    CHECK_THROWS_AS(series_mul(TruncatedSeries(3), TruncatedSeries(4)), ContractError);
}

TEST_CASE("series_reciprocal") {
    const TruncatedSeries one = TruncatedSeries::constant(1.0, 6);
    const TruncatedSeries r1 = series_reciprocal(one);
    CHECK(std::abs(r1.coeff(0) - 1.0) < 1e-15);
    for (int k = 1; k <= 6; ++k) CHECK(std::abs(r1.coeff(k)) < 1e-15);

    TruncatedSeries one_plus(6);
    one_plus.coeff(0) = 1.0;
    one_plus.coeff(1) = 1.0;
    const TruncatedSeries geo = series_reciprocal(one_plus);
    for (int k = 0; k <= 6; ++k) CHECK(std::abs(geo.coeff(k) - ((k % 2 == 0) ? 1.0 : -1.0)) < 1e-14);

    testutil::Lcg rng(13);
    const TruncatedSeries a = random_series(rng, 8, cdouble(2.0, 0.0));
    const TruncatedSeries prod = series_mul(a, series_reciprocal(a));
    CHECK(std::abs(prod.coeff(0) - 1.0) < 1e-13);
    for (int k = 1; k <= 8; ++k) CHECK(std::abs(prod.coeff(k)) < 1e-13);

    CHECK_THROWS_AS(series_reciprocal(TruncatedSeries(4)), SingularError);
}

TEST_CASE("exp_i_theta coefficients") {
    const TruncatedSeries z = exp_i_theta(0.0, 5);
    CHECK(std::abs(z.coeff(0) - 1.0) < 1e-15);
    for (int k = 1; k <= 5; ++k) CHECK(std::abs(z.coeff(k)) < 1e-15);

    const TruncatedSeries e1 = exp_i_theta(1.0, 4);
    CHECK(std::abs(e1.coeff(0) - cdouble(1.0, 0.0)) < 1e-15);
    CHECK(std::abs(e1.coeff(1) - cdouble(0.0, 1.0)) < 1e-15);
    CHECK(std::abs(e1.coeff(2) - cdouble(-0.5, 0.0)) < 1e-15);
    CHECK(std::abs(e1.coeff(3) - cdouble(0.0, -1.0 / 6.0)) < 1e-15);
    CHECK(std::abs(e1.coeff(4) - cdouble(1.0 / 24.0, 0.0)) < 1e-15);

    const TruncatedSeries em2 = exp_i_theta(-2.0, 6);
    double factorial = 1.0;
    cdouble power(1.0, 0.0);
    for (int k = 0; k <= 6; ++k) {
        if (k > 0) {
            factorial *= k;
            power *= cdouble(0.0, -2.0);
        }
        CHECK(std::abs(em2.coeff(k) - power / factorial) < 1e-14);
    }
}

TEST_CASE("series_root_newton on the two-step multiplier polynomial") {
    // P(Y) = Y^2 - (1 + (3/2) zeta) Y + zeta/2, root with Y(0) = 1.
    const int T = 8;
    std::vector<TruncatedSeries> cs(3, TruncatedSeries(T));
    cs[0].coeff(1) = 0.5;
    cs[1].coeff(0) = -1.0;
    cs[1].coeff(1) = -1.5;
    cs[2].coeff(0) = 1.0;
    const TruncatedSeries y = series_root_newton(cs, cdouble(1.0, 0.0), T);
    const double expect[5] = {1.0, 1.0, 0.5, -0.25, -0.125};
    for (int k = 0; k <= 4; ++k) {
        CHECK(std::abs(y.coeff(k).real() - expect[k]) < 1e-12);
        CHECK(std::abs(y.coeff(k).imag()) < 1e-12);
    }
}

TEST_CASE("series_root_newton on a linear polynomial") {
    const int T = 5;
    std::vector<TruncatedSeries> cs(2, TruncatedSeries(T));
    cs[0].coeff(0) = -1.0;
    cs[0].coeff(1) = -1.0; // -(1 + zeta)
    cs[1].coeff(0) = 1.0;
    const TruncatedSeries y = series_root_newton(cs, cdouble(1.0, 0.0), T);
    CHECK(std::abs(y.coeff(0) - 1.0) < 1e-14);
    CHECK(std::abs(y.coeff(1) - 1.0) < 1e-14);
    for (int k = 2; k <= T; ++k) CHECK(std::abs(y.coeff(k)) < 1e-13);
}

TEST_CASE("series_root_newton matches a dense root-finder along a zeta ray") {
    // Three-step multiplier polynomial of the classical order-3 coefficients:
    // P(X) = X^3 - X^2 - zeta (a0 X^2 + a1 X + a2).
    const double a0 = 23.0 / 12.0, a1 = -16.0 / 12.0, a2 = 5.0 / 12.0;
    const int T = 12;
    std::vector<TruncatedSeries> cs(4, TruncatedSeries(T));
    cs[0].coeff(1) = -a2;
    cs[1].coeff(1) = -a1;
    cs[2].coeff(0) = -1.0;
    cs[2].coeff(1) = -a0;
    cs[3].coeff(0) = 1.0;
    const TruncatedSeries y = series_root_newton(cs, cdouble(1.0, 0.0), T);

    for (double s : {0.002, 0.005, 0.01}) {
        const cdouble zeta(0.0, -s);
        // Dense oracle: all roots of the numeric polynomial, nearest to 1.
        std::vector<cdouble> pc{-a2 * zeta, -a1 * zeta, -1.0 - a0 * zeta, 1.0};
        cdouble nearest(0.0, 0.0);
        double best = 1e300;
        for (const cdouble& r : all_roots(pc)) {
            if (std::abs(r - 1.0) < best) {
                best = std::abs(r - 1.0);
                nearest = r;
            }
        }
        cdouble series_val(0.0, 0.0);
        cdouble zp(1.0, 0.0);
        for (int k = 0; k <= T; ++k) {
            series_val += y.coeff(k) * zp;
            zp *= zeta;
        }
        CHECK(std::abs(series_val - nearest) < 1e-10);
    }
}

TEST_CASE("series_root_newton rejects a multiple root") {
    // P(Y) = (Y - 1)^2 = Y^2 - 2Y + 1 has a double root at 1.
    const int T = 4;
    std::vector<TruncatedSeries> cs(3, TruncatedSeries(T));
    cs[0].coeff(0) = 1.0;
    cs[1].coeff(0) = -2.0;
    cs[2].coeff(0) = 1.0;
    CHECK_THROWS_AS(series_root_newton(cs, cdouble(1.0, 0.0), T), SingularError);
}

TEST_CASE("series algebra properties") {
    testutil::Lcg rng(23);
    const int T = 10;
    for (int trial = 0; trial < 10; ++trial) {
        const TruncatedSeries a = random_series(rng, T);
        const TruncatedSeries b = random_series(rng, T);
        const TruncatedSeries c = random_series(rng, T);
        const TruncatedSeries ab = series_mul(a, b);
        const TruncatedSeries ba = series_mul(b, a);
        const TruncatedSeries abc1 = series_mul(ab, c);
        const TruncatedSeries abc2 = series_mul(a, series_mul(b, c));
        double scale = std::max({abc1.max_abs_coeff(), 1.0});
        for (int k = 0; k <= T; ++k) {
            CHECK(std::abs(ab.coeff(k) - ba.coeff(k)) < 1e-13 * scale);
            CHECK(std::abs(abc1.coeff(k) - abc2.coeff(k)) < 1e-13 * scale);
        }
        // reciprocal of reciprocal
        const TruncatedSeries a1 = random_series(rng, T, cdouble(1.5, 0.4));
        const TruncatedSeries rr = series_reciprocal(series_reciprocal(a1));
        for (int k = 0; k <= T; ++k) CHECK(std::abs(rr.coeff(k) - a1.coeff(k)) < 1e-12 * std::max(1.0, a1.max_abs_coeff()));
    }
}
