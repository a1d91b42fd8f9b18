#include "doctest.h"

#include <algorithm>
#include <complex>

#include "cfllab/polynomial.hpp"
#include "test_helpers.hpp"

using namespace cfllab;

TEST_CASE("RPoly arithmetic and evaluation") {
    const RPoly p({1.0, 2.0, 1.0}); // (1+x)^2
    const RPoly q = RPoly({1.0, 1.0}) * RPoly({1.0, 1.0});
    CHECK(p.degree() == 2);
    for (int k = 0; k <= 2; ++k) CHECK(p.coeff(k) == doctest::Approx(q.coeff(k)));
    CHECK(p.eval(3.0) == doctest::Approx(16.0));
    CHECK(p.derivative().eval(3.0) == doctest::Approx(8.0));
    const cdouble z = p.eval(cdouble(0.0, 1.0)); // (1+i)^2 = 2i
    CHECK(std::abs(z - cdouble(0.0, 2.0)) < 1e-14);
}

TEST_CASE("all_roots recovers a planted root set") {
    testutil::Lcg rng(42);
    for (int trial = 0; trial < 20; ++trial) {
        const int d = 2 + trial % 6;
        std::vector<cdouble> roots;
        for (int i = 0; i < d; ++i) roots.push_back(rng.complex_uniform(2.0));
        // Expand prod (x - r_i); coefficients come out with index = power.
        std::vector<cdouble> coeffs{1.0};
        for (const cdouble& r : roots) {
            std::vector<cdouble> next(coeffs.size() + 1, 0.0);
            for (std::size_t k = 0; k < coeffs.size(); ++k) {
                next[k + 1] += coeffs[k];
                next[k] -= r * coeffs[k];
            }
            coeffs = next;
        }
        std::vector<cdouble> found = all_roots(coeffs);
        REQUIRE(found.size() == roots.size());
        for (const cdouble& r : roots) {
            double best = 1e300;
            for (const cdouble& f : found) best = std::min(best, std::abs(f - r));
            CHECK(best < 1e-8);
        }
    }
}

TEST_CASE("all_roots handles a double root") {
    // (x-1)^2 (x+2)
    const std::vector<cdouble> c{2.0, -3.0, 0.0, 1.0};
    const std::vector<cdouble> roots = all_roots(c);
    REQUIRE(roots.size() == 3);
    int near_one = 0, near_neg2 = 0;
    for (const cdouble& r : roots) {
        if (std::abs(r - cdouble(1.0, 0.0)) < 1e-5) ++near_one;
        if (std::abs(r - cdouble(-2.0, 0.0)) < 1e-8) ++near_neg2;
    }
    CHECK(near_one == 2);
    CHECK(near_neg2 == 1);
}

TEST_CASE("real_roots filters and sorts") {
    // x^3 - x = x(x-1)(x+1)
    const std::vector<double> r = real_roots(RPoly({0.0, -1.0, 0.0, 1.0}));
    REQUIRE(r.size() == 3);
    CHECK(r[0] == doctest::Approx(-1.0));
    CHECK(r[1] == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(r[2] == doctest::Approx(1.0));
    // x^2 + 1 has no real roots.
    CHECK(real_roots(RPoly({1.0, 0.0, 1.0})).empty());
}

TEST_CASE("all_roots rejects the zero polynomial") {
    CHECK_THROWS_AS(all_roots({cdouble(0.0, 0.0)}), ContractError);
}
