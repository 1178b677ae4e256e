#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "pairedval/distributions.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace pairedval::dist;

using testing::oracle_pmf;
using testing::oracle_sf;

TEST_CASE("normal cdf and quantile") {
    CHECK(normal_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(normal_cdf(1.959963984540054) == doctest::Approx(0.975).epsilon(1e-13));
    CHECK(normal_cdf(-1.6448536269514722) == doctest::Approx(0.05).epsilon(1e-13));
    CHECK(normal_sf(8.0) == doctest::Approx(6.220960574271785e-16).epsilon(1e-10));
    CHECK(normal_quantile(0.95) == doctest::Approx(1.6448536269514722).epsilon(1e-14));
    CHECK(normal_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-14));
    CHECK(normal_quantile(0.5) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK_THROWS_AS(normal_quantile(0.0), std::domain_error);
    CHECK_THROWS_AS(normal_quantile(1.0), std::domain_error);
    CHECK_THROWS_AS(normal_quantile(-0.2), std::domain_error);
}

TEST_CASE("normal cdf agrees with std::erfc and quantile round-trips") {
    testing::Gen g(5);
    for (int i = 0; i < 2000; ++i) {
        const double z = g.real(-9.0, 9.0);
        CHECK(normal_cdf(z) == doctest::Approx(0.5 * std::erfc(-z / std::sqrt(2.0))).epsilon(1e-13));
        CHECK(normal_cdf(z) + normal_sf(z) == doctest::Approx(1.0).epsilon(1e-15));
        const double p = g.real(1e-12, 1.0 - 1e-12);
        CHECK(normal_cdf(normal_quantile(p)) == doctest::Approx(p).epsilon(1e-12));
    }
}

TEST_CASE("chi-squared one degree of freedom") {
    CHECK(chi2_1_survival(0.0) == 1.0);
    CHECK(chi2_1_survival(3.841458820694124) == doctest::Approx(0.05).epsilon(1e-12));
    CHECK(chi2_1_survival(7.7) == doctest::Approx(0.00552).epsilon(0.02));
    CHECK(chi2_1_survival(23.4) < 2e-6);
    // Equivalent to a two-sided normal tail.
    for (double z : {0.3, 1.0, 2.5, 5.0}) {
        CHECK(chi2_1_survival(z * z) == doctest::Approx(2.0 * normal_sf(z)).epsilon(1e-13));
    }
}

TEST_CASE("monotonicity") {
    double prev_cdf = 0.0, prev_chi = 1.0;
    for (double z = -10.0; z <= 10.0; z += 0.01) {
        CHECK(normal_cdf(z) >= prev_cdf);
        prev_cdf = normal_cdf(z);
        if (z > 0.0) {
            CHECK(chi2_1_survival(z * 5.0) <= prev_chi);
            prev_chi = chi2_1_survival(z * 5.0);
        }
    }
}

TEST_CASE("log_gamma against std::lgamma") {
    testing::Gen g(6);
    for (int i = 0; i < 2000; ++i) {
        const double x = std::exp(g.real(std::log(1e-3), std::log(1e6)));
        CHECK(log_gamma(x) == doctest::Approx(std::lgamma(x)).epsilon(1e-12).scale(1.0));
    }
    CHECK(log_gamma(1.0) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(log_gamma(5.0) == doctest::Approx(std::log(24.0)).epsilon(1e-14));
}

TEST_CASE("binomial examples") {
    CHECK(binomial_sf(7, 7, 0.5) == doctest::Approx(1.0 / 128.0).epsilon(1e-13));
    CHECK(binomial_sf(12, 13, 0.5) == doctest::Approx(14.0 / 8192.0).epsilon(1e-13));
    CHECK(binomial_cdf(10, 13, 12.0 / 13.0) == doctest::Approx(0.014).epsilon(0.07));
    CHECK(binomial_cdf(14, 13, 0.3) == 1.0);
    CHECK(binomial_cdf(0, 13, 0.3) == 0.0);
    CHECK(binomial_sf(0, 13, 0.3) == 1.0);
    CHECK(binomial_pmf(0, 10, 0.0) == 1.0);
    CHECK(binomial_pmf(10, 10, 1.0) == 1.0);
    CHECK(binomial_pmf(3, 10, 1.0) == 0.0);
}

TEST_CASE("binomial kernels match long double direct summation") {
    testing::Gen g(7);
    for (int i = 0; i < 3000; ++i) {
        const std::int64_t n = g.integer(1, 100);
        const std::int64_t x = g.integer(0, n);
        const double p = g.coin(0.1) ? 0.5 : g.real(0.001, 0.999);
        const long double want_pmf = oracle_pmf(x, n, p);
        const long double want_sf = oracle_sf(x, n, p);
        if (want_pmf > 1e-300L) CHECK(binomial_pmf(x, n, p) == doctest::Approx(double(want_pmf)).epsilon(1e-9));
        if (want_sf > 1e-300L) CHECK(binomial_sf(x, n, p) == doctest::Approx(double(want_sf)).epsilon(1e-9));
        const long double want_cdf = testing::oracle_cdf(x, n, p);
        if (want_cdf > 1e-300L) CHECK(binomial_cdf(x, n, p) == doctest::Approx(double(want_cdf)).epsilon(1e-9));
    }
}

TEST_CASE("binomial identities") {
    testing::Gen g(8);
    for (int i = 0; i < 1000; ++i) {
        const std::int64_t n = g.integer(1, 3000);
        const std::int64_t x = g.integer(0, n);
        const double p = g.real(0.0, 1.0);
        CHECK(binomial_sf(x, n, p) + binomial_cdf(x, n, p) == doctest::Approx(1.0).epsilon(1e-12));
        // X ~ B(n, p) mirrors n - X ~ B(n, 1 - p).
        CHECK(binomial_pmf(x, n, p) == doctest::Approx(binomial_pmf(n - x, n, 1.0 - p)).epsilon(1e-10).scale(1e-300));
        if (x > 0) CHECK(binomial_sf(x, n, p) <= binomial_sf(x - 1, n, p));
        CHECK(binomial_sf(x, n, 0.5) == doctest::Approx(binomial_cdf(n - x + 1, n, 0.5)).epsilon(1e-12).scale(1e-300));
    }
    // Sum of the pmf is one.
    double s = 0.0;
    for (std::int64_t k = 0; k <= 500; ++k) s += binomial_pmf(k, 500, 0.37);
    CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
}
