#pragma once

// Self-contained distribution kernels. All functions are pure and reentrant.

#include <cstdint>

namespace pairedval::dist {

// Standard normal CDF, absolute error below 1e-15 over the real line.
double normal_cdf(double z);

// Upper tail 1 - Φ(z) without cancellation for large z.
double normal_sf(double z);

// Inverse of normal_cdf. Throws std::domain_error unless 0 < p < 1.
double normal_quantile(double p);

// P(X >= x) for X ~ chi-squared with one degree of freedom.
double chi2_1_survival(double x);

// Lanczos approximation (g = 7, 9 coefficients). Requires x > 0.
double log_gamma(double x);

// P(X = k) for X ~ B(n, p), evaluated with the saddle-point deviance form.
double binomial_pmf(std::int64_t k, std::int64_t n, double p);

// P(X >= x). Requires 0 <= x <= n and n >= 1.
double binomial_sf(std::int64_t x, std::int64_t n, double p);

// P(X < x) = 1 - binomial_sf(x, n, p). Accepts x = n + 1 (returns 1).
double binomial_cdf(std::int64_t x, std::int64_t n, double p);

}  // namespace pairedval::dist
