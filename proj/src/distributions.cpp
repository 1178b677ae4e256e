#include "pairedval/distributions.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace pairedval::dist {

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double normal_sf(double z) { return 0.5 * std::erfc(z / std::numbers::sqrt2); }

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw std::domain_error("normal_quantile: p must lie in (0, 1), got " + std::to_string(p));
    }
    // Acklam's rational approximation (relative error ~1.15e-9) ...
    static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                   -2.759285104469687e+02, 1.383577518672690e+02,
                                   -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                   -1.556989798598866e+02, 6.680131188771972e+01,
                                   -1.328068155288572e+01};
    static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                   -2.400758277161838e+00, -2.549732539343734e+00,
                                   4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                   2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double p_low = 0.02425;
    constexpr double p_high = 1.0 - p_low;

    double x;
    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= p_high) {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log1p(-p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }

    // ... followed by one Halley step against the erfc-based CDF.
    const double e = (p < 0.5) ? normal_cdf(x) - p : (1.0 - p) - normal_sf(x);
    const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
    return x - u / (1.0 + 0.5 * x * u);
}

double chi2_1_survival(double x) {
    if (!(x >= 0.0)) throw std::domain_error("chi2_1_survival: x must be >= 0");
    return std::erfc(std::sqrt(0.5 * x));
}

double log_gamma(double x) {
    if (!(x > 0.0)) throw std::domain_error("log_gamma: x must be > 0");
    static constexpr double kG = 7.0;
    static constexpr double kCoeff[9] = {
        0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
        771.32342877765313,   -176.61502916214059,   12.507343278686905,
        -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
    if (x < 0.5) {
        return std::log(std::numbers::pi / std::sin(std::numbers::pi * x)) - log_gamma(1.0 - x);
    }
    x -= 1.0;
    double sum = kCoeff[0];
    for (int i = 1; i < 9; ++i) sum += kCoeff[i] / (x + i);
    const double t = x + kG + 0.5;
    return 0.5 * std::log(2.0 * std::numbers::pi) + (x + 0.5) * std::log(t) - t + std::log(sum);
}

namespace {

constexpr double kLogSqrt2Pi = 0.91893853320467274178;

// log(n!) - log(sqrt(2π n) (n/e)^n), the Stirling remainder.
double stirling_error(double n) {
    constexpr double s0 = 1.0 / 12.0;
    constexpr double s1 = 1.0 / 360.0;
    constexpr double s2 = 1.0 / 1260.0;
    constexpr double s3 = 1.0 / 1680.0;
    constexpr double s4 = 1.0 / 1188.0;
    if (n <= 15.0) {
        return log_gamma(n + 1.0) - (n + 0.5) * std::log(n) + n - kLogSqrt2Pi;
    }
    const double nn = n * n;
    if (n > 500.0) return (s0 - s1 / nn) / n;
    if (n > 80.0) return (s0 - (s1 - s2 / nn) / nn) / n;
    if (n > 35.0) return (s0 - (s1 - (s2 - s3 / nn) / nn) / nn) / n;
    return (s0 - (s1 - (s2 - (s3 - s4 / nn) / nn) / nn) / nn) / n;
}

// x log(x / np) + np - x, evaluated by series when x is close to np.
double deviance(double x, double np) {
    if (std::abs(x - np) < 0.1 * (x + np)) {
        double v = (x - np) / (x + np);
        double s = (x - np) * v;
        double ej = 2.0 * x * v;
        v *= v;
        for (int j = 1; j < 1000; ++j) {
            ej *= v;
            const double s1 = s + ej / (2 * j + 1);
            if (s1 == s) return s1;
            s = s1;
        }
    }
    return x * std::log(x / np) + np - x;
}

void check_binomial_args(std::int64_t n, double p) {
    if (n < 1) throw std::domain_error("binomial: n must be >= 1");
    if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("binomial: p must lie in [0, 1]");
}

// Sum of pmf over [lo, hi], smallest terms first.
double pmf_sum(std::int64_t lo, std::int64_t hi, std::int64_t n, double p, bool ascending) {
    double s = 0.0;
    if (ascending) {
        for (std::int64_t k = lo; k <= hi; ++k) s += binomial_pmf(k, n, p);
    } else {
        for (std::int64_t k = hi; k >= lo; --k) s += binomial_pmf(k, n, p);
    }
    return s;
}

}  // namespace

double binomial_pmf(std::int64_t k, std::int64_t n, double p) {
    check_binomial_args(n, p);
    if (k < 0 || k > n) return 0.0;
    const double q = 1.0 - p;
    if (p == 0.0) return k == 0 ? 1.0 : 0.0;
    if (q == 0.0) return k == n ? 1.0 : 0.0;
    const double nd = static_cast<double>(n);
    if (k == 0) {
        const double lc = (p < 0.1) ? -deviance(nd, nd * q) - nd * p : nd * std::log(q);
        return std::exp(lc);
    }
    if (k == n) {
        const double lc = (q < 0.1) ? -deviance(nd, nd * p) - nd * q : nd * std::log(p);
        return std::exp(lc);
    }
    const double kd = static_cast<double>(k);
    const double lc = stirling_error(nd) - stirling_error(kd) - stirling_error(nd - kd) -
                      deviance(kd, nd * p) - deviance(nd - kd, nd * q);
    const double lf = 2.0 * kLogSqrt2Pi + std::log(kd) + std::log1p(-kd / nd);
    return std::exp(lc - 0.5 * lf);
}

double binomial_sf(std::int64_t x, std::int64_t n, double p) {
    check_binomial_args(n, p);
    if (x < 0 || x > n) throw std::domain_error("binomial_sf: x must lie in [0, n]");
    if (x == 0) return 1.0;
    // Sum the tail that does not contain the bulk of the mass directly.
    if (static_cast<double>(x) > static_cast<double>(n) * p) {
        return pmf_sum(x, n, n, p, false);
    }
    return 1.0 - pmf_sum(0, x - 1, n, p, true);
}

double binomial_cdf(std::int64_t x, std::int64_t n, double p) {
    check_binomial_args(n, p);
    if (x < 0 || x > n + 1) throw std::domain_error("binomial_cdf: x must lie in [0, n + 1]");
    if (x == 0) return 0.0;
    if (x == n + 1) return 1.0;
    if (static_cast<double>(x) > static_cast<double>(n) * p) {
        return 1.0 - pmf_sum(x, n, n, p, false);
    }
    return pmf_sum(0, x - 1, n, p, true);
}

}  // namespace pairedval::dist
