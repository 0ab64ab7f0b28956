#pragma once

// Scalar special functions used by the statistical layer: regularized
// incomplete gamma (series + continued fraction), chi-square tail/quantile,
// and normal tail/quantile.  Self-contained so results are identical across
// platforms that share IEEE-754 doubles and libm log/exp.

#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <mutex>
#include <stdexcept>

namespace mrpp {

namespace detail {

// Regularized lower incomplete gamma P(a,x) by power series.
// Valid (fast) for x < a + 1.
inline double gamma_p_series(double a, double x) {
    if (x <= 0.0) return 0.0;
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int n = 0; n < 10000; ++n) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::fabs(del) < std::fabs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Regularized upper incomplete gamma Q(a,x) by Lentz continued fraction.
// Valid (fast) for x >= a + 1.
inline double gamma_q_cf(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 10000; ++i) {
        double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < 1e-16) break;
    }
    return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

} // namespace detail

// P(a,x): regularized lower incomplete gamma.
inline double gamma_p(double a, double x) {
    if (!(a > 0.0)) throw std::domain_error("gamma_p: a must be positive");
    if (x < 0.0) throw std::domain_error("gamma_p: x must be nonnegative");
    if (x == 0.0) return 0.0;
    if (x < a + 1.0) return detail::gamma_p_series(a, x);
    return 1.0 - detail::gamma_q_cf(a, x);
}

// Q(a,x) = 1 - P(a,x): regularized upper incomplete gamma.
inline double gamma_q(double a, double x) {
    if (!(a > 0.0)) throw std::domain_error("gamma_q: a must be positive");
    if (x < 0.0) throw std::domain_error("gamma_q: x must be nonnegative");
    if (x == 0.0) return 1.0;
    if (x < a + 1.0) return 1.0 - detail::gamma_p_series(a, x);
    return detail::gamma_q_cf(a, x);
}

// Chi-square survival function with dof degrees of freedom.
inline double chi2_sf(double x, int dof) {
    if (dof < 1) throw std::domain_error("chi2_sf: dof must be >= 1");
    if (x < 0.0) return 1.0;
    return gamma_q(0.5 * dof, 0.5 * x);
}

inline double chi2_cdf(double x, int dof) {
    if (dof < 1) throw std::domain_error("chi2_cdf: dof must be >= 1");
    if (x <= 0.0) return 0.0;
    return gamma_p(0.5 * dof, 0.5 * x);
}

// Chi-square quantile: smallest x with CDF(x) >= p, found by bracketed
// bisection on the monotone CDF.  Used through the cached wrapper below.
inline double chi2_quantile_uncached(double p, int dof) {
    if (dof < 1) throw std::domain_error("chi2_quantile: dof must be >= 1");
    if (!(p > 0.0 && p < 1.0)) throw std::domain_error("chi2_quantile: p must be in (0,1)");
    double lo = 0.0;
    double hi = dof + 10.0 * std::sqrt(2.0 * dof) + 50.0;
    while (chi2_cdf(hi, dof) < p) hi *= 2.0;
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (chi2_cdf(mid, dof) < p) lo = mid; else hi = mid;
    }
    return 0.5 * (lo + hi);
}

// Cached chi-square quantile.  Monte Carlo loops request the same (p, dof)
// pair millions of times; the cache is shared and guarded by a mutex.
inline double chi2_quantile(double p, int dof) {
    static std::map<std::pair<double, int>, double> cache;
    static std::mutex mu;
    const std::pair<double, int> key{p, dof};
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }
    double value = chi2_quantile_uncached(p, dof);
    {
        std::lock_guard<std::mutex> lock(mu);
        cache.emplace(key, value);
    }
    return value;
}

// Standard normal survival function.
inline double normal_sf(double z) {
    return 0.5 * std::erfc(z / std::sqrt(2.0));
}

inline double normal_cdf(double z) {
    return 0.5 * std::erfc(-z / std::sqrt(2.0));
}

// Standard normal quantile.  Acklam's rational approximation refined with
// one Halley step against erfc, giving ~1e-15 relative error.
inline double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw std::domain_error("normal_quantile: p must be in (0,1)");
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425;
    double x;
    if (p < plow) {
        double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - plow) {
        double q = p - 0.5;
        double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        double q = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    // Halley refinement: e = CDF(x) - p.
    double e = normal_cdf(x) - p;
    double u = e * std::sqrt(2.0 * M_PI) * std::exp(0.5 * x * x);
    x = x - u / (1.0 + 0.5 * x * u);
    return x;
}

// Inverse of erfc, via the normal quantile: erfc(x) = 2*normal_sf(x*sqrt(2)).
inline double erfc_inv(double y) {
    if (!(y > 0.0 && y < 2.0)) throw std::domain_error("erfc_inv: y must be in (0,2)");
    return -normal_quantile(0.5 * y) / std::sqrt(2.0);
}

} // namespace mrpp
