#pragma once

// Test-only normal CDF oracle, independent of the library implementation:
// the error function via its Maclaurin series, valid to ~1e-15 for the
// |z| <= 6 range the tests exercise.

#include <cmath>

namespace test_support {

inline double erf_series(double x) {
    const double two_over_sqrt_pi = 1.1283791670955125738961589031;
    double term = x;
    double sum = x;
    for (int k = 1; k < 200; ++k) {
        term *= -x * x / k;
        const double contribution = term / (2 * k + 1);
        sum += contribution;
        if (std::abs(contribution) < 1e-18 * std::abs(sum)) break;
    }
    return two_over_sqrt_pi * sum;
}

inline double oracle_normal_cdf(double z) {
    return 0.5 * (1.0 + erf_series(z / std::sqrt(2.0)));
}

// Bisection inverse of the oracle CDF.
inline double oracle_normal_quantile(double p) {
    double lo = -6.0, hi = 6.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (oracle_normal_cdf(mid) < p)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace test_support
