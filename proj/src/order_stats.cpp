#include "nd/order_stats.hpp"

#include <cmath>

#include "nd/errors.hpp"

namespace nd {

namespace {

constexpr double kSqrt2Pi = 2.506628274631000502415765284811;

// Power series Phi(z) = 1/2 + pdf(z) * sum_k z^(2k+1) / (1*3*...*(2k+1)),
// accurate for moderate |z|.
double cdf_series(double z) {
    double term = z;
    double sum = z;
    for (int k = 1; k < 500; ++k) {
        term *= z * z / (2 * k + 1);
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return 0.5 + normal_pdf(z) * sum;
}

// Continued fraction for the upper tail Q(z) = pdf(z) / (z + 1/(z + 2/(z + ...))),
// z > 0, evaluated backwards. Keeps full relative accuracy where the central
// series would cancel.
double tail_cf(double z) {
    double f = z + 260.0;
    for (int k = 260; k >= 1; --k) f = z + k / f;
    return normal_pdf(z) / f;
}

}  // namespace

double normal_pdf(double z) { return std::exp(-0.5 * z * z) / kSqrt2Pi; }

double normal_cdf(double z) {
    if (std::abs(z) <= 3.5) return cdf_series(z);
    const double tail = tail_cf(std::abs(z));
    return z > 0 ? 1.0 - tail : tail;
}

double inverse_normal_cdf(double p) {
    if (!(p > 0.0 && p < 1.0))
        throw UsageError("quantile argument must lie strictly between 0 and 1");

    // Acklam's rational approximation as the initial guess (|rel err| < 1.2e-9).
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
    const double p_low = 0.02425;
    double z;
    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        z = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - p_low) {
        const double q = p - 0.5;
        const double r = q * q;
        z = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log(1.0 - p));
        z = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }

    // Two Halley steps push the residual to the order of machine epsilon.
    for (int i = 0; i < 2; ++i) {
        const double e = normal_cdf(z) - p;
        const double u = e * kSqrt2Pi * std::exp(0.5 * z * z);
        z -= u / (1.0 + 0.5 * z * u);
    }
    return z;
}

double expected_min_normal(const OrderStatQuery& q) {
    if (q.sigma < 0.0) throw UsageError("sigma must be >= 0");
    if (q.lambda < 1) throw UsageError("lambda must be >= 1");
    if (q.alpha < 0.0 || q.alpha > 0.5)
        throw UsageError("alpha must lie in [0, 0.5]");
    if (q.lambda == 1) return q.mu;  // argument is exactly 1/2
    const double arg = (1.0 - q.alpha) / (q.lambda - 2.0 * q.alpha + 1.0);
    return q.mu + q.sigma * inverse_normal_cdf(arg);
}

}  // namespace nd
