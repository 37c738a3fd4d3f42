#pragma once

namespace nd {

// Standard normal density.
double normal_pdf(double z);

// Standard normal CDF, evaluated with the classical power series around the
// origin and a continued fraction for the tails (absolute error well below
// 1e-12 everywhere).
double normal_cdf(double z);

// Quantile function: returns z with |normal_cdf(z) - p| <= 1e-9.
// Rational initial guess refined by Halley steps against normal_cdf.
// Requires p in (0, 1).
double inverse_normal_cdf(double p);

// Expected minimum of lambda draws from N(mu, sigma^2), via the
// plotting-position approximation
//
//   E[min] ~= mu + sigma * Phi^-1( (1 - alpha) / (lambda - 2*alpha + 1) )
//
// with compromise value alpha (default 0.375). lambda = 1 returns mu exactly.
struct OrderStatQuery {
    double mu = 0.0;
    double sigma = 1.0;
    int lambda = 1;
    double alpha = 0.375;
};

double expected_min_normal(const OrderStatQuery& query);

}  // namespace nd
