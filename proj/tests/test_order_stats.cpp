#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "nd/errors.hpp"
#include "nd/order_stats.hpp"
#include "nd/rng.hpp"
#include "support/normal_oracle.hpp"

namespace {

nd::OrderStatQuery osq(double mu, double sigma, int lambda, double alpha = 0.375) {
    nd::OrderStatQuery q;
    q.mu = mu;
    q.sigma = sigma;
    q.lambda = lambda;
    q.alpha = alpha;
    return q;
}

// Box-Muller standard normals, independent of the quantile code under test.
double sample_standard_normal(nd::Rng& rng) {
    const double u1 = 1.0 - rng.next_double();
    const double u2 = rng.next_double();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

double monte_carlo_min_mean(int lambda, int samples, std::uint64_t seed) {
    nd::Rng rng(seed);
    double total = 0.0;
    for (int s = 0; s < samples; ++s) {
        double best = sample_standard_normal(rng);
        for (int j = 1; j < lambda; ++j)
            best = std::min(best, sample_standard_normal(rng));
        total += best;
    }
    return total / samples;
}

}  // namespace

TEST_CASE("normal cdf matches the series oracle") {
    // The Maclaurin oracle itself cancels badly past |z| ~ 3.5; deep tails are
    // pinned against reference values below instead.
    for (double z = -3.4; z <= 3.4; z += 0.093) {
        CHECK(nd::normal_cdf(z) ==
              doctest::Approx(test_support::oracle_normal_cdf(z)).epsilon(1e-12));
    }
    CHECK(nd::normal_cdf(0.0) == 0.5);
    CHECK(nd::normal_cdf(-6.0) == doctest::Approx(9.865876450377012e-10).epsilon(1e-12));
    CHECK(nd::normal_cdf(-4.5) == doctest::Approx(3.3976731247300615e-06).epsilon(1e-12));
    CHECK(nd::normal_cdf(4.5) == doctest::Approx(0.9999966023268753).epsilon(1e-15));
    CHECK(nd::normal_cdf(6.0) == doctest::Approx(0.9999999990134123).epsilon(1e-15));
    CHECK(nd::normal_cdf(40.0) == 1.0);
    CHECK(nd::normal_cdf(-40.0) == 0.0);
    // Complement symmetry.
    for (double z = 0.1; z < 7.0; z += 0.41)
        CHECK(nd::normal_cdf(z) + nd::normal_cdf(-z) ==
              doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("quantile function basics") {
    CHECK(nd::inverse_normal_cdf(0.5) == 0.0);
    CHECK(nd::inverse_normal_cdf(0.975) ==
          doctest::Approx(test_support::oracle_normal_quantile(0.975)).epsilon(1e-9));
    CHECK(nd::inverse_normal_cdf(0.975) == doctest::Approx(1.959964).epsilon(1e-5));
    CHECK(nd::inverse_normal_cdf(0.025) == doctest::Approx(-1.959964).epsilon(1e-5));
    CHECK_THROWS_AS(nd::inverse_normal_cdf(0.0), nd::UsageError);
    CHECK_THROWS_AS(nd::inverse_normal_cdf(1.0), nd::UsageError);
    CHECK_THROWS_AS(nd::inverse_normal_cdf(-0.3), nd::UsageError);
}

TEST_CASE("quantile round trip on the milli-grid") {
    for (int i = 1; i <= 999; ++i) {
        const double p = i / 1000.0;
        const double z = nd::inverse_normal_cdf(p);
        CHECK(std::abs(nd::normal_cdf(z) - p) <= 1e-9);
    }
}

TEST_CASE("expected minimum: identities") {
    CHECK(nd::expected_min_normal(osq(0.3, 0.05, 1)) == 0.3);
    CHECK(nd::expected_min_normal(osq(-2.5, 1.7, 1, 0.0)) == -2.5);
    CHECK(nd::expected_min_normal(osq(0.7, 0.0, 9)) == 0.7);
    for (double alpha = 0.0; alpha <= 0.5; alpha += 0.05)
        CHECK(nd::expected_min_normal(osq(1.25, 2.0, 1, alpha)) == 1.25);
}

TEST_CASE("expected minimum: reference value and shape") {
    // mu=0, sigma=1, lambda=2, alpha=0.375: quantile of 0.625/2.25.
    CHECK(nd::expected_min_normal(osq(0.0, 1.0, 2)) ==
          doctest::Approx(-0.5894).epsilon(2e-4));
    double prev = nd::expected_min_normal(osq(0.0, 1.0, 1));
    for (int lambda = 2; lambda <= 12; ++lambda) {
        const double cur = nd::expected_min_normal(osq(0.0, 1.0, lambda));
        CHECK(cur < prev);
        prev = cur;
    }
    CHECK_THROWS_AS(nd::expected_min_normal(osq(0.0, -1.0, 2)), nd::UsageError);
    CHECK_THROWS_AS(nd::expected_min_normal(osq(0.0, 1.0, 0)), nd::UsageError);
    CHECK_THROWS_AS(nd::expected_min_normal(osq(0.0, 1.0, 2, 0.75)), nd::UsageError);
}

TEST_CASE("expected minimum tracks Monte Carlo for small lambda") {
    // The full lambda sweep at 1e6 samples lives in the acceptance suite.
    for (int lambda : {2, 5}) {
        const double mc = monte_carlo_min_mean(lambda, 200000, 9001 + lambda);
        CHECK(std::abs(nd::expected_min_normal(osq(0.0, 1.0, lambda)) - mc) < 0.05);
    }
}
