#include <doctest.h>

#include <cmath>
#include <vector>

#include "nd/errors.hpp"
#include "nd/growth.hpp"

using nd::BigInt;
using nd::GrowthMethod;
using nd::GrowthQuery;
using nd::RemovalPolicy;
using nd::SplitStrategy;

namespace {

GrowthQuery query(int n, SplitStrategy s, int lambda, RemovalPolicy r,
                  GrowthMethod m = GrowthMethod::Recurrence) {
    GrowthQuery q;
    q.n = n;
    q.strategy = s;
    q.lambda = lambda;
    q.removal = r;
    q.method = m;
    return q;
}

}  // namespace

TEST_CASE("unrestricted growth, uniform selection") {
    CHECK(nd::growth_random(1) == 1);
    CHECK(nd::growth_random(2) == 1);
    CHECK(nd::growth_random(3) == 3);
    CHECK(nd::growth_random(4) == 15);
    CHECK(nd::growth_random(5) == 105);
    CHECK(nd::growth_random(8) == 135135);
    CHECK(nd::growth_random(12) == BigInt("13749310575"));
    CHECK(nd::growth_random(26) ==
          BigInt("58435841445947272053455474390625"));  // product of odd numbers to 49
}

TEST_CASE("unrestricted growth, class-balanced selection") {
    const std::vector<long long> expected = {1,    1,      3,      3,       30,
                                             90,   315,    315,    11340,   113400,
                                             1247400, 3742200};
    for (int n = 1; n <= 12; ++n)
        CHECK(nd::growth_balanced(n) == expected[static_cast<std::size_t>(n - 1)]);
}

TEST_CASE("random-pair growth estimate") {
    CHECK(nd::growth_random_pair_estimate(1) == 1.0);
    CHECK(nd::growth_random_pair_estimate(2) == 1.0);
    // First recursive value is the polynomial itself: both factors are base cases.
    const double p3 = 0.3812 * 9 - 1.4979 * 3 + 2.9027;
    CHECK(nd::growth_random_pair_estimate(3) == doctest::Approx(p3).epsilon(1e-12));
    CHECK(nd::growth_random_pair_estimate(3) == doctest::Approx(1.8398).epsilon(1e-4));
    // n=4 recurses into arguments round(4/3)=1 and round(8/3)=3.
    const double p4 = 0.3812 * 16 - 1.4979 * 4 + 2.9027;
    CHECK(nd::growth_random_pair_estimate(4) ==
          doctest::Approx(p4 * p3).epsilon(1e-12));
    // Estimates grow monotonically past the base cases.
    for (int n = 4; n <= 12; ++n)
        CHECK(nd::growth_random_pair_estimate(n) >
              nd::growth_random_pair_estimate(n - 1));
}

TEST_CASE("restricted growth reference table, uniform selection") {
    // Rows n = 2..12; columns lambda = 3, 5, 7, 9.
    const long long singleton[11][4] = {
        {1, 1, 1, 1},
        {1, 1, 1, 1},
        {5, 3, 1, 1},
        {25, 13, 9, 7},
        {185, 81, 25, 23},
        {1625, 621, 249, 175},
        {17205, 5795, 1737, 1071},
        {210225, 63049, 17409, 10185},
        {2924025, 785913, 193137, 100569},
        {45535425, 11026537, 2395905, 1170729},
        {785158725, 171983907, 33875889, 15305913},
    };
    const long long balanced[11][4] = {
        {1, 1, 1, 1},
        {1, 1, 1, 1},
        {5, 3, 1, 1},
        {33, 21, 9, 7},
        {281, 177, 73, 59},
        {2825, 1773, 729, 587},
        {33141, 20595, 8409, 6767},
        {444033, 271737, 109137, 87817},
        {6700761, 4022217, 1582305, 1271297},
        {112525281, 66045753, 25335537, 20311969},
        {2082421093, 1192218291, 444257505, 355153337},
    };
    const int lambdas[4] = {3, 5, 7, 9};
    for (int n = 2; n <= 12; ++n) {
        for (int j = 0; j < 4; ++j) {
            CAPTURE(n);
            CAPTURE(lambdas[j]);
            CHECK(nd::growth_restricted(query(n, SplitStrategy::Random, lambdas[j],
                                              RemovalPolicy::IsolateSingleton)) ==
                  singleton[n - 2][j]);
            CHECK(nd::growth_restricted(query(n, SplitStrategy::Random, lambdas[j],
                                              RemovalPolicy::BalancedRemoval)) ==
                  balanced[n - 2][j]);
        }
    }
}

TEST_CASE("restricted growth reference table, class-balanced selection") {
    const long long expected[11][4] = {
        {1, 1, 1, 1}, {1, 1, 1, 1},    {1, 1, 1, 1},    {8, 6, 4, 2},
        {8, 6, 4, 2}, {33, 31, 29, 27}, {33, 31, 29, 27}, {992, 732, 480, 236},
        {7936, 4392, 1920, 472},        {29440, 16488, 7296, 1816},
        {29440, 16488, 7296, 1816},
    };
    const int lambdas[4] = {3, 5, 7, 9};
    for (int n = 2; n <= 12; ++n) {
        for (int j = 0; j < 4; ++j) {
            CAPTURE(n);
            CAPTURE(lambdas[j]);
            CHECK(nd::growth_restricted(query(n, SplitStrategy::Balanced, lambdas[j],
                                              RemovalPolicy::BalancedRemoval)) ==
                  expected[n - 2][j]);
            // Policy is irrelevant when every split has the same shape.
            CHECK(nd::growth_restricted(query(n, SplitStrategy::Balanced, lambdas[j],
                                              RemovalPolicy::IsolateSingleton)) ==
                  expected[n - 2][j]);
        }
    }
}

TEST_CASE("lambda = 1 reproduces the unrestricted growth functions") {
    for (int n = 1; n <= 12; ++n) {
        for (auto policy :
             {RemovalPolicy::None, RemovalPolicy::IsolateSingleton,
              RemovalPolicy::BalancedRemoval}) {
            CHECK(nd::growth_restricted(query(n, SplitStrategy::Random, 1, policy)) ==
                  nd::growth_random(n));
            CHECK(nd::growth_restricted(query(n, SplitStrategy::Balanced, 1, policy)) ==
                  nd::growth_balanced(n));
        }
    }
}

TEST_CASE("recurrence agrees with explicit enumeration") {
    for (int n = 2; n <= 6; ++n) {
        for (int lambda : {1, 3, 5, 7}) {
            for (auto strategy : {SplitStrategy::Random, SplitStrategy::Balanced}) {
                for (auto policy :
                     {RemovalPolicy::IsolateSingleton, RemovalPolicy::BalancedRemoval}) {
                    CAPTURE(n);
                    CAPTURE(lambda);
                    const BigInt rec = nd::growth_restricted(
                        query(n, strategy, lambda, policy, GrowthMethod::Recurrence));
                    const BigInt enu = nd::growth_restricted(
                        query(n, strategy, lambda, policy, GrowthMethod::Enumerate));
                    CHECK(rec == enu);
                }
            }
        }
    }
}

TEST_CASE("restricted growth is non-increasing in lambda") {
    for (int n = 2; n <= 10; ++n) {
        for (auto strategy : {SplitStrategy::Random, SplitStrategy::Balanced}) {
            for (auto policy :
                 {RemovalPolicy::IsolateSingleton, RemovalPolicy::BalancedRemoval}) {
                BigInt prev = nd::growth_restricted(query(n, strategy, 1, policy));
                for (int lambda = 2; lambda <= 9; ++lambda) {
                    const BigInt cur =
                        nd::growth_restricted(query(n, strategy, lambda, policy));
                    CHECK(cur <= prev);
                    CHECK(cur >= 1);
                    prev = cur;
                }
            }
        }
    }
}

TEST_CASE("shape decomposition identity for the uniform growth function") {
    // T(n) is the sum over split shapes of (#splits of that shape) * T(a) * T(b);
    // the uniform split sampler relies on this being exact.
    for (int n = 2; n <= 12; ++n) {
        BigInt sum = 0;
        for (int a = 1; a <= n / 2; ++a) {
            BigInt mult = nd::binomial(n, a);
            if (2 * a == n) mult /= 2;
            sum += mult * nd::growth_random(a) * nd::growth_random(n - a);
        }
        CHECK(sum == nd::growth_random(n));
    }
}

TEST_CASE("restricted growth input validation") {
    CHECK_THROWS_AS(nd::growth_restricted(query(5, SplitStrategy::RandomPair, 3,
                                                RemovalPolicy::IsolateSingleton)),
                    nd::UsageError);
    CHECK_THROWS_AS(nd::growth_restricted(
                        query(9, SplitStrategy::Random, 3,
                              RemovalPolicy::IsolateSingleton, GrowthMethod::Enumerate)),
                    nd::UsageError);
    CHECK_THROWS_AS(nd::growth_restricted(query(5, SplitStrategy::Random, 3,
                                                RemovalPolicy::None)),
                    nd::UsageError);
    CHECK_THROWS_AS(nd::growth_random(0), nd::UsageError);
}
