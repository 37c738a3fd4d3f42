#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include "nd/splitter_spec.hpp"

namespace nd {

using BigInt = boost::multiprecision::cpp_int;

// Number of distinct nested dichotomies over n classes when splits are drawn
// uniformly over trees: T(n) = (2n-3) * T(n-1), T(1) = 1.
BigInt growth_random(int n);

// Number of distinct class-balanced nested dichotomies (side sizes differ by
// at most one at every node).
BigInt growth_balanced(int n);

// Empirical sample-space estimate for random-pair selection. The defining
// recurrence has non-integer arguments; they are rounded to the nearest
// integer and clamped to >= 1. The result is an estimate, not a count.
double growth_random_pair_estimate(int n);

// Exact binomial coefficient.
BigInt binomial(int n, int k);

enum class RemovalPolicy { None, IsolateSingleton, BalancedRemoval };
enum class GrowthMethod { Recurrence, Enumerate };

struct GrowthQuery {
    int n = 2;
    SplitStrategy strategy = SplitStrategy::Random;
    int lambda = 1;
    RemovalPolicy removal = RemovalPolicy::None;
    GrowthMethod method = GrowthMethod::Recurrence;
};

// Counts the nested dichotomies that remain constructible when, at every node
// with c classes, the lambda-1 splits assumed worst are excluded from the
// strategy's pool (but at least one split always survives). The removal
// policy fixes which splits are assumed worst:
//
//   IsolateSingleton — removal consumes singleton-isolating splits first,
//     then proceeds shape by shape towards balanced ones;
//   BalancedRemoval — removal consumes class-balanced splits first, then
//     proceeds towards singleton-isolating ones.
//
// For the balanced strategy every split has the same shape, so both policies
// coincide. lambda = 1 reproduces the unrestricted growth function.
//
// method = Enumerate materialises every constructible tree explicitly and
// counts distinct canonical forms; it is an independent check on the
// recurrence and is limited to n <= 8.
//
// Errors: RandomPair strategy (sample space is data-dependent), Enumerate
// with n > 8, and RemovalPolicy::None with lambda > 1 all raise UsageError.
BigInt growth_restricted(const GrowthQuery& query);

}  // namespace nd
