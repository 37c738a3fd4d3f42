#include "nd/growth.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <string>
#include <unordered_set>
#include <vector>

#include "nd/errors.hpp"

namespace nd {

BigInt growth_random(int n) {
    if (n < 1) throw UsageError("class count must be >= 1");
    BigInt t = 1;
    for (int k = 2; k <= n; ++k) t *= 2 * k - 3;
    return t;
}

BigInt binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    BigInt result = 1;
    for (int i = 1; i <= k; ++i) {
        result *= n - k + i;
        result /= i;
    }
    return result;
}

BigInt growth_balanced(int n) {
    if (n < 1) throw UsageError("class count must be >= 1");
    std::vector<BigInt> t(static_cast<std::size_t>(n) + 1);
    for (int c = 1; c <= n; ++c) {
        if (c <= 2) {
            t[c] = 1;
        } else if (c % 2 == 0) {
            t[c] = binomial(c, c / 2) / 2 * t[c / 2] * t[c / 2];
        } else {
            t[c] = binomial(c, (c + 1) / 2) * t[(c + 1) / 2] * t[(c - 1) / 2];
        }
    }
    return t[n];
}

namespace {

double random_pair_polynomial(int n) {
    return 0.3812 * n * n - 1.4979 * n + 2.9027;
}

double random_pair_estimate_impl(int n, std::map<int, double>& memo) {
    if (n <= 2) return 1.0;
    auto it = memo.find(n);
    if (it != memo.end()) return it->second;
    const int left = std::max(1, static_cast<int>(std::lround(n / 3.0)));
    const int right = std::max(1, static_cast<int>(std::lround(2.0 * n / 3.0)));
    const double value = random_pair_polynomial(n) *
                         random_pair_estimate_impl(left, memo) *
                         random_pair_estimate_impl(right, memo);
    memo[n] = value;
    return value;
}

// Split shapes (a, c-a) with a <= c-a, ordered per removal policy: the policy
// consumes its own shape first and overflows tier by tier when lambda-1
// exceeds the splits of that shape.
std::vector<int> shape_order(int c, RemovalPolicy policy) {
    std::vector<int> order;
    for (int a = 1; a <= c / 2; ++a) order.push_back(a);
    if (policy == RemovalPolicy::BalancedRemoval)
        std::reverse(order.begin(), order.end());
    return order;
}

// Splits of c classes with small side a: C(c, a), halved when the sides tie.
BigInt shape_multiplicity(int c, int a) {
    BigInt m = binomial(c, a);
    if (2 * a == c) m /= 2;
    return m;
}

BigInt big_min(const BigInt& a, const BigInt& b) { return a < b ? a : b; }

BigInt restricted_recurrence(const GrowthQuery& q) {
    std::map<int, BigInt> memo;
    const BigInt budget = q.lambda - 1;

    std::function<BigInt(int)> count = [&](int c) -> BigInt {
        if (c <= 1) return 1;
        auto it = memo.find(c);
        if (it != memo.end()) return it->second;
        BigInt total = 0;
        if (q.strategy == SplitStrategy::Balanced) {
            const int hi = (c + 1) / 2, lo = c / 2;
            BigInt pool = (c % 2 == 0) ? binomial(c, hi) / 2 : binomial(c, hi);
            const BigInt removed = big_min(budget, pool - 1);
            total = (pool - removed) * count(hi) * count(lo);
        } else {
            BigInt pool = (BigInt(1) << (c - 1)) - 1;
            BigInt removable = big_min(budget, pool - 1);
            std::map<int, BigInt> remaining;
            for (int a = 1; a <= c / 2; ++a)
                remaining[a] = shape_multiplicity(c, a);
            for (int a : shape_order(c, q.removal)) {
                const BigInt take = big_min(removable, remaining[a]);
                remaining[a] -= take;
                removable -= take;
                if (removable == 0) break;
            }
            for (int a = 1; a <= c / 2; ++a)
                total += remaining[a] * count(a) * count(c - a);
        }
        memo[c] = total;
        return total;
    };
    return count(q.n);
}

struct EnumSplit {
    std::vector<int> left, right;
    int small_side;
};

// All splits of the given classes admitted by the strategy, one entry per
// unordered pair. The side holding the first class is listed first, so
// enumeration order is stable.
std::vector<EnumSplit> enumerate_splits(const std::vector<int>& classes,
                                        SplitStrategy strategy) {
    const int k = static_cast<int>(classes.size());
    std::vector<EnumSplit> splits;
    // Odd masks below the full set cover each unordered split exactly once:
    // the side holding the first class identifies the split.
    for (unsigned mask = 1; mask < (1u << k) - 1u; mask += 2) {
        EnumSplit s;
        for (int i = 0; i < k; ++i) {
            if (mask & (1u << i))
                s.left.push_back(classes[static_cast<std::size_t>(i)]);
            else
                s.right.push_back(classes[static_cast<std::size_t>(i)]);
        }
        if (s.right.empty()) continue;
        s.small_side = static_cast<int>(std::min(s.left.size(), s.right.size()));
        if (strategy == SplitStrategy::Balanced &&
            std::abs(static_cast<int>(s.left.size()) -
                     static_cast<int>(s.right.size())) > 1)
            continue;
        splits.push_back(std::move(s));
    }
    return splits;
}

void enumerate_trees(const std::vector<int>& classes, const GrowthQuery& q,
                     std::vector<std::string>& out) {
    if (classes.size() == 1) {
        out.push_back(std::to_string(classes[0]));
        return;
    }
    std::vector<EnumSplit> splits = enumerate_splits(classes, q.strategy);
    const int c = static_cast<int>(classes.size());
    long long removable = std::min<long long>(
        q.lambda - 1, static_cast<long long>(splits.size()) - 1);
    std::vector<bool> removed(splits.size(), false);
    for (int a : shape_order(c, q.removal)) {
        if (removable <= 0) break;
        for (std::size_t i = 0; i < splits.size() && removable > 0; ++i) {
            if (!removed[i] && splits[i].small_side == a) {
                removed[i] = true;
                --removable;
            }
        }
    }
    for (std::size_t i = 0; i < splits.size(); ++i) {
        if (removed[i]) continue;
        std::vector<std::string> left_forms, right_forms;
        enumerate_trees(splits[i].left, q, left_forms);
        enumerate_trees(splits[i].right, q, right_forms);
        for (const auto& lf : left_forms)
            for (const auto& rf : right_forms)
                out.push_back("(" + lf + "|" + rf + ")");
    }
}

BigInt restricted_enumerate(const GrowthQuery& q) {
    std::vector<int> classes(static_cast<std::size_t>(q.n));
    for (int i = 0; i < q.n; ++i) classes[static_cast<std::size_t>(i)] = i;
    std::vector<std::string> forms;
    enumerate_trees(classes, q, forms);
    std::unordered_set<std::string> distinct(forms.begin(), forms.end());
    if (distinct.size() != forms.size())
        throw InternalError("tree enumeration produced duplicate forms");
    return BigInt(distinct.size());
}

}  // namespace

double growth_random_pair_estimate(int n) {
    if (n < 1) throw UsageError("class count must be >= 1");
    std::map<int, double> memo;
    return random_pair_estimate_impl(n, memo);
}

BigInt growth_restricted(const GrowthQuery& q) {
    if (q.n < 1) throw UsageError("class count must be >= 1");
    if (q.lambda < 1) throw UsageError("lambda must be >= 1");
    if (q.strategy == SplitStrategy::RandomPair)
        throw UsageError(
            "restricted growth is undefined for random-pair selection; its "
            "sample space depends on the data");
    if (q.removal == RemovalPolicy::None && q.lambda > 1)
        throw UsageError("a removal policy is required when lambda > 1");
    if (q.method == GrowthMethod::Enumerate) {
        if (q.n > 8) throw UsageError("enumeration is limited to n <= 8");
        if (q.n == 1) return 1;
        return restricted_enumerate(q);
    }
    return restricted_recurrence(q);
}

}  // namespace nd
