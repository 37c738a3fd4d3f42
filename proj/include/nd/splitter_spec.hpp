#pragma once

#include <cstdint>
#include <string>

#include "nd/errors.hpp"

namespace nd {

enum class SplitStrategy { Random, Balanced, RandomPair };

inline std::string to_string(SplitStrategy s) {
    switch (s) {
        case SplitStrategy::Random: return "random";
        case SplitStrategy::Balanced: return "balanced";
        case SplitStrategy::RandomPair: return "random-pair";
    }
    throw InternalError("unknown split strategy");
}

inline SplitStrategy split_strategy_from_string(const std::string& s) {
    if (s == "random") return SplitStrategy::Random;
    if (s == "balanced") return SplitStrategy::Balanced;
    if (s == "random-pair" || s == "random_pair") return SplitStrategy::RandomPair;
    throw UsageError("unknown split strategy '" + s + "'");
}

// How class splits are drawn at each internal node of a nested dichotomy.
// lambda candidates are drawn per node and the one whose binary model has the
// lowest training RMSE is kept; nodes with fewer than class_threshold classes
// draw a single candidate.
struct SplitterSpec {
    SplitStrategy strategy = SplitStrategy::Random;
    int lambda = 1;
    int class_threshold = 1;
    std::uint64_t seed = 42;

    void validate() const {
        if (lambda < 1) throw UsageError("lambda must be >= 1");
        if (class_threshold < 1) throw UsageError("class threshold must be >= 1");
    }
};

}  // namespace nd
