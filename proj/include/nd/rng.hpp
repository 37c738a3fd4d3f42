#pragma once

#include <cstdint>
#include <random>

namespace nd {

// Seed derivation scheme used everywhere randomness is consumed.
//
// Every random decision runs on its own substream whose seed is derived by
// hashing the parent seed with an integer tag:
//
//   child_seed = mix64(parent_seed ^ mix64(tag))
//
// Tree construction derives one seed per node from the master seed and the
// node's root-to-node path (encoded as a bit string with a leading sentinel
// bit: root = 1, going left appends 0, going right appends 1), then one seed
// per candidate index at that node. Ensembles derive one seed per member
// index, cross-validation one per run. The layout is normative: sequential
// and parallel execution consume identical streams, so outputs are
// byte-identical regardless of worker count.

// SplitMix64 finalizer.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t tag) {
    return mix64(parent ^ mix64(tag));
}

// Node path codes for the tree-construction streams.
inline constexpr std::uint64_t kRootPath = 1;
inline std::uint64_t path_left(std::uint64_t path) { return path * 2; }
inline std::uint64_t path_right(std::uint64_t path) { return path * 2 + 1; }

// Random stream with unbiased integer draws. Wraps mt19937_64 but bypasses
// std distributions, whose output is implementation-defined.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform in [0, bound), bound >= 1. Rejection on the top of the range.
    std::uint64_t below(std::uint64_t bound) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        std::uint64_t v;
        do {
            v = engine_();
        } while (v >= limit);
        return v % bound;
    }

    // Uniform in [0, 1) with 53 random bits.
    double next_double() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace nd
