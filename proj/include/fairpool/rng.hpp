#pragma once

#include <cstdint>

namespace fairpool {

// splitmix64. Hand-rolled so that identical seeds give identical streams on
// every platform; the <random> distributions make no such promise.
struct SplitMix64 {
    std::uint64_t state = 0;

    std::uint64_t next() {
        state += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t below(std::uint64_t n) { return next() % n; }

    // uniform in [0, 1) with 53 random bits
    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

}  // namespace fairpool
