#pragma once

#include <cstdint>

namespace qnet {

// splitmix64: seedable, splittable 64-bit generator. Stream order is the
// order of next() calls; derived streams are obtained via derive_seed so
// parallel tasks get independent, reproducible sequences.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform double in [0, 1)
    double next_double() {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

    // uniform double in [lo, hi)
    double next_double(double lo, double hi) {
        return lo + (hi - lo) * next_double();
    }

    static constexpr const char* name() { return "splitmix64"; }

private:
    std::uint64_t state_;
};

// Expand a master seed into per-task seeds by a counter scheme: the task
// seed is the counter-th output of a splitmix64 stream seeded by the master.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t counter) {
    SplitMix64 rng(master ^ 0xa5a5a5a55a5a5a5aULL);
    std::uint64_t s = 0;
    for (std::uint64_t i = 0; i <= counter; ++i) s = rng.next();
    return s;
}

} // namespace qnet
