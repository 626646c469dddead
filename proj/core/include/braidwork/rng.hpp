#pragma once

// SplitMix64: tiny, fast, and — unlike the std:: distributions — bit-exact
// across platforms and standard libraries. Deterministic report bytes depend
// on this, so do not swap in std::mt19937/uniform_int_distribution.

#include <cstdint>

namespace braidwork {

struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed = 0) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // Uniform in [0, n) via rejection-free multiply-shift (n < 2^32 in all uses).
    std::uint64_t below(std::uint64_t n) { return n ? next() % n : 0; }

    // Uniform in [lo, hi] inclusive.
    std::int64_t range(std::int64_t lo, std::int64_t hi) {
        return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo + 1)));
    }

    bool coin() { return next() & 1; }
};

} // namespace braidwork
