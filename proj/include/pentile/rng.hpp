#pragma once

#include <cstdint>

namespace pentile {

// Counter-based generator: every (seed, stream) pair yields an independent,
// platform-stable sequence. Used instead of <random> engines so that outputs
// are byte-identical across standard libraries and worker counts.
struct Rng {
    uint64_t state;

    static constexpr uint64_t mix(uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    explicit Rng(uint64_t seed, uint64_t stream = 0)
        : state(mix(mix(seed) ^ mix(stream * 0x2545f4914f6cdd1dULL + 0x632be59bd9b4e019ULL))) {}

    uint64_t next_u64() {
        state += 0x9e3779b97f4a7c15ULL;
        uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1).
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform in [0, n). Modulo bias is < 2^-50 for every n used here.
    uint64_t next_below(uint64_t n) { return next_u64() % n; }
};

} // namespace pentile
