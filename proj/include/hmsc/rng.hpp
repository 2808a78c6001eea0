#pragma once

#include <cstdint>
#include <vector>

// Deterministic RNG helpers. std::uniform_int_distribution and std::sample are
// implementation-defined, so every random draw in the library goes through the
// fixed algorithms below and results are reproducible across toolchains.

namespace hmsc {

struct SplitMix64 {
    uint64_t state = 0;

    explicit SplitMix64(uint64_t seed = 0) : state(seed) {}

    uint64_t next() {
        uint64_t z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, bound). Lemire rejection method, exact.
    uint64_t next_below(uint64_t bound) {
        // bound == 0 is a caller bug; keep it defined.
        if (bound == 0) return 0;
        while (true) {
            uint64_t x = next();
            __uint128_t m = static_cast<__uint128_t>(x) * bound;
            uint64_t lo = static_cast<uint64_t>(m);
            if (lo >= bound || lo >= (-bound) % bound) {
                return static_cast<uint64_t>(m >> 64);
            }
        }
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

/// Combine a run seed with a per-task discriminator into an independent stream seed.
inline uint64_t mix_seed(uint64_t seed, uint64_t salt) {
    SplitMix64 g(seed ^ (0x9e3779b97f4a7c15ull * (salt + 1)));
    return g.next();
}

/// k distinct indices from [0, n), in draw order. Partial Fisher-Yates.
inline std::vector<uint32_t> sample_without_replacement(uint32_t n, uint32_t k, SplitMix64& rng) {
    std::vector<uint32_t> pool(n);
    for (uint32_t i = 0; i < n; ++i) pool[i] = i;
    if (k > n) k = n;
    for (uint32_t i = 0; i < k; ++i) {
        uint32_t j = i + static_cast<uint32_t>(rng.next_below(n - i));
        std::swap(pool[i], pool[j]);
    }
    pool.resize(k);
    return pool;
}

}  // namespace hmsc
