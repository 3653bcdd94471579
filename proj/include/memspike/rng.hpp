#pragma once

#include <cstdint>
#include <string_view>

namespace memspike {

// splitmix64: tiny, fast, and bit-stable everywhere. We deliberately avoid
// std::uniform_int_distribution because its output is not pinned across
// standard library implementations, and reruns must be byte-identical.
struct SplitMix64 {
    uint64_t state;

    explicit SplitMix64(uint64_t seed) : state(seed) {}

    uint64_t next() {
        state += 0x9e3779b97f4a7c15ull;
        uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // Uniform in [0, bound) by rejection; bound must be nonzero.
    uint64_t next_below(uint64_t bound) {
        const uint64_t limit = ~uint64_t{0} - (~uint64_t{0} % bound);
        uint64_t v = next();
        while (v >= limit) v = next();
        return v % bound;
    }

    double next_unit() {  // uniform in [0, 1)
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }
};

inline uint64_t fnv1a(std::string_view s) {
    uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

// Independent seed stream per purpose label. Adding a new consumer with a new
// label never perturbs the draws of existing ones.
inline uint64_t derive_seed(uint64_t root, std::string_view label, uint64_t index) {
    SplitMix64 mix(root ^ fnv1a(label));
    uint64_t base = mix.next();
    SplitMix64 leaf(base + 0x9e3779b97f4a7c15ull * (index + 1));
    return leaf.next();
}

}  // namespace memspike
