#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace cdm {

// 64-bit FNV-1a over a label string.
constexpr std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

/// Seed for a named substream of a root seed. Every randomized stage draws
/// from its own substream, so adding or reordering stages never perturbs the
/// draws of the others.
constexpr std::uint64_t substream_seed(std::uint64_t root, std::string_view stage) {
    return splitmix64(root ^ fnv1a64(stage));
}

/// Deterministic random source. mt19937_64 is fully specified by the
/// standard and the uniform doubles are derived from the raw 64-bit output,
/// so identical seeds give identical sequences on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // Uniform in [0, 1), 53-bit resolution.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + uniform01() * (hi - lo); }

    // Uniform index in [0, n).
    std::size_t uniform_index(std::size_t n) {
        std::size_t i = static_cast<std::size_t>(uniform01() * static_cast<double>(n));
        return i < n ? i : n - 1;
    }

    std::uint64_t next_u64() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

} // namespace cdm
