#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace episeason {

using Rng = std::mt19937_64;

// SplitMix64 finalizer. Bijective on 64-bit ints, so distinct inputs give
// distinct stream seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// Counter-based seed derivation: stream i of a master seed. The master is
// hashed before mixing so the construction is not symmetric in its arguments.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
    return splitmix64(splitmix64(master) ^ (0x9E3779B97F4A7C15ull * (stream + 1)));
}

inline Rng make_rng(std::uint64_t master, std::uint64_t stream) {
    return Rng(derive_seed(master, stream));
}

// Bounded draw in [0, n). Lemire's multiply-shift with rejection; avoids
// std::uniform_int_distribution so streams reproduce across standard
// libraries.
inline std::size_t uniform_index(Rng& rng, std::size_t n) {
    std::uint64_t x = rng();
    __uint128_t m = static_cast<__uint128_t>(x) * n;
    auto lo = static_cast<std::uint64_t>(m);
    if (lo < n) {
        const std::uint64_t threshold = -n % n;
        while (lo < threshold) {
            x = rng();
            m = static_cast<__uint128_t>(x) * n;
            lo = static_cast<std::uint64_t>(m);
        }
    }
    return static_cast<std::size_t>(m >> 64);
}

// Uniform double in [0, 1) with 53 random bits.
inline double uniform_real01(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline bool chance(Rng& rng, double p) {
    return uniform_real01(rng) < p;
}

inline void shuffle_ids(std::vector<int>& v, Rng& rng) {
    for (std::size_t i = v.size(); i > 1; --i) {
        std::swap(v[i - 1], v[uniform_index(rng, i)]);
    }
}

// Uniform subset of {0,...,n-1} of the given size, returned sorted.
inline std::vector<int> sample_without_replacement(int n, int count, Rng& rng) {
    std::vector<int> ids(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) ids[static_cast<std::size_t>(i)] = i;
    for (int i = 0; i < count; ++i) {
        const std::size_t j = i + uniform_index(rng, static_cast<std::size_t>(n - i));
        std::swap(ids[static_cast<std::size_t>(i)], ids[j]);
    }
    ids.resize(static_cast<std::size_t>(count));
    std::sort(ids.begin(), ids.end());
    return ids;
}

} // namespace episeason
