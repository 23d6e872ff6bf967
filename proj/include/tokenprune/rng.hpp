#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "tokenprune/errors.hpp"

namespace tokenprune {

// splitmix64; expands a 64-bit seed into generator state.
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// xoshiro256** (Blackman & Vigna), seeded through splitmix64.
//
// Used instead of std::mt19937_64 + <random> distributions because the
// standard does not pin the distributions bit-for-bit; everything here is a
// published algorithm, so seeded runs reproduce across compilers/platforms.
class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& word : state_) word = splitmix64_next(sm);
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform in [0, 1) with 53 significant bits.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Unbiased integer in [0, n); rejection on the low range.
    std::uint64_t next_below(std::uint64_t n) {
        if (n == 0) throw InvalidArgumentError("next_below: n must be positive");
        const std::uint64_t threshold = (0 - n) % n;
        for (;;) {
            const std::uint64_t r = next_u64();
            if (r >= threshold) return r % n;
        }
    }

    // Standard normal via Box-Muller (cosine branch); two uniforms per call.
    double next_gaussian() {
        const double u1 = 1.0 - next_double();  // (0, 1], keeps log finite
        const double u2 = next_double();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
    }

    // k distinct values from {0, ..., n-1}, ascending. Partial Fisher-Yates,
    // so every k-subset is equally likely.
    std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k) {
        if (k > n) throw InvalidArgumentError("sample_without_replacement: k > n");
        std::vector<std::size_t> pool(n);
        std::iota(pool.begin(), pool.end(), std::size_t{0});
        for (std::size_t i = 0; i < k; ++i) {
            const std::size_t j = i + static_cast<std::size_t>(next_below(n - i));
            std::swap(pool[i], pool[j]);
        }
        std::vector<std::size_t> out(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(k));
        std::sort(out.begin(), out.end());
        return out;
    }

private:
    static constexpr double kPi = 3.141592653589793238462643383279502884;

    static constexpr std::uint64_t rotl(std::uint64_t x, int s) {
        return (x << s) | (x >> (64 - s));
    }

    std::uint64_t state_[4]{};
};

// Independent stream derived from (seed, stream tag); one user-facing seed
// can drive several generators without their draws interleaving.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t s = seed;
    const std::uint64_t h = splitmix64_next(s);
    s += 0x9e3779b97f4a7c15ULL * (stream + 1);
    return h ^ splitmix64_next(s);
}

inline Rng substream(std::uint64_t seed, std::uint64_t stream) {
    return Rng(mix_seed(seed, stream));
}

}  // namespace tokenprune
