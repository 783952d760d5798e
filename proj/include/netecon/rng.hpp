#pragma once

// Seeded random streams. Everything here is bit-exact across platforms:
// stream derivation is SplitMix64, draws come from xoshiro256**, and the
// distributions below are written out rather than taken from <random>,
// whose distribution algorithms are implementation-defined.

#include <array>
#include <cmath>
#include <cstdint>
#include <string_view>
#include <vector>

namespace netecon {

/// SplitMix64 (Steele, Lea, Flood 2014). Used to expand a 64-bit seed into
/// generator state.
class SplitMix64 {
public:
    explicit constexpr SplitMix64(std::uint64_t state) noexcept : state_(state) {}

    constexpr std::uint64_t next() noexcept {
        state_ += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

private:
    std::uint64_t state_;
};

/// FNV-1a over the bytes of a stream name.
constexpr std::uint64_t fnv1a64(std::string_view bytes) noexcept {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (char c : bytes) {
        h ^= static_cast<std::uint8_t>(c);
        h *= 0x100000001B3ULL;
    }
    return h;
}

/// xoshiro256** 1.0 (Blackman, Vigna). Satisfies UniformRandomBitGenerator.
class Xoshiro256 {
public:
    using result_type = std::uint64_t;

    /// State is filled with four consecutive SplitMix64 outputs of `seed`.
    explicit constexpr Xoshiro256(std::uint64_t seed = 0) noexcept {
        SplitMix64 sm(seed);
        for (auto& word : s_) word = sm.next();
    }

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return ~result_type{0}; }

    constexpr result_type operator()() noexcept {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    /// Uniform on the open interval (0, 1), 53-bit resolution.
    double uniform01() noexcept {
        return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Uniform on (lo, hi).
    double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform01(); }

    /// Uniform integer on the closed range [lo, hi]; unbiased by rejection.
    std::uint64_t uniform_int(std::uint64_t lo, std::uint64_t hi) noexcept {
        const std::uint64_t span = hi - lo;
        if (span == max()) return (*this)();
        const std::uint64_t range = span + 1;
        const std::uint64_t limit = max() - (max() % range);
        std::uint64_t x;
        do {
            x = (*this)();
        } while (x >= limit);
        return lo + x % range;
    }

    /// Normal(mean, sd) by the Marsaglia polar method; the paired deviate is
    /// discarded so each call consumes an independent set of draws.
    double normal(double mean, double sd) noexcept {
        double u, v, s;
        do {
            u = 2.0 * uniform01() - 1.0;
            v = 2.0 * uniform01() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        return mean + sd * u * std::sqrt(-2.0 * std::log(s) / s);
    }

    bool coin() noexcept { return ((*this)() >> 63) != 0; }

    /// k distinct indices from [0, n), in draw order (partial Fisher-Yates).
    std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k) {
        std::vector<std::size_t> pool(n);
        for (std::size_t i = 0; i < n; ++i) pool[i] = i;
        if (k > n) k = n;
        for (std::size_t i = 0; i < k; ++i) {
            auto j = static_cast<std::size_t>(uniform_int(i, n - 1));
            std::swap(pool[i], pool[j]);
        }
        pool.resize(k);
        return pool;
    }

    friend constexpr bool operator==(const Xoshiro256&, const Xoshiro256&) = default;

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
        return (x << k) | (x >> (64 - k));
    }

    std::array<std::uint64_t, 4> s_{};
};

/// Generator for the named substream of `seed`. A pure function of
/// (seed, name).
inline Xoshiro256 substream(std::uint64_t seed, std::string_view name) noexcept {
    return Xoshiro256(SplitMix64(seed ^ fnv1a64(name)).next());
}

/// All random streams of one run. s1 drives prices, returns to scale and
/// shareholding; s2 drives the network: elasticities, provider sets, and the
/// rewiring/regeneration draws made while the run is in progress.
struct SeedStreams {
    std::uint64_t s1 = 0;
    std::uint64_t s2 = 0;

    Xoshiro256 prices;
    Xoshiro256 kappa;
    Xoshiro256 shareholders;

    Xoshiro256 elasticities;
    Xoshiro256 providers;
    Xoshiro256 rewire;
    Xoshiro256 regen;
};

inline SeedStreams derive_streams(std::uint64_t s1, std::uint64_t s2) {
    return SeedStreams{
        .s1 = s1,
        .s2 = s2,
        .prices = substream(s1, "prices"),
        .kappa = substream(s1, "kappa"),
        .shareholders = substream(s1, "shareholders"),
        .elasticities = substream(s2, "elasticities"),
        .providers = substream(s2, "providers"),
        .rewire = substream(s2, "rewire"),
        .regen = substream(s2, "regen"),
    };
}

}  // namespace netecon
