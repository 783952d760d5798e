#include <gtest/gtest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <set>
#include <vector>

#include "netecon/rng.hpp"

using namespace netecon;

namespace {

// Straight transcription of the reference xoshiro256** step, used to check
// the production generator without going through its constructor.
struct ReferenceXoshiro {
    std::array<std::uint64_t, 4> s;

    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::uint64_t next() {
        const std::uint64_t result = rotl(s[1] * 5, 7) * 9;
        const std::uint64_t t = s[1] << 17;
        s[2] ^= s[0];
        s[3] ^= s[1];
        s[1] ^= s[2];
        s[0] ^= s[3];
        s[2] ^= t;
        s[3] = rotl(s[3], 45);
        return result;
    }
};

}  // namespace

TEST(SplitMix64, FirstOutputFromZeroState) {
    SplitMix64 sm(0);
    EXPECT_EQ(sm.next(), 0xE220A8397B1DCDAFULL);
    EXPECT_EQ(sm.next(), 0x6E789E6AA1B965F4ULL);
}

TEST(Fnv1a64, KnownVectors) {
    EXPECT_EQ(fnv1a64(""), 0xCBF29CE484222325ULL);
    EXPECT_EQ(fnv1a64("a"), 0xAF63DC4C8601EC8CULL);
    EXPECT_EQ(fnv1a64("foobar"), 0x85944171F73967E8ULL);
}

TEST(Xoshiro256, ReferenceStepMatchesPublishedSequence) {
    ReferenceXoshiro ref{{1, 2, 3, 4}};
    EXPECT_EQ(ref.next(), 11520u);
    EXPECT_EQ(ref.next(), 0u);
    EXPECT_EQ(ref.next(), 1509978240u);
    EXPECT_EQ(ref.next(), 1215971899390074240u);
}

TEST(Xoshiro256, SeededFromFourSplitMixOutputs) {
    SplitMix64 sm(42);
    ReferenceXoshiro ref{{sm.next(), sm.next(), sm.next(), sm.next()}};
    Xoshiro256 g(42);
    for (int i = 0; i < 1000; ++i) ASSERT_EQ(g(), ref.next());
}

TEST(Xoshiro256, SameSeedSameStream) {
    Xoshiro256 a(7), b(7);
    for (int i = 0; i < 100; ++i) ASSERT_EQ(a(), b());
    EXPECT_EQ(a, b);
}

TEST(Xoshiro256, Uniform01StaysInOpenInterval) {
    Xoshiro256 g(1);
    double sum = 0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double u = g.uniform01();
        ASSERT_GT(u, 0.0);
        ASSERT_LT(u, 1.0);
        sum += u;
    }
    EXPECT_NEAR(sum / n, 0.5, 0.005);
}

TEST(Xoshiro256, UniformIntCoversClosedRangeEvenly) {
    Xoshiro256 g(3);
    std::array<int, 7> counts{};
    const int n = 70000;
    for (int i = 0; i < n; ++i) {
        const auto v = g.uniform_int(5, 11);
        ASSERT_GE(v, 5u);
        ASSERT_LE(v, 11u);
        ++counts[v - 5];
    }
    double chi2 = 0;
    for (int c : counts) chi2 += (c - n / 7.0) * (c - n / 7.0) / (n / 7.0);
    EXPECT_LT(chi2, 22.46);  // chi-square, 6 dof, p = 0.001
}

TEST(Xoshiro256, UniformIntDegenerateRange) {
    Xoshiro256 g(3);
    for (int i = 0; i < 10; ++i) EXPECT_EQ(g.uniform_int(4, 4), 4u);
}

TEST(Xoshiro256, NormalMoments) {
    Xoshiro256 g(11);
    const int n = 200000;
    double sum = 0, sq = 0;
    for (int i = 0; i < n; ++i) {
        const double x = g.normal(0.9, 0.6);
        sum += x;
        sq += x * x;
    }
    const double mean = sum / n;
    const double sd = std::sqrt(sq / n - mean * mean);
    EXPECT_NEAR(mean, 0.9, 0.01);
    EXPECT_NEAR(sd, 0.6, 0.01);
}

TEST(Xoshiro256, CoinIsFair) {
    Xoshiro256 g(5);
    int heads = 0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) heads += g.coin();
    EXPECT_NEAR(heads / double(n), 0.5, 0.01);
}

TEST(Xoshiro256, SampleWithoutReplacementIsDistinctAndInRange) {
    Xoshiro256 g(9);
    for (std::size_t k = 0; k <= 10; ++k) {
        const auto picks = g.sample_without_replacement(10, k);
        ASSERT_EQ(picks.size(), k);
        std::set<std::size_t> unique(picks.begin(), picks.end());
        EXPECT_EQ(unique.size(), k);
        for (auto v : picks) EXPECT_LT(v, 10u);
    }
    EXPECT_EQ(g.sample_without_replacement(3, 8).size(), 3u);
}

TEST(Xoshiro256, SampleWithoutReplacementIsUniformOverElements) {
    Xoshiro256 g(13);
    std::array<int, 5> hits{};
    const int n = 50000;
    for (int i = 0; i < n; ++i)
        for (auto v : g.sample_without_replacement(5, 2)) ++hits[v];
    for (int h : hits) EXPECT_NEAR(h / double(n), 0.4, 0.01);
}

TEST(SeedStreams, PureFunctionOfSeeds) {
    auto a = derive_streams(78, 178);
    auto b = derive_streams(78, 178);
    EXPECT_EQ(a.prices, b.prices);
    EXPECT_EQ(a.elasticities, b.elasticities);
    EXPECT_EQ(a.regen, b.regen);
    EXPECT_EQ(a.prices(), b.prices());
}

TEST(SeedStreams, NamedStreamsDiffer) {
    auto s = derive_streams(1, 1);
    std::set<std::uint64_t> firsts{s.prices(),        s.kappa(),     s.shareholders(), s.elasticities(),
                                   s.providers(),     s.rewire(),    s.regen()};
    EXPECT_EQ(firsts.size(), 7u);
}

TEST(SeedStreams, StructuralSeedDoesNotTouchNetworkStreams) {
    auto a = derive_streams(1, 500);
    auto b = derive_streams(2, 500);
    EXPECT_NE(a.prices, b.prices);
    EXPECT_NE(a.kappa, b.kappa);
    EXPECT_NE(a.shareholders, b.shareholders);
    EXPECT_EQ(a.elasticities, b.elasticities);
    EXPECT_EQ(a.providers, b.providers);
    EXPECT_EQ(a.rewire, b.rewire);
    EXPECT_EQ(a.regen, b.regen);
}

TEST(SeedStreams, NetworkSeedDoesNotTouchStructuralStreams) {
    auto a = derive_streams(9, 1);
    auto b = derive_streams(9, 2);
    EXPECT_EQ(a.prices, b.prices);
    EXPECT_EQ(a.kappa, b.kappa);
    EXPECT_EQ(a.shareholders, b.shareholders);
    EXPECT_NE(a.elasticities, b.elasticities);
    EXPECT_NE(a.providers, b.providers);
}

TEST(SeedStreams, AdjacentSeedsAreUncorrelated) {
    // Correlation of uniform draws across neighbouring seeds.
    const int n = 20000;
    auto a = substream(100, "prices");
    auto b = substream(101, "prices");
    double sa = 0, sb = 0, sab = 0, saa = 0, sbb = 0;
    for (int i = 0; i < n; ++i) {
        const double x = a.uniform01(), y = b.uniform01();
        sa += x;
        sb += y;
        sab += x * y;
        saa += x * x;
        sbb += y * y;
    }
    const double cov = sab / n - (sa / n) * (sb / n);
    const double r = cov / std::sqrt((saa / n - (sa / n) * (sa / n)) * (sbb / n - (sb / n) * (sb / n)));
    EXPECT_LT(std::abs(r), 0.03);
}
