#include <gtest/gtest.h>

#include <limits>
#include <string>
#include <vector>

#include "netecon/io.hpp"
#include "netecon/sweep.hpp"

using namespace netecon;

namespace {

ScenarioConfig short_config() {
    ScenarioConfig cfg;
    cfg.horizon = 60;
    return cfg;
}

std::vector<std::string> sweep_lines(const ScenarioConfig& cfg, const std::vector<SeedPair>& seeds, unsigned jobs) {
    std::vector<std::string> lines;
    run_sweep(cfg, seeds, jobs, [&](const RunSummary& s) { lines.push_back(io::runs_line(s)); });
    return lines;
}

}  // namespace

TEST(SeedGrid, InclusiveAndSorted) {
    const auto g = seed_grid({1, 3}, {10, 11});
    ASSERT_EQ(g.size(), 6u);
    EXPECT_EQ(g.front(), (SeedPair{1, 10}));
    EXPECT_EQ(g.back(), (SeedPair{3, 11}));
    EXPECT_TRUE(std::is_sorted(g.begin(), g.end()));
    EXPECT_EQ(seed_grid({5, 5}, {5, 5}).size(), 1u);
    EXPECT_TRUE(seed_grid({2, 1}, {1, 1}).empty());
}

TEST(SeedGrid, RangeEndingAtMaxTerminates) {
    const auto top = std::numeric_limits<std::uint64_t>::max();
    const auto g = seed_grid({top - 1, top}, {top, top});
    ASSERT_EQ(g.size(), 2u);
    EXPECT_EQ(g.back().s1, top);
}

TEST(RunSweep, OneResultPerSeedInOrder) {
    const auto seeds = seed_grid({1, 2}, {1, 2});
    std::vector<SeedPair> seen;
    run_sweep(short_config(), seeds, 4, [&](const RunSummary& s) { seen.push_back({s.s1, s.s2}); });
    EXPECT_EQ(seen, seeds);
}

TEST(RunSweep, OutputIndependentOfJobs) {
    const auto seeds = seed_grid({1, 4}, {7, 9});
    const auto serial = sweep_lines(short_config(), seeds, 1);
    EXPECT_EQ(sweep_lines(short_config(), seeds, 3), serial);
    EXPECT_EQ(sweep_lines(short_config(), seeds, 8), serial);
}

TEST(RunSweep, MatchesIndividualRuns) {
    const auto seeds = seed_grid({3, 3}, {4, 5});
    std::vector<RunSummary> got;
    run_sweep(short_config(), seeds, 2, [&](const RunSummary& s) { got.push_back(s); });
    ASSERT_EQ(got.size(), 2u);
    for (std::size_t i = 0; i < seeds.size(); ++i)
        EXPECT_EQ(got[i], summarize_run(run_simulation(short_config(), seeds[i].s1, seeds[i].s2)));
}

TEST(RunSweep, FailuresAreRecordedPerRun) {
    auto cfg = short_config();
    cfg.num_consumers = 0;
    std::vector<RunSummary> got;
    run_sweep(cfg, seed_grid({1, 2}, {1, 1}), 2, [&](const RunSummary& s) { got.push_back(s); });
    ASSERT_EQ(got.size(), 2u);
    for (const auto& s : got) {
        ASSERT_TRUE(s.error.has_value());
        EXPECT_FALSE(s.outcome.has_value());
    }
    EXPECT_EQ(got[1].s1, 2u);
}

TEST(RunSweep, EmptySeedList) {
    int calls = 0;
    run_sweep(short_config(), {}, 4, [&](const RunSummary&) { ++calls; });
    EXPECT_EQ(calls, 0);
}
