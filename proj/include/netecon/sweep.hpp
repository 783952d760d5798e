#pragma once

#include <algorithm>
#include <atomic>
#include <condition_variable>
#include <cstdint>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

#include "netecon/scenario.hpp"
#include "netecon/simulation.hpp"

namespace netecon {

struct SeedPair {
    std::uint64_t s1 = 0;
    std::uint64_t s2 = 0;

    friend auto operator<=>(const SeedPair&, const SeedPair&) = default;
};

/// Inclusive seed range.
struct SeedRange {
    std::uint64_t first = 0;
    std::uint64_t last = 0;
};

/// Cartesian product of two ranges, sorted by (s1, s2).
inline std::vector<SeedPair> seed_grid(SeedRange s1, SeedRange s2) {
    std::vector<SeedPair> grid;
    for (auto a = s1.first; a <= s1.last; ++a) {
        for (auto b = s2.first; b <= s2.last; ++b) {
            grid.push_back({a, b});
            if (b == s2.last) break;
        }
        if (a == s1.last) break;
    }
    return grid;
}

inline RunSummary run_one(const ScenarioConfig& cfg, SeedPair seeds) {
    try {
        return summarize_run(run_simulation(cfg, seeds.s1, seeds.s2));
    } catch (const std::exception& e) {
        RunSummary s;
        s.s1 = seeds.s1;
        s.s2 = seeds.s2;
        s.error = e.what();
        return s;
    }
}

/// Runs every seed pair on `jobs` worker threads. `sink` is invoked on the
/// calling thread once per run, in the order of `seeds`, as soon as all
/// earlier runs have been delivered, so output is independent of `jobs`.
template <class Sink>
void run_sweep(const ScenarioConfig& cfg, const std::vector<SeedPair>& seeds, unsigned jobs, Sink&& sink) {
    jobs = std::max(1u, jobs);
    std::vector<std::optional<RunSummary>> done(seeds.size());
    std::atomic<std::size_t> next{0};
    std::mutex mu;
    std::condition_variable ready;

    auto worker = [&] {
        for (std::size_t i = next++; i < seeds.size(); i = next++) {
            auto result = run_one(cfg, seeds[i]);
            {
                std::lock_guard lock(mu);
                done[i] = std::move(result);
            }
            ready.notify_one();
        }
    };

    std::vector<std::jthread> pool;
    for (unsigned k = 0; k < std::min<std::size_t>(jobs, seeds.size()); ++k) pool.emplace_back(worker);

    for (std::size_t i = 0; i < seeds.size(); ++i) {
        RunSummary result;
        {
            std::unique_lock lock(mu);
            ready.wait(lock, [&] { return done[i].has_value(); });
            result = std::move(*done[i]);
            done[i].reset();
        }
        sink(result);
    }
}

}  // namespace netecon
