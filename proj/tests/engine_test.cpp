#include <gtest/gtest.h>

#include <cmath>

#include "netecon/engine.hpp"
#include "netecon/scenario.hpp"
#include "netecon/simulation.hpp"

using namespace netecon;

namespace {

struct Fixture {
    EconomyState state;
    SeedStreams streams;
};

Fixture start(std::uint64_t s1, std::uint64_t s2) {
    Fixture f{{}, derive_streams(s1, s2)};
    f.state = sample_scenario(ScenarioConfig{}, f.streams);
    bootstrap_inventories(f.state);
    return f;
}

}  // namespace

TEST(AdvancePeriod, ConservesMoneyEachPeriod) {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        auto f = start(seed, seed + 7);
        const double initial = f.state.total_wealth();
        for (int t = 0; t < 200 && !f.state.halted; ++t) {
            advance_period(f.state, f.streams);
            ASSERT_NEAR(f.state.total_wealth(), initial, 1e-9 * initial) << "seed " << seed << " t " << t;
        }
    }
}

TEST(AdvancePeriod, LedgerAccountingIdentities) {
    auto f = start(3, 4);
    for (int t = 0; t < 50 && !f.state.halted; ++t) {
        PeriodLedger ledger;
        const auto before = f.state;
        advance_period(f.state, f.streams, &ledger);
        EXPECT_TRUE(check_ledger(ledger).empty());

        double revenue = 0, purchases = 0, wages_paid = 0, wages_earned = 0, paid_out = 0, received = 0;
        for (const auto& p : ledger.producers) {
            revenue += p.revenue;
            purchases += p.input_cost;
            wages_paid += p.wage_bill;
            paid_out += p.distributed;
            for (const auto& d : p.inputs) EXPECT_NEAR(d.paid, d.delivered * before.find_producer(d.seller)->price,
                                                       1e-12 * std::max(1.0, d.paid));
        }
        double spending = 0;
        for (const auto& c : ledger.consumers) {
            spending += c.goods_spending;
            wages_earned += c.wage_income;
            received += c.profit_income;
        }
        EXPECT_NEAR(revenue, purchases + spending, 1e-9 * std::max(1.0, revenue));
        EXPECT_NEAR(wages_paid, wages_earned, 1e-9 * std::max(1.0, wages_paid));
        EXPECT_NEAR(paid_out, received, 1e-9 * std::max(1.0, paid_out));
        EXPECT_NEAR(wages_paid, before.wage * ledger.traded_labour, 1e-9 * std::max(1.0, wages_paid));
    }
}

TEST(AdvancePeriod, CountsUnchangedWithoutExits) {
    auto f = start(78, 178);
    const auto producers = f.state.producers.size();
    const auto consumers = f.state.consumers.size();
    PeriodLedger ledger;
    advance_period(f.state, f.streams, &ledger);
    bool any_exit = false;
    for (const auto& p : ledger.producers)
        if (p.supply - std::min(p.supply, p.demand) + p.produced <= kRemovalThreshold) any_exit = true;
    if (!any_exit) {
        EXPECT_EQ(f.state.producers.size(), producers);
    }
    EXPECT_EQ(f.state.consumers.size(), consumers);
    EXPECT_EQ(f.state.period, 1u);
}

TEST(AdvancePeriod, DeterministicReplay) {
    auto a = start(12, 34);
    auto b = start(12, 34);
    for (int t = 0; t < 300 && !a.state.halted; ++t) {
        const auto ra = advance_period(a.state, a.streams);
        const auto rb = advance_period(b.state, b.streams);
        ASSERT_EQ(ra, rb) << "t " << t;
    }
}

TEST(AdvancePeriod, RefusesHaltedEconomy) {
    auto f = start(1, 1);
    f.state.halted = HaltReason::ConsumerWealthZero;
    EXPECT_THROW(advance_period(f.state, f.streams), std::logic_error);
}

TEST(AdvancePeriod, PricesWageAndFactorsStayPositive) {
    for (std::uint64_t seed = 20; seed < 30; ++seed) {
        auto f = start(seed, seed * 3);
        double wage_adjust = f.state.wage_adjust;
        while (!f.state.halted && f.state.period < 400) {
            advance_period(f.state, f.streams);
            ASSERT_GT(f.state.wage, 0.0);
            ASSERT_LE(f.state.wage_adjust, wage_adjust);
            wage_adjust = f.state.wage_adjust;
            for (const auto& p : f.state.producers) {
                ASSERT_GT(p.price, 0.0);
                ASSERT_GT(p.price_adjust, 0.0);
            }
        }
    }
}

TEST(RunSimulation, RecordsAndOutcome) {
    const auto r = run_simulation(ScenarioConfig{}, 78, 178, {.audit = true});
    ASSERT_EQ(r.records.size(), r.periods() + 1);
    EXPECT_EQ(r.records.front().period, 0u);
    EXPECT_EQ(r.records.front().gini_consumers, 0.0);
    EXPECT_EQ(r.records.front().leisure_pct, 100.0);
    for (std::size_t t = 0; t < r.records.size(); ++t) EXPECT_EQ(r.records[t].period, t);
    if (r.halt) {
        EXPECT_EQ(r.outcome, to_outcome(*r.halt));
        EXPECT_LE(r.periods(), 1000u);
    } else {
        EXPECT_EQ(r.periods(), 1000u);
        EXPECT_TRUE(r.outcome == Outcome::Equilibrium || r.outcome == Outcome::Disequilibrium);
    }
    EXPECT_LT(r.max_conservation_error, 1e-9);
}

TEST(RunSimulation, AuditFindsNoViolationsOnSampleSeeds) {
    for (std::uint64_t k = 1; k <= 8; ++k) {
        const auto r = run_simulation(ScenarioConfig{}, k, 100 + k, {.audit = true});
        for (const auto& v : r.violations) ADD_FAILURE() << "seed " << k << ": " << v;
    }
}

TEST(RunSimulation, HorizonIsHonoured) {
    ScenarioConfig cfg;
    cfg.horizon = 25;
    const auto r = run_simulation(cfg, 2, 2);
    EXPECT_LE(r.periods(), 25u);
}

TEST(RunSimulation, SurvivorHistoriesCoverEveryPeriod) {
    const auto r = run_simulation(ScenarioConfig{}, 4, 5);
    const auto hist = survivor_price_histories(r);
    EXPECT_EQ(hist.size(), r.final_state.producers.size());
    for (const auto& [id, prices] : hist) EXPECT_EQ(prices.size(), r.periods());
    EXPECT_EQ(wage_history(r).size(), r.periods());
}

TEST(RunSimulation, SummaryMatchesFinalRecord) {
    const auto r = run_simulation(ScenarioConfig{}, 6, 7);
    const auto s = summarize_run(r);
    EXPECT_EQ(s.outcome, r.outcome);
    EXPECT_EQ(s.periods, r.periods());
    EXPECT_EQ(s.consumer_wealth, r.records.back().consumer_wealth);
    EXPECT_EQ(s.shut_firms, r.final_state.shut_firms);
    EXPECT_EQ(s.initial_gini_consumers, 0.0);
}
