#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "netecon/economy.hpp"
#include "netecon/engine.hpp"
#include "netecon/equilibrium.hpp"
#include "netecon/metrics.hpp"
#include "netecon/scenario.hpp"

namespace netecon {

struct RunOptions {
    /// Validate state, ledger and money balance after every period.
    bool audit = false;
    /// Relative tolerance for the per-period money balance check.
    double conservation_tolerance = 1e-9;
};

struct RunResult {
    std::uint64_t s1 = 0;
    std::uint64_t s2 = 0;
    Outcome outcome = Outcome::Disequilibrium;
    std::optional<HaltReason> halt;
    /// records[0] is the initial state; records[t] follows period t.
    std::vector<PeriodRecord> records;
    EconomyState initial;
    EconomyState final_state;
    /// Audit findings, prefixed with the period. Empty unless audited.
    std::vector<std::string> violations;
    /// Largest |total wealth - initial total| / initial total seen.
    double max_conservation_error = 0.0;

    std::uint64_t periods() const { return final_state.period; }
};

/// Rationing and accounting checks on one period's ledger.
inline std::vector<std::string> check_ledger(const PeriodLedger& ledger) {
    std::vector<std::string> out;
    for (const auto& p : ledger.producers) {
        const auto who = "producer " + std::to_string(to_index(p.id));
        if (p.sold > p.supply + 1e-12 * std::max(1.0, p.supply)) out.push_back(who + ": sold more than inventory");
        if (p.labour_hired > p.labour_demand * (1 + 1e-12)) out.push_back(who + ": hired more labour than demanded");
        for (const auto& d : p.inputs)
            if (d.delivered > d.demanded * (1 + 1e-12)) out.push_back(who + ": received more than ordered");
    }
    for (const auto& c : ledger.consumers) {
        const auto who = "consumer " + std::to_string(to_index(c.id));
        for (const auto& d : c.goods)
            if (d.delivered > d.demanded * (1 + 1e-12)) out.push_back(who + ": received more than ordered");
        if (c.labour_sold > c.labour_supply * (1 + 1e-12)) out.push_back(who + ": sold more labour than offered");
    }
    const double traded = std::min(ledger.labour_demand, ledger.labour_supply);
    if (std::abs(traded - ledger.traded_labour) > 1e-12 * std::max(1.0, traded))
        out.push_back("labour market: traded != min(demand, supply)");
    return out;
}

/// Price history of every producer alive at the end of the run, one entry
/// per period (post-adjustment price).
inline std::vector<PriceHistory> survivor_price_histories(const RunResult& r) {
    std::map<AgentId, std::vector<double>> series;
    for (const auto& p : r.final_state.producers) series[p.id];
    for (std::size_t t = 1; t < r.records.size(); ++t)
        for (const auto& snap : r.records[t].producers)
            if (auto it = series.find(snap.id); it != series.end()) it->second.push_back(snap.price);
    return {series.begin(), series.end()};
}

inline std::vector<double> wage_history(const RunResult& r) {
    std::vector<double> w;
    for (std::size_t t = 1; t < r.records.size(); ++t) w.push_back(r.records[t].wage);
    return w;
}

/// Runs one economy to the horizon or until it halts, then classifies it.
inline RunResult run_simulation(const ScenarioConfig& cfg, std::uint64_t s1, std::uint64_t s2,
                                const RunOptions& opts = {}) {
    validate(cfg);
    RunResult r;
    r.s1 = s1;
    r.s2 = s2;
    auto streams = derive_streams(s1, s2);
    EconomyState state = sample_scenario(cfg, streams);
    bootstrap_inventories(state);
    r.initial = state;
    r.records.reserve(cfg.horizon + 1);
    r.records.push_back(make_period_record(state, 0.0));

    const double initial_total = state.total_wealth();
    auto audit = [&](const EconomyState& s, const PeriodLedger& ledger, const PeriodRecord& rec, double prev_wage_adjust) {
        const auto tag = "t=" + std::to_string(s.period) + ": ";
        for (auto& v : validate_economy(s)) r.violations.push_back(tag + v);
        for (auto& v : check_ledger(ledger)) r.violations.push_back(tag + v);
        if (!rec.finite()) r.violations.push_back(tag + "non-finite period record");
        if (s.wage_adjust > prev_wage_adjust) r.violations.push_back(tag + "wage adjustment factor increased");
        const double err = initial_total > 0 ? std::abs(s.total_wealth() - initial_total) / initial_total : 0.0;
        if (err > opts.conservation_tolerance * static_cast<double>(std::max<std::uint64_t>(1, s.period)))
            r.violations.push_back(tag + "money not conserved");
    };

    PeriodLedger ledger;
    while (!state.halted && state.period < cfg.horizon) {
        const double prev_wage_adjust = state.wage_adjust;
        r.records.push_back(advance_period(state, streams, opts.audit ? &ledger : nullptr));
        if (initial_total > 0)
            r.max_conservation_error =
                std::max(r.max_conservation_error, std::abs(state.total_wealth() - initial_total) / initial_total);
        if (opts.audit) audit(state, ledger, r.records.back(), prev_wage_adjust);
    }
    r.halt = state.halted;
    r.final_state = std::move(state);
    const auto histories = survivor_price_histories(r);
    const auto wages = wage_history(r);
    r.outcome = classify_run(histories, wages, r.halt, cfg.detector());
    return r;
}

/// The per-run line of a sweep: outcome plus final-period aggregates.
struct RunSummary {
    std::uint64_t s1 = 0;
    std::uint64_t s2 = 0;
    std::optional<Outcome> outcome;
    std::uint64_t periods = 0;
    double producer_wealth = 0.0;
    double consumer_wealth = 0.0;
    std::uint32_t shut_firms = 0;
    std::uint32_t live_producers = 0;
    double gini_consumers = 0.0;
    double gini_producers = 0.0;
    double total_utility = 0.0;
    double wage = 0.0;
    double leisure_pct = 0.0;
    double excess_labour = 0.0;
    double initial_gini_consumers = 0.0;
    /// Set when the run failed; the other fields are then meaningless.
    std::optional<std::string> error;

    friend bool operator==(const RunSummary&, const RunSummary&) = default;
};

inline RunSummary summarize_run(const RunResult& r) {
    const auto& last = r.records.back();
    RunSummary s;
    s.s1 = r.s1;
    s.s2 = r.s2;
    s.outcome = r.outcome;
    s.periods = r.periods();
    s.producer_wealth = last.producer_wealth;
    s.consumer_wealth = last.consumer_wealth;
    s.shut_firms = last.shut_firms;
    s.live_producers = last.live_producers;
    s.gini_consumers = last.gini_consumers;
    s.gini_producers = last.gini_producers;
    s.total_utility = last.total_utility;
    s.wage = last.wage;
    s.leisure_pct = last.leisure_pct;
    s.excess_labour = last.excess_labour;
    s.initial_gini_consumers = r.records.front().gini_consumers;
    return s;
}

}  // namespace netecon
