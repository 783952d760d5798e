#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "netecon/economy.hpp"

namespace netecon {

class UndefinedForZeroTotal : public std::domain_error {
public:
    UndefinedForZeroTotal() : std::domain_error("gini: values sum to zero") {}
};

/// Mean-absolute-difference Gini:  sum_ij |x_i - x_j| / (2 n^2 mean).
inline double gini(std::span<const double> values) {
    if (values.empty()) throw std::invalid_argument("gini: empty input");
    double total = 0;
    for (double v : values) total += v;
    if (!(total > 0)) throw UndefinedForZeroTotal();
    const auto n = static_cast<double>(values.size());
    double diff = 0;
    for (std::size_t i = 0; i < values.size(); ++i)
        for (std::size_t j = i + 1; j < values.size(); ++j) diff += std::abs(values[i] - values[j]);
    // Each unordered pair was counted once.
    return (2.0 * diff) / (2.0 * n * total);
}

/// Gini, or 0 where it is undefined (empty population or zero total).
inline double gini_or_zero(std::span<const double> values) {
    try {
        return gini(values);
    } catch (const std::exception&) {
        return 0.0;
    }
}

/// Percent of the aggregate time endowment not sold as labour.
inline double leisure_proportion(std::span<const double> time_budgets, std::span<const double> labour_sold) {
    double total = 0, idle = 0;
    for (std::size_t i = 0; i < time_budgets.size(); ++i) {
        total += time_budgets[i];
        idle += time_budgets[i] - labour_sold[i];
    }
    return total > 0 ? 100.0 * idle / total : 100.0;
}

inline double total_utility(std::span<const ConsumerState> consumers) {
    double u = 0;
    for (const auto& c : consumers) u += c.last_utility;
    return u;
}

struct ProducerSnapshot {
    AgentId id{};
    double price = 0.0;
    double inventory = 0.0;
    double demand = 0.0;
    double price_adjust = 0.0;

    friend bool operator==(const ProducerSnapshot&, const ProducerSnapshot&) = default;
};

/// Per-period aggregates. Flow columns (utility, leisure, excess labour)
/// describe the period just completed; at period 0 nothing has traded yet.
struct PeriodRecord {
    std::uint64_t period = 0;
    double wage = 0.0;
    double wage_adjust = 0.0;
    double producer_wealth = 0.0;
    double consumer_wealth = 0.0;
    double gini_producers = 0.0;
    double gini_consumers = 0.0;
    double total_utility = 0.0;
    double leisure_pct = 100.0;
    double excess_labour = 0.0;
    std::uint32_t live_producers = 0;
    std::uint32_t shut_firms = 0;
    std::vector<ProducerSnapshot> producers;

    friend bool operator==(const PeriodRecord&, const PeriodRecord&) = default;

    bool finite() const {
        for (double v : {wage, wage_adjust, producer_wealth, consumer_wealth, gini_producers, gini_consumers,
                         total_utility, leisure_pct, excess_labour})
            if (!std::isfinite(v)) return false;
        for (const auto& p : producers)
            for (double v : {p.price, p.inventory, p.demand, p.price_adjust})
                if (!std::isfinite(v)) return false;
        return true;
    }
};

inline PeriodRecord make_period_record(const EconomyState& s, double excess_labour) {
    PeriodRecord r;
    r.period = s.period;
    r.wage = s.wage;
    r.wage_adjust = s.wage_adjust;
    r.producer_wealth = s.total_producer_wealth();
    r.consumer_wealth = s.total_consumer_wealth();

    std::vector<double> wealth;
    for (const auto& p : s.producers) wealth.push_back(std::max(0.0, p.wealth));
    r.gini_producers = gini_or_zero(wealth);
    wealth.clear();
    std::vector<double> budgets, sold;
    for (const auto& c : s.consumers) {
        wealth.push_back(std::max(0.0, c.wealth));
        budgets.push_back(c.time_budget);
        sold.push_back(c.last_labour_sold);
    }
    r.gini_consumers = gini_or_zero(wealth);
    r.total_utility = total_utility(s.consumers);
    r.leisure_pct = leisure_proportion(budgets, sold);
    r.excess_labour = excess_labour;
    r.live_producers = static_cast<std::uint32_t>(s.producers.size());
    r.shut_firms = s.shut_firms;
    for (const auto& p : s.producers) r.producers.push_back({p.id, p.price, p.inventory, p.last_demand, p.price_adjust});
    return r;
}

}  // namespace netecon
