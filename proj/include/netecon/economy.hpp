#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace netecon {

/// Dense agent identifier. Producers and consumers share one id space;
/// ids are assigned at scenario creation and never reused.
enum class AgentId : std::uint32_t {};

constexpr std::uint32_t to_index(AgentId id) noexcept { return static_cast<std::uint32_t>(id); }
constexpr AgentId agent_id(std::uint32_t index) noexcept { return static_cast<AgentId>(index); }

/// provider id -> output (or utility) elasticity of that provider's good.
using ElasticityMap = std::map<AgentId, double>;
/// consumer id -> share of the firm.
using ShareMap = std::map<AgentId, double>;

struct ProducerState {
    AgentId id{};
    double tech = 10.0;
    double labour_elasticity = 0.0;
    ElasticityMap input_elasticities;
    /// Degree of homogeneity; fixed for the firm's lifetime.
    double kappa = 1.0;
    double price = 1.0;
    double price_adjust = 0.3;
    double inventory = 0.0;
    double wealth = 0.0;
    /// Profit reinvestment ratio.
    double prr = 0.9;
    ShareMap shares;
    double last_demand = 0.0;
    bool marked_for_removal = false;

    double elasticity_sum() const {
        double s = labour_elasticity;
        for (const auto& [_, a] : input_elasticities) s += a;
        return s;
    }
};

struct ConsumerState {
    AgentId id{};
    ElasticityMap good_elasticities;
    double income_elasticity = 0.0;
    double leisure_elasticity = 0.0;
    double time_budget = 24.0;
    double wealth = 0.0;
    double last_profit_income = 0.0;
    double last_labour_sold = 0.0;
    double last_utility = 0.0;

    double elasticity_sum() const {
        double s = income_elasticity + leisure_elasticity;
        for (const auto& [_, a] : good_elasticities) s += a;
        return s;
    }
};

enum class HaltReason { SingleProducerLeft, ConsumerWealthZero, ProducersExhausted };

constexpr std::string_view to_string(HaltReason r) noexcept {
    switch (r) {
        case HaltReason::SingleProducerLeft: return "SingleProducerLeft";
        case HaltReason::ConsumerWealthZero: return "ConsumerWealthZero";
        case HaltReason::ProducersExhausted: return "ProducersExhausted";
    }
    return "?";
}

struct EconomyState {
    std::uint64_t period = 0;
    /// Live producers, ascending id.
    std::vector<ProducerState> producers;
    /// Consumers, ascending id. Consumers never leave.
    std::vector<ConsumerState> consumers;
    double wage = 30.0;
    double wage_adjust = 0.0005;
    std::optional<HaltReason> halted;

    std::uint32_t shut_firms = 0;
    /// Wealth held by firms at the moment they were removed. Kept so that
    /// money is accounted for after exits.
    double retired_wealth = 0.0;
    double initial_consumer_wealth = 0.0;

    const ProducerState* find_producer(AgentId id) const {
        auto it = std::lower_bound(producers.begin(), producers.end(), id,
                                   [](const ProducerState& p, AgentId v) { return p.id < v; });
        return (it != producers.end() && it->id == id) ? &*it : nullptr;
    }
    ProducerState* find_producer(AgentId id) {
        return const_cast<ProducerState*>(std::as_const(*this).find_producer(id));
    }

    double total_producer_wealth() const {
        double s = 0;
        for (const auto& p : producers) s += p.wealth;
        return s;
    }
    double total_consumer_wealth() const {
        double s = 0;
        for (const auto& c : consumers) s += c.wealth;
        return s;
    }
    /// Live producers + consumers + wealth carried out by removed firms.
    double total_wealth() const {
        return total_producer_wealth() + total_consumer_wealth() + retired_wealth;
    }
};

/// Directed edge (seller, buyer) of the trade graph.
using TradeEdge = std::pair<AgentId, AgentId>;

/// Edges of the trade graph, derived from every agent's provider set.
inline std::vector<TradeEdge> trade_edges(const EconomyState& s) {
    std::vector<TradeEdge> edges;
    for (const auto& p : s.producers)
        for (const auto& [seller, _] : p.input_elasticities) edges.emplace_back(seller, p.id);
    for (const auto& c : s.consumers)
        for (const auto& [seller, _] : c.good_elasticities) edges.emplace_back(seller, c.id);
    std::sort(edges.begin(), edges.end());
    return edges;
}

namespace detail {

inline std::string agent_label(std::string_view role, AgentId id) {
    return std::string(role) + " " + std::to_string(to_index(id));
}

}  // namespace detail

/// Human-readable description of every broken state invariant. Empty iff
/// the state is consistent. Never throws on bad data.
inline std::vector<std::string> validate_economy(const EconomyState& s, double tol = 1e-9) {
    std::vector<std::string> out;
    auto fail = [&](std::string msg) { out.push_back(std::move(msg)); };

    if (!(std::isfinite(s.wage) && s.wage > 0)) fail("wage is not positive and finite");
    if (!(std::isfinite(s.wage_adjust) && s.wage_adjust > 0))
        fail("wage adjustment factor is not positive and finite");

    if (!std::is_sorted(s.producers.begin(), s.producers.end(),
                        [](const auto& a, const auto& b) { return a.id < b.id; }))
        fail("producers are not ordered by id");

    std::map<AgentId, bool> is_consumer;
    for (const auto& c : s.consumers) is_consumer[c.id] = true;

    for (const auto& p : s.producers) {
        const auto who = detail::agent_label("producer", p.id);
        if (!(std::isfinite(p.price) && p.price > 0)) fail(who + ": price is not positive");
        if (!(std::isfinite(p.price_adjust) && p.price_adjust > 0))
            fail(who + ": price adjustment factor is not positive");
        if (!(std::isfinite(p.inventory) && p.inventory >= 0)) fail(who + ": inventory is negative");
        if (!std::isfinite(p.wealth)) fail(who + ": wealth is not finite");
        if (!(p.prr >= 0 && p.prr <= 1)) fail(who + ": reinvestment ratio outside [0,1]");
        if (!(p.kappa > 0)) fail(who + ": degree of homogeneity is not positive");
        if (!(p.labour_elasticity > 0)) fail(who + ": labour elasticity is not positive");
        for (const auto& [seller, a] : p.input_elasticities) {
            if (seller == p.id) fail(who + ": buys from itself");
            else if (!s.find_producer(seller))
                fail(who + ": provider " + std::to_string(to_index(seller)) + " is not live");
            if (!(a > 0 && std::isfinite(a))) fail(who + ": non-positive input elasticity");
        }
        if (std::abs(p.elasticity_sum() - p.kappa) > tol)
            fail(who + ": elasticities do not sum to kappa");
        double share_total = 0;
        for (const auto& [holder, sh] : p.shares) {
            if (!is_consumer.count(holder))
                fail(who + ": shareholder " + std::to_string(to_index(holder)) + " is not a consumer");
            if (!(sh >= 0 && sh <= 1)) fail(who + ": share outside [0,1]");
            share_total += sh;
        }
        if (std::abs(share_total - 1.0) > tol) fail(who + ": shares do not sum to 1");
    }

    for (const auto& c : s.consumers) {
        const auto who = detail::agent_label("consumer", c.id);
        for (const auto& [seller, a] : c.good_elasticities) {
            if (!s.find_producer(seller))
                fail(who + ": provider " + std::to_string(to_index(seller)) + " is not live");
            if (!(a > 0 && std::isfinite(a))) fail(who + ": non-positive good elasticity");
        }
        if (!(c.income_elasticity > 0 && c.leisure_elasticity > 0))
            fail(who + ": income/leisure elasticity is not positive");
        if (!(c.time_budget > 0)) fail(who + ": time budget is not positive");
        if (!(c.last_labour_sold >= 0 && c.last_labour_sold <= c.time_budget))
            fail(who + ": labour sold outside [0, T]");
        if (!std::isfinite(c.wealth)) fail(who + ": wealth is not finite");
        if (!(c.last_profit_income >= 0 && std::isfinite(c.last_profit_income)))
            fail(who + ": profit income is negative");
        if (!(std::isfinite(c.last_utility) && c.last_utility >= 0))
            fail(who + ": utility is not finite");
    }
    return out;
}

}  // namespace netecon
