#pragma once

// The individual steps of one trading period. `advance_period` in engine.hpp
// strings them together in order.

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "netecon/economy.hpp"
#include "netecon/ledger.hpp"
#include "netecon/optimizer.hpp"
#include "netecon/rng.hpp"

namespace netecon {

/// Inventory at or below this is treated as exhausted.
inline constexpr double kRemovalThreshold = 1e-12;
/// Adjustment factors shrink by this factor while an update would be non-positive.
inline constexpr double kAdjustDecay = 0.9;

namespace detail {

template <class Agents>
std::size_t index_of(const Agents& agents, AgentId id) {
    auto it = std::lower_bound(agents.begin(), agents.end(), id,
                               [](const auto& a, AgentId v) { return a.id < v; });
    if (it == agents.end() || it->id != id) throw std::out_of_range("unknown agent id");
    return static_cast<std::size_t>(it - agents.begin());
}

}  // namespace detail

/// Demand formation: every agent's optimal plan at current prices, plus the
/// market demand each producer faces.
struct DemandPlan {
    /// Per producer: input bundle (providers in id order, labour last).
    std::vector<Bundle> producers;
    /// Per consumer: goods bundle (providers in id order) and labour supply.
    std::vector<Bundle> consumers;
    /// Q^d per producer, aligned with state.producers.
    std::vector<double> market_demand;
};

inline ProducerProblem producer_problem(const EconomyState& s, const ProducerState& p) {
    ProducerProblem prob;
    prob.own_price = p.price;
    prob.tech = p.tech;
    prob.budget = std::max(0.0, p.wealth);
    for (const auto& [seller, a] : p.input_elasticities) {
        prob.input_prices.push_back(s.find_producer(seller)->price);
        prob.elasticities.push_back(a);
    }
    prob.input_prices.push_back(s.wage);
    prob.elasticities.push_back(p.labour_elasticity);
    return prob;
}

inline ConsumerProblem consumer_problem(const EconomyState& s, const ConsumerState& c) {
    ConsumerProblem prob;
    for (const auto& [seller, a] : c.good_elasticities) {
        prob.goods_prices.push_back(s.find_producer(seller)->price);
        prob.goods_elasticities.push_back(a);
    }
    prob.income_elasticity = c.income_elasticity;
    prob.leisure_elasticity = c.leisure_elasticity;
    prob.wage = s.wage;
    prob.time_budget = c.time_budget;
    prob.expected_profit_income = c.last_profit_income;
    prob.budget = std::max(0.0, c.wealth);
    return prob;
}

inline DemandPlan collect_demands(const EconomyState& s) {
    if (s.halted) throw std::logic_error("collect_demands on a halted economy");
    DemandPlan plan;
    plan.market_demand.assign(s.producers.size(), 0.0);
    plan.producers.reserve(s.producers.size());
    plan.consumers.reserve(s.consumers.size());

    for (const auto& p : s.producers) {
        plan.producers.push_back(producer_choose_inputs(producer_problem(s, p)));
        std::size_t k = 0;
        for (const auto& [seller, _] : p.input_elasticities)
            plan.market_demand[detail::index_of(s.producers, seller)] += plan.producers.back().quantities[k++];
    }
    for (const auto& c : s.consumers) {
        plan.consumers.push_back(consumer_choose_bundle(consumer_problem(s, c)));
        std::size_t k = 0;
        for (const auto& [seller, _] : c.good_elasticities)
            plan.market_demand[detail::index_of(s.producers, seller)] += plan.consumers.back().quantities[k++];
    }
    return plan;
}

/// Proportional rationing: if total demand exceeds supply every buyer gets
/// the same fraction supply/total of what it asked for.
inline std::vector<double> ration_goods(double supply, std::span<const double> demands) {
    std::vector<double> out(demands.begin(), demands.end());
    double total = 0;
    for (double d : demands) total += d;
    if (total <= supply || total <= 0) return out;
    const double fill = std::max(0.0, supply) / total;
    for (double& d : out) d *= fill;
    return out;
}

/// Goods trade. Each producer sells from inventory; buyers are charged
/// price * delivered. Fills the per-agent goods entries of `ledger`.
inline void trade_goods(const EconomyState& s, const DemandPlan& plan, PeriodLedger& ledger) {
    struct Order {
        Delivery* slot;
        double quantity;
    };
    std::vector<std::vector<Order>> book(s.producers.size());

    ledger.producers.assign(s.producers.size(), ProducerLedger{});
    ledger.consumers.assign(s.consumers.size(), ConsumerLedger{});
    for (std::size_t i = 0; i < s.producers.size(); ++i) {
        const auto& p = s.producers[i];
        auto& entry = ledger.producers[i];
        entry.id = p.id;
        entry.inputs.clear();
        std::size_t k = 0;
        for (const auto& [seller, _] : p.input_elasticities)
            entry.inputs.push_back({seller, plan.producers[i].quantities[k++], 0.0, 0.0});
        entry.labour_demand = plan.producers[i].quantities.back();
    }
    for (std::size_t i = 0; i < s.consumers.size(); ++i) {
        const auto& c = s.consumers[i];
        auto& entry = ledger.consumers[i];
        entry.id = c.id;
        entry.goods.clear();
        std::size_t k = 0;
        for (const auto& [seller, _] : c.good_elasticities)
            entry.goods.push_back({seller, plan.consumers[i].quantities[k++], 0.0, 0.0});
        entry.labour_supply = plan.consumers[i].labour_supply;
    }
    // Slots are stable now that every inputs/goods vector has its final size.
    for (auto& entry : ledger.producers)
        for (auto& d : entry.inputs) book[detail::index_of(s.producers, d.seller)].push_back({&d, d.demanded});
    for (auto& entry : ledger.consumers)
        for (auto& d : entry.goods) book[detail::index_of(s.producers, d.seller)].push_back({&d, d.demanded});

    for (std::size_t k = 0; k < s.producers.size(); ++k) {
        const auto& seller = s.producers[k];
        auto& entry = ledger.producers[k];
        entry.supply = seller.inventory;
        entry.demand = plan.market_demand[k];
        std::vector<double> demands;
        demands.reserve(book[k].size());
        for (const auto& o : book[k]) demands.push_back(o.quantity);
        const auto deliveries = ration_goods(seller.inventory, demands);
        for (std::size_t j = 0; j < book[k].size(); ++j) {
            book[k][j].slot->delivered = deliveries[j];
            book[k][j].slot->paid = seller.price * deliveries[j];
            entry.sold += deliveries[j];
            entry.revenue += book[k][j].slot->paid;
        }
    }
    for (auto& entry : ledger.producers)
        for (const auto& d : entry.inputs) entry.input_cost += d.paid;
    for (auto& entry : ledger.consumers)
        for (const auto& d : entry.goods) entry.goods_spending += d.paid;
}

struct LabourClearing {
    /// Per producer.
    std::vector<double> hired;
    /// Per consumer.
    std::vector<double> sold;
    double demand = 0.0;
    double supply = 0.0;
    double traded = 0.0;
};

/// Aggregate labour market at a single wage: the short side is served in
/// full and the long side is prorated.
inline LabourClearing clear_labour_market(std::span<const double> demands, std::span<const double> supplies) {
    LabourClearing out;
    for (double d : demands) out.demand += d;
    for (double v : supplies) out.supply += v;
    out.traded = std::min(out.demand, out.supply);
    out.hired = ration_goods(out.supply, demands);
    out.sold = ration_goods(out.demand, supplies);
    return out;
}

inline void clear_labour_market(const EconomyState& s, PeriodLedger& ledger) {
    if (!(s.wage > 0)) throw std::logic_error("wage must be positive");
    std::vector<double> demands, supplies;
    for (const auto& p : ledger.producers) demands.push_back(p.labour_demand);
    for (const auto& c : ledger.consumers) supplies.push_back(c.labour_supply);
    const auto cleared = clear_labour_market(demands, supplies);
    for (std::size_t i = 0; i < ledger.producers.size(); ++i) {
        ledger.producers[i].labour_hired = cleared.hired[i];
        ledger.producers[i].wage_bill = s.wage * cleared.hired[i];
    }
    for (std::size_t i = 0; i < ledger.consumers.size(); ++i) {
        ledger.consumers[i].labour_sold = cleared.sold[i];
        ledger.consumers[i].wage_income = s.wage * cleared.sold[i];
    }
    ledger.labour_demand = cleared.demand;
    ledger.labour_supply = cleared.supply;
    ledger.traded_labour = cleared.traded;
}

/// Production from the inputs actually received, then the inventory update
/// I' = I - min(I, Q^d) + Q. Empty firms are marked for removal.
inline void produce_and_update_inventory(EconomyState& s, PeriodLedger& ledger) {
    for (std::size_t i = 0; i < s.producers.size(); ++i) {
        auto& p = s.producers[i];
        auto& entry = ledger.producers[i];
        std::vector<double> elasticities, quantities;
        std::size_t k = 0;
        for (const auto& [_, a] : p.input_elasticities) {
            elasticities.push_back(a);
            quantities.push_back(entry.inputs[k++].delivered);
        }
        elasticities.push_back(p.labour_elasticity);
        quantities.push_back(entry.labour_hired);
        entry.produced = cobb_douglas(p.tech, elasticities, quantities);
        p.inventory = p.inventory - std::min(p.inventory, entry.demand) + entry.produced;
        p.last_demand = entry.demand;
        if (p.inventory <= kRemovalThreshold) p.marked_for_removal = true;
    }
}

struct PriceStep {
    double price;
    double adjust;
};

/// Tatonnement step  price + adjust * excess.  While that would be
/// non-positive the adjustment factor decays by 10% and the step is retried.
inline PriceStep adjust_price(double price, double adjust, double excess) {
    if (!(price > 0) || !(adjust > 0)) throw std::invalid_argument("adjust_price: price and factor must be positive");
    if (!std::isfinite(excess)) throw std::invalid_argument("adjust_price: excess demand is not finite");
    double candidate = price + adjust * excess;
    while (candidate <= 0) {
        const double decayed = adjust * kAdjustDecay;
        // Denormal floor: the factor can no longer shrink, so the step is
        // below representable resolution and the price stays put.
        if (decayed == adjust || decayed == 0.0) return {price, adjust};
        adjust = decayed;
        candidate = price + adjust * excess;
    }
    return {candidate, adjust};
}

/// Wage follows the same rule as prices with the economy-wide factor.
inline void adjust_wage(EconomyState& s, double excess_labour) {
    const auto step = adjust_price(s.wage, s.wage_adjust, excess_labour);
    s.wage = step.price;
    s.wage_adjust = step.adjust;
}

/// Profit accounting. A profitable firm keeps PRR of its profit and pays the
/// rest to shareholders pro rata; a firm marked for removal pays out all of
/// it. Losses stay with the firm.
inline void distribute_profits(EconomyState& s, PeriodLedger& ledger) {
    for (auto& c : ledger.consumers) c.profit_income = 0.0;
    for (std::size_t i = 0; i < s.producers.size(); ++i) {
        auto& p = s.producers[i];
        auto& entry = ledger.producers[i];
        entry.profit = entry.revenue - entry.cost();
        entry.distributed = 0.0;
        if (entry.profit > 0) {
            const double retain = p.marked_for_removal ? 0.0 : p.prr;
            for (const auto& [holder, share] : p.shares) {
                const double payout = share * (1.0 - retain) * entry.profit;
                ledger.consumers[detail::index_of(s.consumers, holder)].profit_income += payout;
                entry.distributed += payout;
            }
        }
        p.wealth += entry.profit - entry.distributed;
    }
}

/// W' = W - goods spending + wage income + profit income, and the utility
/// realized from what was actually delivered and worked.
inline void settle_consumer_wealth(EconomyState& s, PeriodLedger& ledger) {
    for (std::size_t i = 0; i < s.consumers.size(); ++i) {
        auto& c = s.consumers[i];
        auto& entry = ledger.consumers[i];
        c.wealth = c.wealth - entry.goods_spending + entry.wage_income + entry.profit_income;

        std::vector<double> elasticities, goods;
        std::size_t k = 0;
        for (const auto& [_, a] : c.good_elasticities) {
            elasticities.push_back(a);
            goods.push_back(entry.goods[k++].delivered);
        }
        entry.utility = consumer_utility(elasticities, goods, c.income_elasticity, c.leisure_elasticity, s.wage,
                                         c.time_budget, entry.labour_sold, entry.profit_income);
        c.last_utility = entry.utility;
        c.last_labour_sold = entry.labour_sold;
        c.last_profit_income = entry.profit_income;
    }
}

namespace detail {

/// Rescales `weights` (and optionally one extra weight) so the total equals `target`.
inline void renormalize(ElasticityMap& weights, double* extra, double target) {
    double total = extra ? *extra : 0.0;
    for (const auto& [_, a] : weights) total += a;
    if (!(total > 0)) return;
    const double factor = target / total;
    for (auto& [_, a] : weights) a *= factor;
    if (extra) *extra *= factor;
}

inline void renormalize_consumer(ConsumerState& c, double target) {
    double total = c.income_elasticity + c.leisure_elasticity;
    for (const auto& [_, a] : c.good_elasticities) total += a;
    const double factor = target / total;
    for (auto& [_, a] : c.good_elasticities) a *= factor;
    c.income_elasticity *= factor;
    c.leisure_elasticity *= factor;
}

/// Drops `gone` from `providers`, or with probability 1/2 swaps it for a
/// uniformly chosen live producer the buyer does not already use. The coin
/// is only tossed when such a candidate exists.
inline void rewire_one(const EconomyState& s, ElasticityMap& providers, AgentId gone, AgentId self,
                       Xoshiro256& rng) {
    providers.erase(gone);
    std::vector<AgentId> candidates;
    for (const auto& p : s.producers)
        if (!p.marked_for_removal && p.id != self && !providers.count(p.id)) candidates.push_back(p.id);
    if (candidates.empty()) return;
    if (!rng.coin()) return;
    const auto pick = candidates[rng.uniform_int(0, candidates.size() - 1)];
    providers[pick] = rng.uniform01();
}

}  // namespace detail

/// Every buyer of a firm marked for removal drops or replaces that provider;
/// elasticities are then rescaled so each agent's total is unchanged.
inline void rewire_demanders(EconomyState& s, Xoshiro256& rng) {
    for (const auto& gone : s.producers) {
        if (!gone.marked_for_removal) continue;
        for (auto& p : s.producers) {
            if (p.marked_for_removal || !p.input_elasticities.count(gone.id)) continue;
            detail::rewire_one(s, p.input_elasticities, gone.id, p.id, rng);
            detail::renormalize(p.input_elasticities, &p.labour_elasticity, p.kappa);
        }
        for (auto& c : s.consumers) {
            if (!c.good_elasticities.count(gone.id)) continue;
            const double total = c.elasticity_sum();
            detail::rewire_one(s, c.good_elasticities, gone.id, c.id, rng);
            detail::renormalize_consumer(c, total);
        }
    }
}

/// Fresh provider set and utility elasticities for a consumer left with no
/// providers. Wealth and other dynamic state are kept.
inline void regenerate_consumer(EconomyState& s, Xoshiro256& rng, std::size_t consumer_index) {
    std::vector<AgentId> live;
    for (const auto& p : s.producers)
        if (!p.marked_for_removal) live.push_back(p.id);
    if (live.empty()) throw std::logic_error("regenerate_consumer: no live producer");
    auto& c = s.consumers.at(consumer_index);
    const auto count = static_cast<std::size_t>(rng.uniform_int(1, live.size()));
    c.good_elasticities.clear();
    for (auto idx : rng.sample_without_replacement(live.size(), count)) c.good_elasticities[live[idx]] = 0.0;
    for (auto& [_, a] : c.good_elasticities) a = rng.uniform01();
    c.income_elasticity = rng.uniform01();
    c.leisure_elasticity = rng.uniform01();
}

/// Removes marked firms. Their wealth is moved to `retired_wealth`.
inline void remove_marked_producers(EconomyState& s) {
    auto it = std::stable_partition(s.producers.begin(), s.producers.end(),
                                    [](const ProducerState& p) { return !p.marked_for_removal; });
    for (auto k = it; k != s.producers.end(); ++k) {
        s.retired_wealth += k->wealth;
        ++s.shut_firms;
    }
    s.producers.erase(it, s.producers.end());
}

/// Relative level of total consumer wealth at which the economy is
/// considered to have run out of consumer money.
inline constexpr double kConsumerWealthZero = 1e-9;

inline std::optional<HaltReason> check_termination(const EconomyState& s) {
    if (s.producers.empty()) return HaltReason::ProducersExhausted;
    if (s.producers.size() <= 1) return HaltReason::SingleProducerLeft;
    if (s.total_consumer_wealth() <= kConsumerWealthZero * s.initial_consumer_wealth)
        return HaltReason::ConsumerWealthZero;
    return std::nullopt;
}

}  // namespace netecon
