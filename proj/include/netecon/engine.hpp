#pragma once

#include <stdexcept>

#include "netecon/economy.hpp"
#include "netecon/ledger.hpp"
#include "netecon/market.hpp"
#include "netecon/metrics.hpp"
#include "netecon/rng.hpp"

namespace netecon {

/// One period:
///   demands -> goods trade -> labour market -> production and inventory
///   -> prices -> wage -> profits -> consumer settlement -> rewiring
///   -> consumer regeneration -> removal of empty firms -> termination check.
/// Sets `s.halted` when a termination condition fires. If `audit` is given
/// it receives the period's ledger.
inline PeriodRecord advance_period(EconomyState& s, SeedStreams& streams, PeriodLedger* audit = nullptr) {
    if (s.halted) throw std::logic_error("advance_period on a halted economy");

    PeriodLedger ledger;
    const auto plan = collect_demands(s);
    trade_goods(s, plan, ledger);
    clear_labour_market(s, ledger);
    produce_and_update_inventory(s, ledger);

    for (std::size_t k = 0; k < s.producers.size(); ++k) {
        auto& p = s.producers[k];
        const auto step = adjust_price(p.price, p.price_adjust, ledger.producers[k].demand - p.inventory);
        p.price = step.price;
        p.price_adjust = step.adjust;
    }
    adjust_wage(s, ledger.excess_labour());

    distribute_profits(s, ledger);
    settle_consumer_wealth(s, ledger);

    rewire_demanders(s, streams.rewire);
    if (std::any_of(s.producers.begin(), s.producers.end(), [](const auto& p) { return !p.marked_for_removal; })) {
        for (std::size_t j = 0; j < s.consumers.size(); ++j)
            if (s.consumers[j].good_elasticities.empty()) regenerate_consumer(s, streams.regen, j);
    }
    remove_marked_producers(s);

    ++s.period;
    s.halted = check_termination(s);

    auto record = make_period_record(s, ledger.excess_labour());
    if (audit) *audit = std::move(ledger);
    return record;
}

}  // namespace netecon
