#pragma once

#include <vector>

#include "netecon/economy.hpp"

namespace netecon {

/// One buyer's order with one seller, and what came of it.
struct Delivery {
    AgentId seller{};
    double demanded = 0.0;
    double delivered = 0.0;
    /// price * delivered
    double paid = 0.0;
};

struct ProducerLedger {
    AgentId id{};
    /// Market demand Q^d faced this period.
    double demand = 0.0;
    /// Inventory on hand before trade (Q^s).
    double supply = 0.0;
    double sold = 0.0;
    double revenue = 0.0;
    /// Orders to providers, in provider-id order.
    std::vector<Delivery> inputs;
    double input_cost = 0.0;
    double labour_demand = 0.0;
    double labour_hired = 0.0;
    double wage_bill = 0.0;
    double produced = 0.0;
    double profit = 0.0;
    /// Paid out to shareholders.
    double distributed = 0.0;

    double cost() const { return input_cost + wage_bill; }
};

struct ConsumerLedger {
    AgentId id{};
    /// Orders to providers, in provider-id order.
    std::vector<Delivery> goods;
    double goods_spending = 0.0;
    double labour_supply = 0.0;
    double labour_sold = 0.0;
    double wage_income = 0.0;
    double profit_income = 0.0;
    double utility = 0.0;
};

/// Everything that happened in one period. Producer and consumer entries are
/// aligned with the state's agent vectors at the start of the period.
struct PeriodLedger {
    std::vector<ProducerLedger> producers;
    std::vector<ConsumerLedger> consumers;
    double labour_demand = 0.0;
    double labour_supply = 0.0;
    double traded_labour = 0.0;

    double excess_labour() const { return labour_demand - labour_supply; }
};

}  // namespace netecon
