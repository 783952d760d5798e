#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "netecon/economy.hpp"
#include "netecon/equilibrium.hpp"
#include "netecon/market.hpp"
#include "netecon/rng.hpp"

namespace netecon {

/// Exogenous initial conditions and run controls. Defaults reproduce the
/// reference experiment: 10 firms, 80 households.
struct ScenarioConfig {
    std::uint32_t num_producers = 10;
    std::uint32_t num_consumers = 80;
    double producer_wealth = 1'000'000.0;
    double consumer_wealth = 1'000.0;
    double wage_adjust = 0.0005;
    double price_adjust = 0.3;
    /// Technology level A of every firm.
    double technology = 10.0;
    /// Carried for completeness; no model rule uses it.
    double time_period = 365.0;
    double prr = 0.9;
    double initial_wage = 30.0;
    /// Initial prices ~ Uniform(0, max_initial_price).
    double max_initial_price = 100.0;
    /// Returns to scale ~ |Normal(mean, sd)|.
    double returns_to_scale_mean = 0.9;
    double returns_to_scale_sd = 0.6;
    /// Hours available to each consumer per period.
    double time_budget = 24.0;
    std::uint32_t horizon = 1000;
    double eq_tolerance = 1e-3;
    std::uint32_t rolling_window = 100;
    std::uint32_t scan_begin = 500;
    std::uint32_t scan_end = 900;

    DetectorConfig detector() const { return {eq_tolerance, rolling_window, scan_begin, scan_end}; }

    friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

class ConfigInvalid : public std::invalid_argument {
public:
    explicit ConfigInvalid(std::string field)
        : std::invalid_argument("invalid config field: " + field), field_(std::move(field)) {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

inline void validate(const ScenarioConfig& c) {
    auto require = [](bool ok, const char* field) {
        if (!ok) throw ConfigInvalid(field);
    };
    require(c.num_producers >= 1, "num_producers");
    require(c.num_consumers >= 1, "num_consumers");
    require(std::isfinite(c.producer_wealth) && c.producer_wealth >= 0, "producer_wealth");
    require(std::isfinite(c.consumer_wealth) && c.consumer_wealth >= 0, "consumer_wealth");
    require(std::isfinite(c.wage_adjust) && c.wage_adjust > 0, "wage_adjust");
    require(std::isfinite(c.price_adjust) && c.price_adjust > 0, "price_adjust");
    require(std::isfinite(c.technology) && c.technology > 0, "technology");
    require(c.prr >= 0 && c.prr <= 1, "prr");
    require(std::isfinite(c.initial_wage) && c.initial_wage > 0, "initial_wage");
    require(std::isfinite(c.max_initial_price) && c.max_initial_price > 0, "max_initial_price");
    require(std::isfinite(c.returns_to_scale_mean), "returns_to_scale_mean");
    require(std::isfinite(c.returns_to_scale_sd) && c.returns_to_scale_sd >= 0, "returns_to_scale_sd");
    require(std::isfinite(c.returns_to_scale_mean) &&
                (c.returns_to_scale_mean != 0 || c.returns_to_scale_sd > 0),
            "returns_to_scale_mean");
    require(std::isfinite(c.time_budget) && c.time_budget > 0, "time_budget");
    require(c.eq_tolerance > 0, "eq_tolerance");
    require(c.rolling_window >= 1, "rolling_window");
    require(c.scan_begin < c.scan_end, "scan_end");
}

/// Initial economy for a seed pair. Producers get ids [0, P), consumers
/// [P, P+C). Inventories are zero until `bootstrap_inventories`.
inline EconomyState sample_scenario(const ScenarioConfig& cfg, SeedStreams& rng) {
    validate(cfg);
    EconomyState s;
    s.wage = cfg.initial_wage;
    s.wage_adjust = cfg.wage_adjust;
    const std::uint32_t np = cfg.num_producers;
    const std::uint32_t nc = cfg.num_consumers;

    s.producers.resize(np);
    for (std::uint32_t i = 0; i < np; ++i) {
        auto& p = s.producers[i];
        p.id = agent_id(i);
        p.tech = cfg.technology;
        p.price_adjust = cfg.price_adjust;
        p.wealth = cfg.producer_wealth;
        p.prr = cfg.prr;

        p.price = rng.prices.uniform(0.0, cfg.max_initial_price);
        do {
            p.kappa = std::abs(rng.kappa.normal(cfg.returns_to_scale_mean, cfg.returns_to_scale_sd));
        } while (!(p.kappa > 0));

        const auto holders = static_cast<std::size_t>(rng.shareholders.uniform_int(1, nc));
        double total = 0;
        for (auto c : rng.shareholders.sample_without_replacement(nc, holders)) p.shares[agent_id(np + c)] = 0.0;
        for (auto& [_, share] : p.shares) total += (share = rng.shareholders.uniform01());
        for (auto& [_, share] : p.shares) share /= total;
    }

    // Producers never buy from themselves, so at most np-1 providers.
    for (std::uint32_t i = 0; i < np; ++i) {
        auto& p = s.producers[i];
        if (np > 1) {
            const auto count = static_cast<std::size_t>(rng.providers.uniform_int(1, np - 1));
            for (auto k : rng.providers.sample_without_replacement(np - 1, count))
                p.input_elasticities[agent_id(k < i ? k : k + 1)] = 0.0;
        }
        double total = 0;
        for (auto& [_, a] : p.input_elasticities) total += (a = rng.elasticities.uniform01());
        p.labour_elasticity = rng.elasticities.uniform01();
        total += p.labour_elasticity;
        const double factor = p.kappa / total;
        for (auto& [_, a] : p.input_elasticities) a *= factor;
        p.labour_elasticity *= factor;
    }

    s.consumers.resize(nc);
    for (std::uint32_t j = 0; j < nc; ++j) {
        auto& c = s.consumers[j];
        c.id = agent_id(np + j);
        c.time_budget = cfg.time_budget;
        c.wealth = cfg.consumer_wealth;
        const auto count = static_cast<std::size_t>(rng.providers.uniform_int(1, np));
        for (auto k : rng.providers.sample_without_replacement(np, count)) c.good_elasticities[agent_id(k)] = 0.0;
        for (auto& [_, a] : c.good_elasticities) a = rng.elasticities.uniform01();
        c.income_elasticity = rng.elasticities.uniform01();
        c.leisure_elasticity = rng.elasticities.uniform01();
    }
    s.initial_consumer_wealth = s.total_consumer_wealth();
    return s;
}

/// Sets every producer's inventory to the demand it will face in the first
/// period. Nothing else changes.
inline void bootstrap_inventories(EconomyState& s) {
    const auto plan = collect_demands(s);
    for (std::size_t k = 0; k < s.producers.size(); ++k) s.producers[k].inventory = plan.market_demand[k];
}

}  // namespace netecon
