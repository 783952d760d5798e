#pragma once

// Brute-force maximizers used to check the closed-form solutions. They share
// no code with the optimizer beyond the problem structs.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

#include "netecon/optimizer.hpp"

namespace oracle {

struct Best {
    std::vector<double> x;
    double value = -std::numeric_limits<double>::infinity();
};

inline double output(double scale, const std::vector<double>& el, const std::vector<double>& x) {
    double y = scale;
    for (std::size_t i = 0; i < x.size(); ++i) y *= std::pow(x[i], el[i]);
    return y;
}

inline double profit(const netecon::ProducerProblem& p, const std::vector<double>& x) {
    double cost = 0;
    for (std::size_t i = 0; i < x.size(); ++i) cost += p.input_prices[i] * x[i];
    return p.own_price * output(p.tech, p.elasticities, x) - cost;
}

/// Visits every composition of `steps` into `parts` non-negative integers.
inline void for_each_composition(std::size_t parts, int steps, const std::function<void(const std::vector<int>&)>& f) {
    std::vector<int> c(parts, 0);
    std::function<void(std::size_t, int)> rec = [&](std::size_t i, int left) {
        if (i + 1 == parts) {
            c[i] = left;
            f(c);
            return;
        }
        for (int k = 0; k <= left; ++k) {
            c[i] = k;
            rec(i + 1, left - k);
        }
    };
    rec(0, steps);
}

/// Best gridpoint on the budget surface sum p_i x_i = W for the objective
/// prod x_i^el_i, with spending shares on a simplex grid of `steps` cells.
inline Best budget_surface(const std::vector<double>& el, const std::vector<double>& prices, double budget,
                           int steps) {
    Best best;
    for_each_composition(el.size(), steps, [&](const std::vector<int>& c) {
        std::vector<double> x(el.size());
        for (std::size_t i = 0; i < x.size(); ++i) x[i] = (c[i] * budget / steps) / prices[i];
        const double v = output(1.0, el, x);
        if (v > best.value) best = {x, v};
    });
    return best;
}

/// Pattern search in log coordinates over the feasible box for producer
/// profit, starting from a coarse grid; infeasible points are rejected.
inline Best producer_profit_search(const netecon::ProducerProblem& p, int points = 5, int rounds = 80) {
    const std::size_t n = p.elasticities.size();
    auto feasible = [&](const std::vector<double>& x) {
        double cost = 0;
        for (std::size_t i = 0; i < n; ++i) cost += p.input_prices[i] * x[i];
        return cost <= p.budget;
    };
    std::vector<double> lo(n), hi(n);
    for (std::size_t i = 0; i < n; ++i) {
        hi[i] = std::log(p.budget / p.input_prices[i]);
        lo[i] = hi[i] - 30.0;
    }
    std::vector<double> centre(n), span(n);
    for (std::size_t i = 0; i < n; ++i) {
        centre[i] = 0.5 * (lo[i] + hi[i]);
        span[i] = 0.5 * (hi[i] - lo[i]);
    }
    Best best{std::vector<double>(n, 0.0), 0.0};
    for (int r = 0; r < rounds; ++r) {
        std::vector<int> idx(n, 0);
        std::vector<double> round_best = centre;
        while (true) {
            std::vector<double> u(n), x(n);
            for (std::size_t i = 0; i < n; ++i) {
                u[i] = std::clamp(centre[i] + span[i] * (2.0 * idx[i] / (points - 1) - 1.0), lo[i], hi[i]);
                x[i] = std::exp(u[i]);
            }
            if (feasible(x)) {
                const double v = profit(p, x);
                if (v > best.value) {
                    best = {x, v};
                    round_best = u;
                }
            }
            std::size_t k = 0;
            while (k < n && ++idx[k] == points) idx[k++] = 0;
            if (k == n) break;
        }
        centre = round_best;
        for (auto& s : span) s *= 0.7;
    }
    return best;
}

/// Consumer objective with the budget remainder and the labour choice:
/// prod q_i^a_i * (W - sum P q)^(b+g) * (wL + V)^b * (T - L)^g.
inline double consumer_objective(const netecon::ConsumerProblem& c, const std::vector<double>& q, double labour) {
    double spent = 0;
    for (std::size_t i = 0; i < q.size(); ++i) spent += c.goods_prices[i] * q[i];
    const double remainder = c.budget - spent;
    if (remainder < 0) return -std::numeric_limits<double>::infinity();
    double v = std::pow(remainder, c.income_elasticity + c.leisure_elasticity);
    for (std::size_t i = 0; i < q.size(); ++i) v *= std::pow(q[i], c.goods_elasticities[i]);
    v *= std::pow(c.wage * labour + c.expected_profit_income, c.income_elasticity);
    v *= std::pow(c.time_budget - labour, c.leisure_elasticity);
    return v;
}

struct ConsumerBest {
    std::vector<double> q;
    double labour = 0;
    double value = -std::numeric_limits<double>::infinity();
};

/// Grid over the budget simplex (goods plus remainder) and over L in [0, T].
inline ConsumerBest consumer_search(const netecon::ConsumerProblem& c, int steps, int labour_steps) {
    const std::size_t n = c.goods_elasticities.size();
    std::vector<double> el = c.goods_elasticities;
    el.push_back(c.income_elasticity + c.leisure_elasticity);
    std::vector<double> prices = c.goods_prices;
    prices.push_back(1.0);
    const auto goods = budget_surface(el, prices, c.budget, steps);

    double best_l = 0, best_lv = -1;
    for (int k = 0; k <= labour_steps; ++k) {
        const double l = c.time_budget * k / labour_steps;
        const double v = std::pow(c.wage * l + c.expected_profit_income, c.income_elasticity) *
                         std::pow(c.time_budget - l, c.leisure_elasticity);
        if (v > best_lv) {
            best_lv = v;
            best_l = l;
        }
    }
    ConsumerBest best;
    best.q.assign(goods.x.begin(), goods.x.begin() + static_cast<std::ptrdiff_t>(n));
    best.labour = best_l;
    best.value = consumer_objective(c, best.q, best.labour);
    return best;
}

}  // namespace oracle
