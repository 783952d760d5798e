#pragma once

// Closed-form Cobb-Douglas maximizers.
//
// Producers maximize  P*A*prod(x_i^a_i) - sum(p_i*x_i)  subject to
// sum(p_i*x_i) <= W, where the last coordinate is labour priced at the wage.
// With sum(a) < 1 the objective is concave and its stationary point solves
// the log-linear first-order system  M log x = b,  M = 1*a^T - I,
// b_i = log(p_i / (a_i*P*A)). When that point is unaffordable, or the
// technology has sum(a) >= 1, the maximizer lies on the budget hyperplane
// where Cobb-Douglas share rules apply: x_i = a_i*W / (p_i*sum(a)).

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

namespace netecon {

/// Sums of elasticities within this distance of 1 are treated as constant
/// returns, where the first-order system is singular.
inline constexpr double kSingularTolerance = 1e-9;

struct ProducerProblem {
    double own_price = 1.0;
    double tech = 1.0;
    /// Provider prices, then the wage as the last entry.
    std::vector<double> input_prices;
    /// Input elasticities, then the labour elasticity as the last entry.
    std::vector<double> elasticities;
    double budget = 0.0;
};

struct ConsumerProblem {
    std::vector<double> goods_prices;
    std::vector<double> goods_elasticities;
    double income_elasticity = 0.0;
    double leisure_elasticity = 0.0;
    double wage = 1.0;
    double time_budget = 24.0;
    /// Naive expectation: last period's realized profit income.
    double expected_profit_income = 0.0;
    double budget = 0.0;
};

struct Bundle {
    /// Aligned with the problem's inputs (labour last for producers).
    std::vector<double> quantities;
    /// Consumers only.
    double labour_supply = 0.0;
};

class SingularSystem : public std::domain_error {
public:
    SingularSystem() : std::domain_error("elasticities sum to one: first-order system is singular") {}
};

inline double sum_of(std::span<const double> v) { return std::accumulate(v.begin(), v.end(), 0.0); }

inline double bundle_cost(std::span<const double> prices, std::span<const double> quantities) {
    double c = 0;
    for (std::size_t i = 0; i < prices.size(); ++i) c += prices[i] * quantities[i];
    return c;
}

/// A * prod(x_i^a_i). Zero if any input is zero.
inline double cobb_douglas(double scale, std::span<const double> elasticities,
                           std::span<const double> quantities) {
    double f = scale;
    for (std::size_t i = 0; i < elasticities.size(); ++i) {
        if (quantities[i] <= 0) return 0.0;
        f *= std::pow(quantities[i], elasticities[i]);
    }
    return f;
}

inline double producer_profit(const ProducerProblem& p, std::span<const double> x) {
    return p.own_price * cobb_douglas(p.tech, p.elasticities, x) - bundle_cost(p.input_prices, x);
}

namespace detail {

inline void check_producer_problem(const ProducerProblem& p) {
    if (p.input_prices.size() != p.elasticities.size() || p.elasticities.empty())
        throw std::invalid_argument("producer problem: prices and elasticities must align");
    for (double price : p.input_prices)
        if (!(price > 0)) throw std::invalid_argument("producer problem: input prices must be positive");
    if (!(p.own_price > 0) || !(p.tech > 0))
        throw std::invalid_argument("producer problem: own price and technology must be positive");
}

}  // namespace detail

/// Interior stationary point of the profit function. Requires
/// sum(elasticities) <= 1 - kSingularTolerance; throws SingularSystem within
/// kSingularTolerance of 1. The result may be non-finite when the optimum
/// is astronomically large; callers compare its cost against a budget.
inline Bundle solve_unconstrained_producer(const ProducerProblem& p) {
    detail::check_producer_problem(p);
    const double total = sum_of(p.elasticities);
    if (std::abs(total - 1.0) < kSingularTolerance) throw SingularSystem();
    if (total > 1.0) throw std::invalid_argument("unconstrained producer requires decreasing returns");

    const auto n = static_cast<Eigen::Index>(p.elasticities.size());
    const Eigen::Map<const Eigen::VectorXd> alpha(p.elasticities.data(), n);
    Eigen::MatrixXd m = Eigen::VectorXd::Ones(n) * alpha.transpose();
    m.diagonal().array() -= 1.0;
    Eigen::VectorXd b(n);
    for (Eigen::Index i = 0; i < n; ++i)
        b[i] = std::log(p.input_prices[i] / (p.elasticities[i] * p.own_price * p.tech));

    const Eigen::VectorXd log_x = m.partialPivLu().solve(b);
    Bundle out;
    out.quantities.resize(p.elasticities.size());
    for (Eigen::Index i = 0; i < n; ++i) out.quantities[i] = std::exp(log_x[i]);
    return out;
}

/// Share rule on the budget hyperplane: spends exactly `budget`.
inline Bundle solve_constrained_shares(std::span<const double> elasticities,
                                       std::span<const double> prices, double budget) {
    if (elasticities.size() != prices.size())
        throw std::invalid_argument("constrained shares: prices and elasticities must align");
    const double total = sum_of(elasticities);
    if (!(total > 0)) throw std::invalid_argument("constrained shares: elasticities must sum to > 0");
    Bundle out;
    out.quantities.resize(elasticities.size(), 0.0);
    if (budget <= 0) return out;
    for (std::size_t i = 0; i < elasticities.size(); ++i)
        out.quantities[i] = elasticities[i] * budget / (prices[i] * total);
    return out;
}

/// Profit-maximizing input demand under the budget.
inline Bundle producer_choose_inputs(const ProducerProblem& p) {
    detail::check_producer_problem(p);
    const double budget = std::max(0.0, p.budget);
    if (sum_of(p.elasticities) <= 1.0 - kSingularTolerance) {
        Bundle interior = solve_unconstrained_producer(p);
        const double cost = bundle_cost(p.input_prices, interior.quantities);
        if (std::isfinite(cost) && cost <= budget) return interior;
    }
    return solve_constrained_shares(p.elasticities, p.input_prices, budget);
}

/// Goods demand and labour supply. Goods take the sum(a)/(sum(a)+b+g)
/// fraction of wealth; labour supply balances income against leisure and is
/// clamped to [0, T].
inline Bundle consumer_choose_bundle(const ConsumerProblem& c) {
    if (c.goods_prices.size() != c.goods_elasticities.size())
        throw std::invalid_argument("consumer problem: prices and elasticities must align");
    if (!(c.wage > 0) || !(c.time_budget > 0))
        throw std::invalid_argument("consumer problem: wage and time budget must be positive");

    const double beta = c.income_elasticity;
    const double gamma = c.leisure_elasticity;
    const double denom = sum_of(c.goods_elasticities) + beta + gamma;
    const double budget = std::max(0.0, c.budget);

    Bundle out;
    out.quantities.resize(c.goods_prices.size(), 0.0);
    if (budget > 0) {
        for (std::size_t i = 0; i < c.goods_prices.size(); ++i)
            out.quantities[i] = c.goods_elasticities[i] * budget / (c.goods_prices[i] * denom);
    }
    const double raw = (c.wage * beta * c.time_budget - gamma * c.expected_profit_income) /
                       (c.wage * (beta + gamma));
    out.labour_supply = std::clamp(raw, 0.0, c.time_budget);
    return out;
}

/// (w*L + V)^b * (T - L)^g * prod(q_i^a_i): utility of a consumption plan.
/// Evaluated in log space.
inline double consumer_utility(std::span<const double> goods_elasticities, std::span<const double> goods,
                               double income_elasticity, double leisure_elasticity, double wage,
                               double time_budget, double labour, double profit_income) {
    const double income = wage * labour + profit_income;
    const double leisure = time_budget - labour;
    if (income <= 0 || leisure <= 0) return 0.0;
    double log_u = income_elasticity * std::log(income) + leisure_elasticity * std::log(leisure);
    for (std::size_t i = 0; i < goods_elasticities.size(); ++i) {
        if (goods[i] <= 0) return 0.0;
        log_u += goods_elasticities[i] * std::log(goods[i]);
    }
    return std::exp(log_u);
}

}  // namespace netecon
