#pragma once

// Equilibrium detection. A raw series is smoothed with a rolling mean; the
// series "settles" if, from some time in the scan window onward, every
// absolute first difference of the smoothed series stays below tolerance.
// Differences are indexed by raw time: entry t compares the means of the
// windows ending at t and t-1, and is undefined for t < window.
// A run that reaches its horizon is an equilibrium iff every surviving price
// series and the wage series settle.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "netecon/economy.hpp"

namespace netecon {

enum class Outcome { Equilibrium, Disequilibrium, SingleProducerLeft, ConsumerWealthZero, ProducersExhausted };

constexpr std::string_view to_string(Outcome o) noexcept {
    switch (o) {
        case Outcome::Equilibrium: return "Equilibrium";
        case Outcome::Disequilibrium: return "Disequilibrium";
        case Outcome::SingleProducerLeft: return "SingleProducerLeft";
        case Outcome::ConsumerWealthZero: return "ConsumerWealthZero";
        case Outcome::ProducersExhausted: return "ProducersExhausted";
    }
    return "?";
}

inline std::optional<Outcome> parse_outcome(std::string_view s) {
    for (auto o : {Outcome::Equilibrium, Outcome::Disequilibrium, Outcome::SingleProducerLeft,
                   Outcome::ConsumerWealthZero, Outcome::ProducersExhausted})
        if (to_string(o) == s) return o;
    return std::nullopt;
}

constexpr Outcome to_outcome(HaltReason r) noexcept {
    switch (r) {
        case HaltReason::SingleProducerLeft: return Outcome::SingleProducerLeft;
        case HaltReason::ConsumerWealthZero: return Outcome::ConsumerWealthZero;
        case HaltReason::ProducersExhausted: return Outcome::ProducersExhausted;
    }
    return Outcome::Disequilibrium;
}

struct DetectorConfig {
    double tolerance = 1e-3;
    std::size_t window = 100;
    /// Half-open range of start times, in raw series positions.
    std::size_t scan_begin = 500;
    std::size_t scan_end = 900;
};

class WindowTooLarge : public std::invalid_argument {
public:
    WindowTooLarge() : std::invalid_argument("rolling window longer than series") {}
};

/// out[k] = mean(series[k .. k+window-1]).
inline std::vector<double> rolling_average(std::span<const double> series, std::size_t window) {
    if (window == 0) throw std::invalid_argument("rolling window must be positive");
    if (window > series.size()) throw WindowTooLarge();
    std::vector<double> out;
    out.reserve(series.size() - window + 1);
    for (std::size_t k = 0; k + window <= series.size(); ++k) {
        double s = 0;
        for (std::size_t j = k; j < k + window; ++j) s += series[j];
        out.push_back(s / static_cast<double>(window));
    }
    return out;
}

inline std::vector<double> abs_first_difference(std::span<const double> series) {
    std::vector<double> out;
    for (std::size_t k = 1; k < series.size(); ++k) out.push_back(std::abs(series[k] - series[k - 1]));
    return out;
}

struct SeriesVerdict {
    std::string series_id;
    bool converged = false;
    std::optional<std::size_t> first_index;
};

/// Scans start positions t in [scan_begin, min(scan_end, size)) and reports
/// the first t from which every element through the end is below tolerance.
inline SeriesVerdict converged_tail(std::span<const double> differences, double tolerance, std::size_t scan_begin,
                                    std::size_t scan_end, std::string series_id = {}) {
    SeriesVerdict v{std::move(series_id), false, std::nullopt};
    const std::size_t n = differences.size();
    if (n == 0) return v;
    // Start of the maximal below-tolerance suffix.
    std::size_t suffix = n;
    while (suffix > 0 && differences[suffix - 1] < tolerance) --suffix;
    const std::size_t end = std::min(scan_end, n);
    const std::size_t t = std::max(scan_begin, suffix);
    if (t < end) {
        v.converged = true;
        v.first_index = t;
    }
    return v;
}

/// |first difference| of the trailing rolling mean, aligned with `raw`.
/// Entries before `window` are undefined and set to +inf.
inline std::vector<double> smoothed_differences(std::span<const double> raw, std::size_t window) {
    std::vector<double> out(raw.size(), std::numeric_limits<double>::infinity());
    if (raw.size() < window + 1) return out;
    const auto diffs = abs_first_difference(rolling_average(raw, window));
    std::copy(diffs.begin(), diffs.end(), out.begin() + static_cast<std::ptrdiff_t>(window));
    return out;
}

/// Rolling mean, absolute first difference, tail scan.
inline SeriesVerdict series_converged(std::span<const double> raw, const DetectorConfig& cfg,
                                      std::string series_id = {}) {
    const auto diffs = smoothed_differences(raw, cfg.window);
    return converged_tail(diffs, cfg.tolerance, cfg.scan_begin, cfg.scan_end, std::move(series_id));
}

using PriceHistory = std::pair<AgentId, std::vector<double>>;

inline Outcome classify_run(std::span<const PriceHistory> price_histories, std::span<const double> wage_history,
                            std::optional<HaltReason> termination, const DetectorConfig& cfg = {}) {
    if (termination) return to_outcome(*termination);
    if (!series_converged(wage_history, cfg, "wage").converged) return Outcome::Disequilibrium;
    for (const auto& [id, prices] : price_histories)
        if (!series_converged(prices, cfg).converged) return Outcome::Disequilibrium;
    return Outcome::Equilibrium;
}

}  // namespace netecon
