#pragma once

// File formats: config.json, timeseries.csv, prices.csv, summary.json,
// agent snapshots, runs.jsonl lines and the Graphviz export.
//
// Numbers are written in shortest round-trip form (std::to_chars), so
// re-parsing any file reproduces the in-memory doubles exactly. JSON has no
// infinities; non-finite values are written as the strings "inf", "-inf" and
// "nan".

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "netecon/economy.hpp"
#include "netecon/equilibrium.hpp"
#include "netecon/metrics.hpp"
#include "netecon/rng.hpp"
#include "netecon/scenario.hpp"
#include "netecon/simulation.hpp"

namespace netecon::io {

using Json = nlohmann::json;

class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline std::string format_double(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc{}) throw FormatError("cannot format number");
    return {buf, end};
}

inline double parse_double(std::string_view s) {
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    double v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) throw FormatError("bad number: " + std::string(s));
    return v;
}

template <class Int>
Int parse_int(std::string_view s) {
    Int v{};
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) throw FormatError("bad integer: " + std::string(s));
    return v;
}

inline Json number(double v) {
    if (std::isfinite(v)) return v;
    return format_double(v);
}

inline double to_number(const Json& j) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) return parse_double(j.get<std::string>());
    throw FormatError("expected a number");
}

// ---------------------------------------------------------------- config ---

inline Json to_json(const ScenarioConfig& c) {
    return Json{
        {"num_producers", c.num_producers},
        {"num_consumers", c.num_consumers},
        {"producer_wealth", c.producer_wealth},
        {"consumer_wealth", c.consumer_wealth},
        {"wage_adjust", c.wage_adjust},
        {"price_adjust", c.price_adjust},
        {"technology", c.technology},
        {"time_period", c.time_period},
        {"prr", c.prr},
        {"initial_wage", c.initial_wage},
        {"max_initial_price", c.max_initial_price},
        {"returns_to_scale_mean", c.returns_to_scale_mean},
        {"returns_to_scale_sd", c.returns_to_scale_sd},
        {"time_budget", c.time_budget},
        {"horizon", c.horizon},
        {"eq_tolerance", c.eq_tolerance},
        {"rolling_window", c.rolling_window},
        {"scan_begin", c.scan_begin},
        {"scan_end", c.scan_end},
    };
}

/// Keys absent from `j` keep their defaults. Unknown keys and wrongly typed
/// values raise ConfigInvalid naming the key.
inline ScenarioConfig config_from_json(const Json& j) {
    if (!j.is_object()) throw ConfigInvalid("<root>");
    ScenarioConfig c;
    const Json defaults = to_json(c);
    for (const auto& [key, value] : j.items())
        if (!defaults.contains(key)) throw ConfigInvalid(key);

    auto real = [&](const char* key, double& field) {
        if (!j.contains(key)) return;
        if (!j[key].is_number()) throw ConfigInvalid(key);
        field = j[key].get<double>();
    };
    auto count = [&](const char* key, std::uint32_t& field) {
        if (!j.contains(key)) return;
        const auto& v = j[key];
        if (!v.is_number_integer() || v.get<std::int64_t>() < 0 ||
            v.get<std::int64_t>() > std::numeric_limits<std::uint32_t>::max())
            throw ConfigInvalid(key);
        field = v.get<std::uint32_t>();
    };
    count("num_producers", c.num_producers);
    count("num_consumers", c.num_consumers);
    real("producer_wealth", c.producer_wealth);
    real("consumer_wealth", c.consumer_wealth);
    real("wage_adjust", c.wage_adjust);
    real("price_adjust", c.price_adjust);
    real("technology", c.technology);
    real("time_period", c.time_period);
    real("prr", c.prr);
    real("initial_wage", c.initial_wage);
    real("max_initial_price", c.max_initial_price);
    real("returns_to_scale_mean", c.returns_to_scale_mean);
    real("returns_to_scale_sd", c.returns_to_scale_sd);
    real("time_budget", c.time_budget);
    count("horizon", c.horizon);
    real("eq_tolerance", c.eq_tolerance);
    count("rolling_window", c.rolling_window);
    count("scan_begin", c.scan_begin);
    count("scan_end", c.scan_end);
    validate(c);
    return c;
}

inline ScenarioConfig read_config(std::istream& in) {
    Json j;
    try {
        j = Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw FormatError(std::string("config is not valid JSON: ") + e.what());
    }
    return config_from_json(j);
}

/// FNV-1a of the canonical (key-sorted, compact) JSON form, as 16 hex digits.
inline std::string config_hash(const ScenarioConfig& c) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(to_json(c).dump())));
    return buf;
}

// ------------------------------------------------------------------- csv ---

inline constexpr std::string_view kTimeseriesHeader =
    "period,wage,wage_adjust,producer_wealth,consumer_wealth,gini_producers,gini_consumers,"
    "total_utility,leisure_pct,excess_labour,live_producers,shut_firms";

inline constexpr std::string_view kPricesHeader = "period,producer_id,price,inventory,demand,price_adjust";

namespace detail {

inline std::vector<std::string_view> split(std::string_view line, char sep = ',') {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        auto pos = line.find(sep, start);
        out.push_back(line.substr(start, pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

inline void expect_header(std::istream& in, std::string_view header) {
    std::string line;
    if (!std::getline(in, line) || line != header) throw FormatError("unexpected CSV header");
}

}  // namespace detail

inline void write_timeseries_csv(std::ostream& out, const std::vector<PeriodRecord>& records) {
    out << kTimeseriesHeader << '\n';
    for (const auto& r : records) {
        out << r.period << ',' << format_double(r.wage) << ',' << format_double(r.wage_adjust) << ','
            << format_double(r.producer_wealth) << ',' << format_double(r.consumer_wealth) << ','
            << format_double(r.gini_producers) << ',' << format_double(r.gini_consumers) << ','
            << format_double(r.total_utility) << ',' << format_double(r.leisure_pct) << ','
            << format_double(r.excess_labour) << ',' << r.live_producers << ',' << r.shut_firms << '\n';
    }
}

inline void write_prices_csv(std::ostream& out, const std::vector<PeriodRecord>& records) {
    out << kPricesHeader << '\n';
    for (const auto& r : records)
        for (const auto& p : r.producers)
            out << r.period << ',' << to_index(p.id) << ',' << format_double(p.price) << ','
                << format_double(p.inventory) << ',' << format_double(p.demand) << ','
                << format_double(p.price_adjust) << '\n';
}

/// Aggregate columns only; `producers` is left empty.
inline std::vector<PeriodRecord> read_timeseries_csv(std::istream& in) {
    detail::expect_header(in, kTimeseriesHeader);
    std::vector<PeriodRecord> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = detail::split(line);
        if (f.size() != 12) throw FormatError("timeseries.csv: wrong column count");
        PeriodRecord r;
        r.period = parse_int<std::uint64_t>(f[0]);
        r.wage = parse_double(f[1]);
        r.wage_adjust = parse_double(f[2]);
        r.producer_wealth = parse_double(f[3]);
        r.consumer_wealth = parse_double(f[4]);
        r.gini_producers = parse_double(f[5]);
        r.gini_consumers = parse_double(f[6]);
        r.total_utility = parse_double(f[7]);
        r.leisure_pct = parse_double(f[8]);
        r.excess_labour = parse_double(f[9]);
        r.live_producers = parse_int<std::uint32_t>(f[10]);
        r.shut_firms = parse_int<std::uint32_t>(f[11]);
        out.push_back(std::move(r));
    }
    return out;
}

/// Attaches prices.csv rows to the matching records by period.
inline void read_prices_csv(std::istream& in, std::vector<PeriodRecord>& records) {
    detail::expect_header(in, kPricesHeader);
    std::map<std::uint64_t, PeriodRecord*> by_period;
    for (auto& r : records) by_period[r.period] = &r;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = detail::split(line);
        if (f.size() != 6) throw FormatError("prices.csv: wrong column count");
        auto it = by_period.find(parse_int<std::uint64_t>(f[0]));
        if (it == by_period.end()) throw FormatError("prices.csv: period not in timeseries");
        it->second->producers.push_back({agent_id(parse_int<std::uint32_t>(f[1])), parse_double(f[2]),
                                         parse_double(f[3]), parse_double(f[4]), parse_double(f[5])});
    }
}

// -------------------------------------------------------------- snapshots ---

inline Json elasticities_json(const ElasticityMap& m) {
    Json out = Json::object();
    for (const auto& [id, a] : m) out[std::to_string(to_index(id))] = number(a);
    return out;
}

inline ElasticityMap elasticities_from_json(const Json& j) {
    ElasticityMap out;
    for (const auto& [key, value] : j.items()) out[agent_id(parse_int<std::uint32_t>(key))] = to_number(value);
    return out;
}

inline Json snapshot_json(const EconomyState& s) {
    Json producers = Json::array();
    for (const auto& p : s.producers) {
        producers.push_back({
            {"id", to_index(p.id)},
            {"tech", number(p.tech)},
            {"labour_elasticity", number(p.labour_elasticity)},
            {"input_elasticities", elasticities_json(p.input_elasticities)},
            {"kappa", number(p.kappa)},
            {"price", number(p.price)},
            {"price_adjust", number(p.price_adjust)},
            {"inventory", number(p.inventory)},
            {"wealth", number(p.wealth)},
            {"prr", number(p.prr)},
            {"shares", elasticities_json(p.shares)},
            {"last_demand", number(p.last_demand)},
        });
    }
    Json consumers = Json::array();
    for (const auto& c : s.consumers) {
        consumers.push_back({
            {"id", to_index(c.id)},
            {"good_elasticities", elasticities_json(c.good_elasticities)},
            {"income_elasticity", number(c.income_elasticity)},
            {"leisure_elasticity", number(c.leisure_elasticity)},
            {"time_budget", number(c.time_budget)},
            {"wealth", number(c.wealth)},
            {"last_profit_income", number(c.last_profit_income)},
            {"last_labour_sold", number(c.last_labour_sold)},
            {"last_utility", number(c.last_utility)},
        });
    }
    return Json{
        {"period", s.period},
        {"wage", number(s.wage)},
        {"wage_adjust", number(s.wage_adjust)},
        {"halted", s.halted ? Json(std::string(to_string(*s.halted))) : Json(nullptr)},
        {"shut_firms", s.shut_firms},
        {"retired_wealth", number(s.retired_wealth)},
        {"initial_consumer_wealth", number(s.initial_consumer_wealth)},
        {"producers", producers},
        {"consumers", consumers},
    };
}

inline EconomyState snapshot_from_json(const Json& j) {
    EconomyState s;
    try {
        s.period = j.at("period").get<std::uint64_t>();
        s.wage = to_number(j.at("wage"));
        s.wage_adjust = to_number(j.at("wage_adjust"));
        if (!j.at("halted").is_null()) {
            const auto label = j.at("halted").get<std::string>();
            for (auto r : {HaltReason::SingleProducerLeft, HaltReason::ConsumerWealthZero,
                           HaltReason::ProducersExhausted})
                if (to_string(r) == label) s.halted = r;
        }
        s.shut_firms = j.at("shut_firms").get<std::uint32_t>();
        s.retired_wealth = to_number(j.at("retired_wealth"));
        s.initial_consumer_wealth = to_number(j.at("initial_consumer_wealth"));
        for (const auto& pj : j.at("producers")) {
            ProducerState p;
            p.id = agent_id(pj.at("id").get<std::uint32_t>());
            p.tech = to_number(pj.at("tech"));
            p.labour_elasticity = to_number(pj.at("labour_elasticity"));
            p.input_elasticities = elasticities_from_json(pj.at("input_elasticities"));
            p.kappa = to_number(pj.at("kappa"));
            p.price = to_number(pj.at("price"));
            p.price_adjust = to_number(pj.at("price_adjust"));
            p.inventory = to_number(pj.at("inventory"));
            p.wealth = to_number(pj.at("wealth"));
            p.prr = to_number(pj.at("prr"));
            p.shares = elasticities_from_json(pj.at("shares"));
            p.last_demand = to_number(pj.at("last_demand"));
            s.producers.push_back(std::move(p));
        }
        for (const auto& cj : j.at("consumers")) {
            ConsumerState c;
            c.id = agent_id(cj.at("id").get<std::uint32_t>());
            c.good_elasticities = elasticities_from_json(cj.at("good_elasticities"));
            c.income_elasticity = to_number(cj.at("income_elasticity"));
            c.leisure_elasticity = to_number(cj.at("leisure_elasticity"));
            c.time_budget = to_number(cj.at("time_budget"));
            c.wealth = to_number(cj.at("wealth"));
            c.last_profit_income = to_number(cj.at("last_profit_income"));
            c.last_labour_sold = to_number(cj.at("last_labour_sold"));
            c.last_utility = to_number(cj.at("last_utility"));
            s.consumers.push_back(std::move(c));
        }
    } catch (const Json::exception& e) {
        throw FormatError(std::string("malformed snapshot: ") + e.what());
    }
    return s;
}

/// Graphviz digraph: producers as boxes, consumers as ellipses, both labelled
/// with wealth; edges run seller -> buyer.
inline void write_graph_dot(std::ostream& out, const EconomyState& s) {
    out << "digraph economy {\n";
    out << "  // period " << s.period << "\n";
    for (const auto& p : s.producers)
        out << "  n" << to_index(p.id) << " [role=producer, shape=box, wealth=\"" << format_double(p.wealth)
            << "\", label=\"P" << to_index(p.id) << "\"];\n";
    for (const auto& c : s.consumers)
        out << "  n" << to_index(c.id) << " [role=consumer, shape=ellipse, wealth=\"" << format_double(c.wealth)
            << "\", label=\"C" << to_index(c.id) << "\"];\n";
    for (const auto& [seller, buyer] : trade_edges(s))
        out << "  n" << to_index(seller) << " -> n" << to_index(buyer) << ";\n";
    out << "}\n";
}

// ---------------------------------------------------------------- summary ---

inline Json summary_json(const RunResult& r, const ScenarioConfig& cfg) {
    const auto& last = r.records.back();
    Json snapshots = Json::array({0});
    if (r.periods() != 0) snapshots.push_back(r.periods());
    return Json{
        {"outcome", std::string(to_string(r.outcome))},
        {"s1", r.s1},
        {"s2", r.s2},
        {"periods", r.periods()},
        {"halt", r.halt ? Json(std::string(to_string(*r.halt))) : Json(nullptr)},
        {"config_hash", config_hash(cfg)},
        {"initial_gini_consumers", number(r.records.front().gini_consumers)},
        {"snapshots", snapshots},
        {"final",
         {
             {"wage", number(last.wage)},
             {"wage_adjust", number(last.wage_adjust)},
             {"producer_wealth", number(last.producer_wealth)},
             {"consumer_wealth", number(last.consumer_wealth)},
             {"gini_producers", number(last.gini_producers)},
             {"gini_consumers", number(last.gini_consumers)},
             {"total_utility", number(last.total_utility)},
             {"leisure_pct", number(last.leisure_pct)},
             {"excess_labour", number(last.excess_labour)},
             {"live_producers", last.live_producers},
             {"shut_firms", last.shut_firms},
         }},
    };
}

// ------------------------------------------------------------- runs.jsonl ---

/// One compact JSON object, no trailing newline.
inline std::string runs_line(const RunSummary& s) {
    Json j{{"s1", s.s1}, {"s2", s.s2}};
    if (s.error) {
        j["error"] = *s.error;
        return j.dump();
    }
    j["outcome"] = std::string(to_string(*s.outcome));
    j["periods"] = s.periods;
    j["producer_wealth"] = number(s.producer_wealth);
    j["consumer_wealth"] = number(s.consumer_wealth);
    j["shut_firms"] = s.shut_firms;
    j["live_producers"] = s.live_producers;
    j["gini_consumers"] = number(s.gini_consumers);
    j["gini_producers"] = number(s.gini_producers);
    j["total_utility"] = number(s.total_utility);
    j["wage"] = number(s.wage);
    j["leisure_pct"] = number(s.leisure_pct);
    j["excess_labour"] = number(s.excess_labour);
    j["initial_gini_consumers"] = number(s.initial_gini_consumers);
    return j.dump();
}

inline RunSummary parse_runs_line(std::string_view line) {
    Json j;
    try {
        j = Json::parse(line);
    } catch (const Json::parse_error&) {
        throw FormatError("runs line is not JSON");
    }
    try {
        RunSummary s;
        s.s1 = j.at("s1").get<std::uint64_t>();
        s.s2 = j.at("s2").get<std::uint64_t>();
        if (j.contains("error")) {
            s.error = j.at("error").get<std::string>();
            return s;
        }
        s.outcome = parse_outcome(j.at("outcome").get<std::string>());
        if (!s.outcome) throw FormatError("unknown outcome label");
        s.periods = j.at("periods").get<std::uint64_t>();
        s.producer_wealth = to_number(j.at("producer_wealth"));
        s.consumer_wealth = to_number(j.at("consumer_wealth"));
        s.shut_firms = j.at("shut_firms").get<std::uint32_t>();
        s.live_producers = j.at("live_producers").get<std::uint32_t>();
        s.gini_consumers = to_number(j.at("gini_consumers"));
        s.gini_producers = to_number(j.at("gini_producers"));
        s.total_utility = to_number(j.at("total_utility"));
        s.wage = to_number(j.at("wage"));
        s.leisure_pct = to_number(j.at("leisure_pct"));
        s.excess_labour = to_number(j.at("excess_labour"));
        s.initial_gini_consumers = to_number(j.at("initial_gini_consumers"));
        return s;
    } catch (const Json::exception& e) {
        throw FormatError(std::string("runs line is missing a field: ") + e.what());
    }
}

/// Per-outcome means of the final-period aggregates.
struct OutcomeRow {
    std::string label;
    std::uint64_t count = 0;
    double producer_wealth = 0.0;
    double consumer_wealth = 0.0;
    double shut_firms = 0.0;
    double gini_consumers = 0.0;
    double gini_producers = 0.0;
    double total_utility = 0.0;
    double wage = 0.0;
    double leisure_pct = 0.0;
};

struct SummaryTable {
    /// One row per outcome label, in a fixed order; empty labels have count 0.
    std::vector<OutcomeRow> rows;
    std::uint64_t lines = 0;
    std::uint64_t failed_runs = 0;
    std::uint64_t malformed_lines = 0;
};

inline SummaryTable summarize_runs(std::istream& in) {
    SummaryTable t;
    std::map<Outcome, OutcomeRow> acc;
    const Outcome order[] = {Outcome::ConsumerWealthZero, Outcome::Disequilibrium, Outcome::Equilibrium,
                             Outcome::SingleProducerLeft, Outcome::ProducersExhausted};
    for (auto o : order) acc[o].label = std::string(to_string(o));

    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        ++t.lines;
        RunSummary s;
        try {
            s = parse_runs_line(line);
        } catch (const FormatError&) {
            ++t.malformed_lines;
            continue;
        }
        if (s.error) {
            ++t.failed_runs;
            continue;
        }
        auto& row = acc[*s.outcome];
        ++row.count;
        row.producer_wealth += s.producer_wealth;
        row.consumer_wealth += s.consumer_wealth;
        row.shut_firms += s.shut_firms;
        row.gini_consumers += s.gini_consumers;
        row.gini_producers += s.gini_producers;
        row.total_utility += s.total_utility;
        row.wage += s.wage;
        row.leisure_pct += s.leisure_pct;
    }
    for (auto o : order) {
        auto row = acc[o];
        if (row.count > 0) {
            const auto n = static_cast<double>(row.count);
            for (double* v : {&row.producer_wealth, &row.consumer_wealth, &row.shut_firms, &row.gini_consumers,
                              &row.gini_producers, &row.total_utility, &row.wage, &row.leisure_pct})
                *v /= n;
        }
        t.rows.push_back(row);
    }
    return t;
}

inline constexpr std::string_view kSummaryHeader =
    "outcome,count,producer_wealth,consumer_wealth,shut_firms,gini_consumers,gini_producers,total_utility,wage,"
    "leisure_pct";

inline void write_summary_csv(std::ostream& out, const SummaryTable& t) {
    out << kSummaryHeader << '\n';
    for (const auto& r : t.rows)
        out << r.label << ',' << r.count << ',' << format_double(r.producer_wealth) << ','
            << format_double(r.consumer_wealth) << ',' << format_double(r.shut_firms) << ','
            << format_double(r.gini_consumers) << ',' << format_double(r.gini_producers) << ','
            << format_double(r.total_utility) << ',' << format_double(r.wage) << ','
            << format_double(r.leisure_pct) << '\n';
}

inline void write_summary_text(std::ostream& out, const SummaryTable& t) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%-20s %7s %12s %12s %6s %8s %8s %12s %12s %8s\n", "Outcome", "Count",
                  "W(prod)", "W(cons)", "Shut", "Gini(C)", "Gini(P)", "Utility", "Wage", "Leisure%");
    out << buf;
    for (const auto& r : t.rows) {
        std::snprintf(buf, sizeof buf, "%-20s %7llu %12.4e %12.4e %6.3f %8.4f %8.4f %12.4e %12.4e %8.3f\n",
                      r.label.c_str(), static_cast<unsigned long long>(r.count), r.producer_wealth,
                      r.consumer_wealth, r.shut_firms, r.gini_consumers, r.gini_producers, r.total_utility,
                      r.wage, r.leisure_pct);
        out << buf;
    }
    out << "lines: " << t.lines << "  failed runs: " << t.failed_runs << "  malformed lines: " << t.malformed_lines
        << '\n';
}

}  // namespace netecon::io
