#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "netecon/io.hpp"
#include "netecon/scenario.hpp"
#include "netecon/simulation.hpp"
#include "netecon/sweep.hpp"

namespace fs = std::filesystem;
using namespace netecon;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

SeedRange parse_range(const std::string& text) {
    const auto colon = text.find(':');
    try {
        if (colon == std::string::npos) {
            auto v = io::parse_int<std::uint64_t>(text);
            return {v, v};
        }
        SeedRange r{io::parse_int<std::uint64_t>(std::string_view(text).substr(0, colon)),
                    io::parse_int<std::uint64_t>(std::string_view(text).substr(colon + 1))};
        if (r.first > r.last) throw UsageError("empty seed range " + text);
        return r;
    } catch (const io::FormatError&) {
        throw UsageError("bad seed range " + text + " (expected A:B)");
    }
}

ScenarioConfig load_config(const std::optional<std::string>& path) {
    if (!path) return {};
    std::ifstream in(*path);
    if (!in) throw UsageError("cannot open config " + *path);
    return io::read_config(in);
}

std::ofstream open_out(const fs::path& p) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + p.string());
    return out;
}

void write_json(const fs::path& p, const io::Json& j) { open_out(p) << j.dump(2) << '\n'; }

int cmd_run(const ScenarioConfig& cfg, std::uint64_t s1, std::uint64_t s2, const fs::path& out_dir) {
    const auto r = run_simulation(cfg, s1, s2);
    fs::create_directories(out_dir);
    write_json(out_dir / "config.json", io::to_json(cfg));
    {
        auto ts = open_out(out_dir / "timeseries.csv");
        io::write_timeseries_csv(ts, r.records);
        auto pr = open_out(out_dir / "prices.csv");
        io::write_prices_csv(pr, r.records);
    }
    write_json(out_dir / "snapshot_t0.json", io::snapshot_json(r.initial));
    if (r.periods() != 0)
        write_json(out_dir / ("snapshot_t" + std::to_string(r.periods()) + ".json"), io::snapshot_json(r.final_state));
    write_json(out_dir / "summary.json", io::summary_json(r, cfg));
    std::cout << to_string(r.outcome) << " after " << r.periods() << " periods\n";
    return 0;
}

int cmd_sweep(const ScenarioConfig& cfg, SeedRange r1, SeedRange r2, unsigned jobs, const fs::path& out_dir) {
    const auto seeds = seed_grid(r1, r2);
    fs::create_directories(out_dir);
    write_json(out_dir / "config.json", io::to_json(cfg));
    auto out = open_out(out_dir / "runs.jsonl");
    std::uint64_t failed = 0;
    run_sweep(cfg, seeds, jobs, [&](const RunSummary& s) {
        if (s.error) ++failed;
        out << io::runs_line(s) << '\n';
        out.flush();
    });
    std::cout << seeds.size() << " runs, " << failed << " failed\n";
    return failed == 0 ? 0 : 1;
}

int cmd_summarize(const fs::path& runs, const std::optional<fs::path>& out_dir) {
    std::ifstream in(runs);
    if (!in) throw UsageError("cannot open " + runs.string());
    const auto table = io::summarize_runs(in);
    io::write_summary_text(std::cout, table);
    if (out_dir) {
        fs::create_directories(*out_dir);
        auto csv = open_out(*out_dir / "summary.csv");
        io::write_summary_csv(csv, table);
    }
    if (table.malformed_lines > 0)
        std::cerr << "warning: skipped " << table.malformed_lines << " malformed line(s)\n";
    return 0;
}

int cmd_export_graph(const fs::path& run_dir, std::uint64_t period, const std::optional<fs::path>& out) {
    const auto snap = run_dir / ("snapshot_t" + std::to_string(period) + ".json");
    std::ifstream in(snap);
    if (!in) throw UsageError("no snapshot for period " + std::to_string(period) + " in " + run_dir.string());
    io::Json j;
    try {
        j = io::Json::parse(in);
    } catch (const io::Json::parse_error& e) {
        throw io::FormatError(snap.string() + ": " + e.what());
    }
    const auto state = io::snapshot_from_json(j);
    if (out) {
        auto f = open_out(*out);
        io::write_graph_dot(f, state);
    } else {
        io::write_graph_dot(std::cout, state);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Agent-based network economy simulator"};
    app.require_subcommand(1);

    std::optional<std::string> config_path;
    std::string out_dir = "out";

    auto* run = app.add_subcommand("run", "Simulate one economy");
    std::uint64_t s1 = 1, s2 = 1;
    run->add_option("--s1", s1, "Structural seed")->required();
    run->add_option("--s2", s2, "Elasticity seed")->required();
    run->add_option("--config", config_path, "JSON configuration file");
    run->add_option("--out", out_dir, "Output directory");

    auto* sweep = app.add_subcommand("sweep", "Simulate a grid of seed pairs");
    std::string r1_text, r2_text;
    unsigned jobs = 1;
    sweep->add_option("--s1-range", r1_text, "Inclusive structural seed range A:B")->required();
    sweep->add_option("--s2-range", r2_text, "Inclusive elasticity seed range A:B")->required();
    sweep->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
    sweep->add_option("--config", config_path, "JSON configuration file");
    sweep->add_option("--out", out_dir, "Output directory");

    auto* summarize = app.add_subcommand("summarize", "Tabulate a runs.jsonl file by outcome");
    std::string runs_path;
    std::optional<std::string> summary_out;
    summarize->add_option("runs", runs_path, "runs.jsonl")->required();
    summarize->add_option("--out", summary_out, "Directory for summary.csv");

    auto* graph = app.add_subcommand("export-graph", "Write a snapshot's trade network as Graphviz DOT");
    std::string run_dir;
    std::uint64_t period = 0;
    std::optional<std::string> graph_out;
    graph->add_option("run_dir", run_dir, "Directory written by `run`")->required();
    graph->add_option("--period", period, "Snapshot period")->required();
    graph->add_option("--out", graph_out, "Output .dot file (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) return cmd_run(load_config(config_path), s1, s2, out_dir);
        if (*sweep) return cmd_sweep(load_config(config_path), parse_range(r1_text), parse_range(r2_text), jobs, out_dir);
        if (*summarize)
            return cmd_summarize(runs_path, summary_out ? std::optional<fs::path>(*summary_out) : std::nullopt);
        if (*graph)
            return cmd_export_graph(run_dir, period, graph_out ? std::optional<fs::path>(*graph_out) : std::nullopt);
    } catch (const ConfigInvalid& e) {
        std::cerr << "invalid config: " << e.what() << '\n';
        return 2;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
