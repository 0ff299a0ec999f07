#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "dirtsch/config.hpp"
#include "dirtsch/errors.hpp"
#include "dirtsch/scenarios.hpp"
#include "dirtsch/sim.hpp"

namespace fs = std::filesystem;
using namespace dirtsch;

namespace {

struct CliOverrides {
    std::string config_path;
    std::string out_dir = "out";
    std::optional<long> seed;
    std::optional<std::string> mode;
    std::optional<double> duration;
    std::optional<int> nodes;
    std::optional<int> channels;
    std::optional<int> beams;
    bool events = false;
};

RunConfig resolveConfig(const CliOverrides& cli) {
    RunConfig cfg;
    if (!cli.config_path.empty()) cfg = loadConfigFile(cli.config_path);
    if (cli.seed) cfg.set("seed", std::to_string(*cli.seed));
    if (cli.mode) cfg.set("mode", *cli.mode);
    if (cli.duration) cfg.set("sim_time_s", std::to_string(*cli.duration));
    if (cli.nodes) cfg.set("nodes", std::to_string(*cli.nodes));
    if (cli.channels) cfg.set("channels", std::to_string(*cli.channels));
    if (cli.beams) cfg.set("beams", std::to_string(*cli.beams));
    cfg.finalize();
    return cfg;
}

void writeFile(const fs::path& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write '" + path.string() + "'");
    out << content;
}

std::string ratioText(double num, double den) {
    if (den <= 0.0 || num < 0.0) return "n/a";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", num / den);
    return buf;
}

MetricsReport runOne(const RunConfig& cfg, Mode mode, const fs::path& out_dir,
                     const std::string& suffix, bool events) {
    RunConfig local = cfg;
    local.sim.mode = mode;
    Topology topo = buildTopology(local.topo);
    Tree tree = Tree::build(topo);

    std::ofstream event_file;
    EventSink sink;
    if (events) {
        event_file.open(out_dir / ("events" + suffix + ".log"));
        sink = [&event_file](const SimEvent& ev) { event_file << ev.toLine() << '\n'; };
    }
    std::string schedule_dump;
    MetricsReport report = run(local.sim, topo, tree, local.link, sink, &schedule_dump);
    writeFile(out_dir / ("report" + suffix + ".txt"), report.toText());
    writeFile(out_dir / ("schedule" + suffix + ".txt"), schedule_dump);
    writeFile(out_dir / ("topology" + suffix + ".txt"), topo.dump());
    return report;
}

int cmdRun(const CliOverrides& cli) {
    RunConfig cfg = resolveConfig(cli);
    fs::create_directories(cli.out_dir);
    MetricsReport report = runOne(cfg, cfg.sim.mode, cli.out_dir, "", cli.events);
    std::cout << "run complete (" << report.mode << " mode, seed " << report.seed << ")\n"
              << report.toTable() << "report written to " << cli.out_dir << "/report.txt\n";
    return 0;
}

int cmdCompare(const CliOverrides& cli) {
    RunConfig cfg = resolveConfig(cli);
    fs::create_directories(cli.out_dir);
    MetricsReport dir = runOne(cfg, Mode::Directional, cli.out_dir, "_directional", cli.events);
    MetricsReport omni = runOne(cfg, Mode::Omni, cli.out_dir, "_omni", cli.events);

    std::ostringstream os;
    auto row = [&os](const std::string& k, const std::string& d, const std::string& o,
                     const std::string& r) {
        os << "  ";
        os << k;
        for (std::size_t i = k.size(); i < 30; ++i) os << ' ';
        os << d;
        for (std::size_t i = d.size(); i < 18; ++i) os << ' ';
        os << o;
        for (std::size_t i = o.size(); i < 18; ++i) os << ' ';
        os << r << '\n';
    };
    auto num = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.6g", v);
        return std::string(buf);
    };
    row("metric", "directional", "omni", "dir/omni");
    row("sink throughput (bit/s)", num(dir.aggregate_sink_throughput_bps),
        num(omni.aggregate_sink_throughput_bps),
        ratioText(dir.aggregate_sink_throughput_bps, omni.aggregate_sink_throughput_bps));
    row("mean delay (s)", num(dir.mean_delay_s), num(omni.mean_delay_s),
        ratioText(dir.mean_delay_s, omni.mean_delay_s));
    row("p95 delay (s)", num(dir.p95_delay_s), num(omni.p95_delay_s),
        ratioText(dir.p95_delay_s, omni.p95_delay_s));
    row("schedule length (mean)", num(dir.mean_schedule_length),
        num(omni.mean_schedule_length),
        ratioText(dir.mean_schedule_length, omni.mean_schedule_length));
    row("energy total (J)", num(dir.energy_total_j), num(omni.energy_total_j),
        ratioText(dir.energy_total_j, omni.energy_total_j));
    row("delivery ratio", num(dir.delivery_ratio), num(omni.delivery_ratio),
        ratioText(dir.delivery_ratio, omni.delivery_ratio));
    os << "  (n/a: denominator is zero, e.g. a zero-traffic run)\n";

    writeFile(fs::path(cli.out_dir) / "compare.txt", os.str());
    std::cout << "comparison (seed " << cfg.sim.seed << ")\n" << os.str();
    return 0;
}

int cmdScenario(const std::string& name) {
    ScenarioOutcome out = runScenario(name);
    std::cout << "scenario " << out.name << '\n';
    for (const std::string& line : out.lines) std::cout << "  " << line << '\n';
    std::cout << (out.pass ? "PASS" : "FAIL") << '\n';
    return out.pass ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dirtsch - directional TSCH scheduling simulator"};
    app.require_subcommand(1);
    app.fallthrough();

    CliOverrides cli;
    app.add_option("--config", cli.config_path, "config file (key=value lines)");
    app.add_option("--out", cli.out_dir, "output directory (default: out)");
    app.add_option("--seed", cli.seed, "override the run seed");
    app.add_option("--mode", cli.mode, "directional | omni")
        ->check(CLI::IsMember({"directional", "omni"}));
    app.add_option("--duration", cli.duration, "simulated seconds");
    app.add_option("--nodes", cli.nodes, "number of nodes");
    app.add_option("--channels", cli.channels, "channel offsets per slot");
    app.add_option("--beams", cli.beams, "antenna sectors");
    app.add_flag("--events", cli.events, "also write the event log");

    auto* run_cmd = app.add_subcommand("run", "simulate one mode and write reports");
    auto* compare_cmd =
        app.add_subcommand("compare", "run both modes on the same topology and seed");
    std::string scenario_name;
    auto* scenario_cmd =
        app.add_subcommand("scenario", "run a built-in worked example and check it");
    scenario_cmd->add_option("name", scenario_name, "scenario name")->required();
    auto* list_cmd = app.add_subcommand("list-scenarios", "list built-in scenarios");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;  // usage errors exit 1
    }

    try {
        if (run_cmd->parsed()) return cmdRun(cli);
        if (compare_cmd->parsed()) return cmdCompare(cli);
        if (list_cmd->parsed()) {
            for (const std::string& n : scenarioNames()) std::cout << n << '\n';
            return 0;
        }
        if (scenario_cmd->parsed()) {
            try {
                return cmdScenario(scenario_name);
            } catch (const LookupError&) {
                std::cerr << "unknown scenario '" << scenario_name << "'; available:\n";
                for (const std::string& n : scenarioNames()) std::cerr << "  " << n << '\n';
                return 1;
            }
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
