// shardswap — scenario runner for the lock-swap AMM simulator.
//
//   run <scenario> [--seed N] [--trace PATH]   run a scenario, print summary
//   replay <trace> <scenario>                  re-run and diff against a trace
//   quote <Rin> <Rout> <dIn> [--gamma G]       one constant-product quote
//
// Exit codes: 0 ok, 1 input error, 2 embedded assertion failure,
// 3 replay divergence.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "shardswap/scenario.hpp"

namespace fs = std::filesystem;
using namespace shardswap;

namespace {

void print_summary(const Scenario& sc, const Simulator& sim) {
    std::cout << "scenario " << sc.name << " (seed " << sim.config().seed << ")\n";
    for (std::size_t i = 0; i < sc.requests.size(); ++i) {
        const auto& req = sc.requests[i];
        auto result = sim.result(i);
        std::cout << "request " << i << " (" << req.user << ", " << req.input_amount.str()
                  << " " << req.input_asset << " -> " << req.output_asset << "): ";
        if (!result) {
            std::cout << "unresolved\n";
            continue;
        }
        if (result->status == MultiSwapResult::Status::Executed) {
            std::cout << "executed, output " << result->output.str() << " "
                      << req.output_asset;
        } else {
            std::cout << "cancelled (" << result->reason << "), refund "
                      << result->refund.str() << " " << req.input_asset;
        }
        std::cout << "\n";
    }
    for (const auto& [ref, pool] : sim.pools()) {
        std::cout << "pool " << pool.name() << ": actual <" << pool.actual().x.str() << ", "
                  << pool.actual().y.str() << ">, virtual <"
                  << pool.virtual_reserves().x.str() << ", "
                  << pool.virtual_reserves().y.str() << ">";
        if (pool.partially_locked())
            std::cout << ", " << pool.pending_count() << " pending lock(s)";
        std::cout << "\n";
    }
}

std::optional<fs::path> trace_destination(const std::string& flag, const std::string& name) {
    if (!flag.empty())
        return fs::path(flag);
    if (const char* dir = std::getenv("SHARDSWAP_TRACE_DIR"))
        return fs::path(dir) / (name + ".trace");
    return std::nullopt;
}

int cmd_run(const std::string& scenario_path, std::optional<std::uint64_t> seed,
            const std::string& trace_flag) {
    Scenario sc = load_scenario(scenario_path);
    if (seed)
        sc.config.seed = *seed;
    Simulator sim(sc.config, sc.requests);
    sim.run_to_quiescence();

    if (auto dest = trace_destination(trace_flag, sc.name)) {
        std::ofstream out(*dest);
        if (!out)
            throw Error("cannot write trace file " + dest->string());
        out << sim.trace().str();
        std::cout << "trace: " << sim.trace().size() << " records -> " << dest->string()
                  << "\n";
    }

    print_summary(sc, sim);

    auto failures = check_expectations(sim, sc.expect);
    if (!failures.empty()) {
        for (const auto& f : failures)
            std::cout << "ASSERTION FAILED: " << f << "\n";
        return 2;
    }
    if (!sc.expect.empty())
        std::cout << "all embedded assertions passed\n";
    return 0;
}

int cmd_replay(const std::string& trace_path, const std::string& scenario_path) {
    Scenario sc = load_scenario(scenario_path);

    std::ifstream in(trace_path);
    if (!in)
        throw Error("cannot open trace file " + std::string(trace_path));
    std::vector<std::string> recorded;
    for (std::string line; std::getline(in, line);)
        recorded.push_back(line);

    Simulator sim(sc.config, sc.requests);
    sim.run_to_quiescence();
    std::vector<std::string> fresh = sim.trace().lines();

    std::size_t n = std::min(recorded.size(), fresh.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (recorded[i] != fresh[i]) {
            std::cout << "divergence at record " << i << ":\n  trace:  " << recorded[i]
                      << "\n  replay: " << fresh[i] << "\n";
            return 3;
        }
    }
    if (recorded.size() != fresh.size()) {
        std::cout << "divergence at record " << n << ": trace has " << recorded.size()
                  << " records, replay produced " << fresh.size() << "\n";
        return 3;
    }
    std::cout << "replay ok: " << fresh.size() << " records match\n";
    return 0;
}

int cmd_quote(const std::string& rin, const std::string& rout, const std::string& din,
              const std::string& gamma) {
    Amount reserve_in = Amount::parse(rin);
    Amount reserve_out = Amount::parse(rout);
    Amount delta_in = Amount::parse(din);
    FeePolicy fee{Amount::parse(gamma)};
    if (delta_in.is_negative())
        throw Error("quote: negative input");
    Amount out = quote(reserve_in, reserve_out, delta_in, fee);
    std::cout << out.str() << " (" << out.str2() << ")\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"lock-swap AMM multi-shard simulator"};
    app.require_subcommand(1);

    std::string scenario_path, trace_flag;
    std::optional<std::uint64_t> seed;
    auto* run = app.add_subcommand("run", "run a scenario and print a summary");
    run->add_option("scenario", scenario_path, "scenario file")->required();
    run->add_option("--seed", seed, "override the scenario seed");
    run->add_option("--trace", trace_flag,
                    "trace output path (default: $SHARDSWAP_TRACE_DIR/<name>.trace)");

    std::string replay_trace, replay_scenario;
    auto* replay = app.add_subcommand("replay", "re-run a scenario and diff its trace");
    replay->add_option("trace", replay_trace, "trace file")->required();
    replay->add_option("scenario", replay_scenario, "scenario file")->required();

    std::string q_rin, q_rout, q_din, q_gamma = "1";
    auto* q = app.add_subcommand("quote", "price one swap from pool reserves");
    q->add_option("reserve_in", q_rin, "input-side reserve")->required();
    q->add_option("reserve_out", q_rout, "output-side reserve")->required();
    q->add_option("delta_in", q_din, "swap input amount")->required();
    q->add_option("--gamma", q_gamma, "retained-trade fraction (fee is 1-gamma)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (run->parsed())
            return cmd_run(scenario_path, seed, trace_flag);
        if (replay->parsed())
            return cmd_replay(replay_trace, replay_scenario);
        return cmd_quote(q_rin, q_rout, q_din, q_gamma);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
