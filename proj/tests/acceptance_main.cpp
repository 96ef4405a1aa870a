// Acceptance suite: runs every acceptance criterion at its stated
// tolerance and prints one pass/fail line per criterion. Exits nonzero if
// any criterion fails.
//
// Usage: acceptance_tests <cli-binary> <scenario-dir> [tmp-dir]

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "properties.hpp"
#include "rational.hpp"
#include "shardswap/oracle.hpp"
#include "shardswap/scenario.hpp"

using namespace shardswap;
namespace fs = std::filesystem;

namespace {

struct Criterion {
    std::string title;
    bool pass = true;
    std::vector<std::string> notes;

    void check(bool ok, const std::string& note) {
        if (!ok) {
            pass = false;
            notes.push_back(note);
        }
    }
};

std::vector<Criterion> criteria;

Criterion& criterion(const std::string& title) {
    criteria.push_back(Criterion{title});
    return criteria.back();
}

Amount amt(const char* s) { return Amount::parse(s); }

bool within(Amount got, const char* want, const char* tolerance) {
    return abs_diff(got, Amount::parse(want)) <= Amount::parse(tolerance);
}

std::string show(Amount got, const char* want, const char* tolerance) {
    return std::string("got ") + got.str() + ", want " + want + " +/- " + tolerance;
}

fs::path g_scenarios;
std::string g_cli;
fs::path g_tmp;

Simulator run_scenario(const std::string& name, Criterion& c) {
    Scenario sc = load_scenario(g_scenarios / (name + ".json"));
    Simulator sim = run_simulation(sc.config, sc.requests);
    auto failures = check_expectations(sim, sc.expect);
    for (const auto& f : failures)
        c.check(false, name + " embedded assertion: " + f);
    return sim;
}

int exec(const std::string& args, std::string* out = nullptr) {
    fs::path capture = g_tmp / "exec_out.txt";
    std::string cmd = g_cli + " " + args + " > " + capture.string() + " 2>&1";
    int status = std::system(cmd.c_str());
    if (out) {
        std::ifstream in(capture);
        out->assign((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    }
    return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    return std::string((std::istreambuf_iterator<char>(in)),
                       std::istreambuf_iterator<char>());
}

void two_pool_golden_execute_branch() {
    Criterion& c = criterion("two-hop multi-swap executes at the projected quote");
    Simulator sim = run_scenario("s32_multiswap", c);
    auto r = sim.result(0);
    c.check(r.has_value() && r->status == MultiSwapResult::Status::Executed,
            "request did not execute");
    if (r) {
        c.check(within(r->output, "0.165", "0.005"),
                "output: " + show(r->output, "0.165", "0.005"));
    }
    const Pool& p1 = sim.pool("shard1", {"A", "B"});
    const Pool& p2 = sim.pool("shard2", {"B", "C"});
    c.check(within(p1.actual().x, "120", "0.005"), "pool1 x " + p1.actual().x.str());
    c.check(within(p1.actual().y, "8.33", "0.005"), "pool1 y " + p1.actual().y.str());
    c.check(within(p2.actual().x, "201.67", "0.005"), "pool2 x " + p2.actual().x.str());
    c.check(within(p2.actual().y, "19.835", "0.005"), "pool2 y " + p2.actual().y.str());
}

void two_pool_golden_cancel_branch() {
    Criterion& c = criterion("two-hop multi-swap below the floor cancels and refunds");
    Simulator sim = run_scenario("s32_cancel", c);
    auto r = sim.result(0);
    c.check(r.has_value() && r->status == MultiSwapResult::Status::Cancelled,
            "request did not cancel");
    if (r)
        c.check(r->refund == Amount(20), "refund: got " + r->refund.str() + ", want 20");
    c.check(sim.balance("alice", "A") == Amount(), "input balance not restored exactly");
    for (const char* shard : {"shard1", "shard2"}) {
        const Pool& p = sim.pool(shard, shard == std::string("shard1") ? PairKey{"A", "B"}
                                                                       : PairKey{"B", "C"});
        c.check(p.actual() == p.virtual_reserves(),
                std::string(shard) + ": virtual pool differs from actual after cancel");
    }
}

void same_direction_golden() {
    Criterion& c = criterion("same-direction instant swap against a locked pool");
    Pool p("shard1", {"A", "B"}, Amount(100), Amount(10));
    LockRecord rec = p.lock_swap(Direction::XToY, Amount(20));
    SwapOutcome out = p.instant_swap(Direction::XToY, Amount(10));

    c.check(within(out.output, "0.64", "0.005"), "output: " + show(out.output, "0.64", "0.005"));
    c.check(within(p.actual().x, "110", "0.005"), "actual x " + p.actual().x.str());
    c.check(within(p.actual().y, "9.36", "0.005"), "actual y " + p.actual().y.str());
    c.check(within(p.virtual_reserves().x, "130", "0.005"),
            "virtual x " + p.virtual_reserves().x.str());
    c.check(within(p.virtual_reserves().y, "7.69", "0.005"),
            "virtual y " + p.virtual_reserves().y.str());

    Pool executed = p;
    executed.resolve_lock(rec.id, Resolution::Execute);
    c.check(within(executed.actual().x, "130", "0.005"),
            "after execute, actual x " + executed.actual().x.str());
    c.check(within(executed.actual().y, "7.69", "0.005"),
            "after execute, actual y " + executed.actual().y.str());

    Pool cancelled = p;
    cancelled.resolve_lock(rec.id, Resolution::Cancel);
    c.check(within(cancelled.virtual_reserves().x, "110", "0.005"),
            "after cancel, virtual x " + cancelled.virtual_reserves().x.str());
    c.check(within(cancelled.virtual_reserves().y, "9.36", "0.005"),
            "after cancel, virtual y " + cancelled.virtual_reserves().y.str());
}

void opposite_direction_golden() {
    Criterion& c = criterion("opposite-direction instant swap against a locked pool");
    Pool p("shard1", {"A", "B"}, Amount(100), Amount(10));
    LockRecord rec = p.lock_swap(Direction::XToY, Amount(20));
    SwapOutcome out = p.instant_swap(Direction::YToX, Amount(3));

    c.check(within(out.output, "23.08", "0.005"),
            "output: " + show(out.output, "23.08", "0.005"));
    c.check(within(p.actual().x, "76.92", "0.005"), "actual x " + p.actual().x.str());
    c.check(within(p.actual().y, "13", "0.005"), "actual y " + p.actual().y.str());
    c.check(within(p.virtual_reserves().x, "96.92", "0.005"),
            "virtual x " + p.virtual_reserves().x.str());
    c.check(within(p.virtual_reserves().y, "11.33", "0.005"),
            "virtual y " + p.virtual_reserves().y.str());

    Pool executed = p;
    executed.resolve_lock(rec.id, Resolution::Execute);
    c.check(executed.actual() == executed.virtual_reserves(),
            "execute did not converge the curves");
    Pool cancelled = p;
    cancelled.resolve_lock(rec.id, Resolution::Cancel);
    c.check(cancelled.actual() == cancelled.virtual_reserves(),
            "cancel did not converge the curves");
}

void naive_baseline() {
    Criterion& c = criterion("naive sequential execution realizes the degraded outputs");
    MultiSwapRequest req{"alice",
                         "A",
                         "C",
                         Amount(20),
                         Amount(),
                         {{"shard1", {"A", "B"}, Direction::XToY},
                          {"shard2", {"B", "C"}, Direction::XToY}},
                         {},
                         0,
                         SwapMode::Naive};
    PoolMap pools;
    pools.emplace(PoolRef{"shard1", {"A", "B"}},
                  Pool("shard1", {"A", "B"}, Amount(100), Amount(10)));
    pools.emplace(PoolRef{"shard2", {"B", "C"}},
                  Pool("shard2", {"B", "C"}, Amount(200), Amount(20)));

    std::vector<Interference> schedule{
        {0, InterferenceSetReserves{{"shard2", {"B", "C"}}, Amount(250), Amount(16)}}};
    RouteOutcome realized = naive_execute(req, pools, schedule);
    c.check(within(realized.output, "0.1", "0.005"),
            "realized: " + show(realized.output, "0.1", "0.005") +
                " (exact value of the worked example is 0.105960264900)");

    MultiSwapRequest back{"alice",
                          "A",
                          "A",
                          Amount(20),
                          Amount(),
                          {{"shard1", {"A", "B"}, Direction::XToY},
                           {"shard1", {"A", "B"}, Direction::YToX}},
                          {},
                          0,
                          SwapMode::Naive};
    std::vector<Interference> restore{
        {0, InterferenceSwap{{"shard1", {"A", "B"}}, Direction::YToX,
                             amt("1.666666666666")}}};
    RouteOutcome swapped_back = naive_execute(back, pools, restore);
    c.check(within(swapped_back.output, "14.3", "0.05"),
            "swap-back: " + show(swapped_back.output, "14.3", "0.05"));
}

void property_suite() {
    Criterion& c = criterion("randomized property suite (>=10^4 cases each)");
    for (const auto& out : props::run_all(10000)) {
        c.check(out.ok(10000), out.name + ": " + std::to_string(out.cases) + " cases" +
                                   (out.failures.empty() ? " (short of target)" : ""));
        for (const auto& f : out.failures)
            c.check(false, out.name + ": " + f);
    }
}

void determinism_via_cli() {
    Criterion& c = criterion("identical seeds give bit-identical traces and clean replays");
    fs::path t1 = g_tmp / "det1.trace";
    fs::path t2 = g_tmp / "det2.trace";
    std::string scenario = (g_scenarios / "s33_same_direction.json").string();

    c.check(exec("run " + scenario + " --trace " + t1.string()) == 0, "first run failed");
    c.check(exec("run " + scenario + " --trace " + t2.string()) == 0, "second run failed");
    std::string a = slurp(t1), b = slurp(t2);
    c.check(!a.empty() && a == b, "traces differ between identical runs");

    std::string out;
    int code = exec("replay " + t1.string() + " " + scenario, &out);
    c.check(code == 0, "replay exited " + std::to_string(code) + ": " + out);
}

void three_hop_chain() {
    Criterion& c = criterion("three-hop multi-swap matches the chained quote oracle");
    Simulator sim = run_scenario("s6_three_hop", c);
    auto r = sim.result(0);
    c.check(r.has_value() && r->status == MultiSwapResult::Status::Executed,
            "three-hop request did not execute");

    // chain the independent rational oracle through all three pools
    Amount h1 = testoracle::quote(Amount(100), Amount(10), Amount(20));
    Amount h2 = testoracle::quote(Amount(200), Amount(20), h1);
    Amount h3 = testoracle::quote(Amount(50), Amount(5), h2);
    std::vector<Amount> expected{h1, h2, h3};

    std::vector<Amount> locked;
    long resolves = 0, executes = 0;
    for (const auto& rec : sim.trace().records()) {
        if (rec.kind == "lock-request")
            locked.push_back(Amount::parse(rec.payload.at("quoted").get<std::string>()));
        if (rec.kind == "resolve") {
            ++resolves;
            if (rec.payload.at("decision") == "execute")
                ++executes;
        }
    }
    c.check(locked.size() == 3, "expected 3 hop locks, saw " + std::to_string(locked.size()));
    for (std::size_t i = 0; i < locked.size() && i < expected.size(); ++i)
        c.check(locked[i] == expected[i], "hop " + std::to_string(i) + " quote " +
                                              locked[i].str() + " != oracle " +
                                              expected[i].str());
    c.check(resolves == 3 && executes == 3, "not all-or-nothing: " +
                                                std::to_string(executes) + "/" +
                                                std::to_string(resolves) + " executed");
    if (r)
        c.check(r->output == h3, "final output " + r->output.str() + " != " + h3.str());
}

} // namespace

int main(int argc, char** argv) {
    if (argc < 3) {
        std::cerr << "usage: acceptance_tests <cli-binary> <scenario-dir> [tmp-dir]\n";
        return 2;
    }
    g_cli = argv[1];
    g_scenarios = argv[2];
    g_tmp = argc > 3 ? fs::path(argv[3]) : fs::temp_directory_path() / "shardswap-acceptance";
    fs::create_directories(g_tmp);

    try {
        two_pool_golden_execute_branch();
        two_pool_golden_cancel_branch();
        same_direction_golden();
        opposite_direction_golden();
        naive_baseline();
        property_suite();
        determinism_via_cli();
        three_hop_chain();
    } catch (const std::exception& e) {
        criterion("suite aborted").check(false, e.what());
    }

    bool all_pass = true;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const Criterion& c = criteria[i];
        std::cout << (c.pass ? "[PASS]" : "[FAIL]") << " criterion " << i + 1 << ": "
                  << c.title << "\n";
        for (const auto& note : c.notes)
            std::cout << "       " << note << "\n";
        all_pass = all_pass && c.pass;
    }
    std::cout << (all_pass ? "all criteria passed" : "some criteria FAILED") << "\n";
    return all_pass ? 0 : 1;
}
