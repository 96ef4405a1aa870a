#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#ifndef SHARDSWAP_CLI_PATH
#error "SHARDSWAP_CLI_PATH must point at the built CLI"
#endif

namespace fs = std::filesystem;

namespace {

struct Run {
    int exit_code = -1;
    std::string output;
};

fs::path tmp_dir() {
    static fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / "shardswap-cli-tests";
        fs::remove_all(d);
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

Run run_cli(const std::string& args) {
    fs::path out_file = tmp_dir() / "out.txt";
    std::string cmd = std::string(SHARDSWAP_CLI_PATH) + " " + args + " > " +
                      out_file.string() + " 2>&1";
    int status = std::system(cmd.c_str());
    Run r;
    r.exit_code = WEXITSTATUS(status);
    std::ifstream in(out_file);
    r.output.assign((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return r;
}

std::string scenario(const std::string& name) {
    return (fs::path(SHARDSWAP_SCENARIO_DIR) / (name + ".json")).string();
}

} // namespace

TEST_CASE("quote prints the worked numbers") {
    Run r = run_cli("quote 100 10 20");
    CHECK(r.exit_code == 0);
    CHECK(r.output == "1.666666666666 (1.67)\n");

    r = run_cli("quote 200 20 1.67");
    CHECK(r.exit_code == 0);
    CHECK(r.output == "0.165617097238 (0.17)\n");

    r = run_cli("quote 100 10 0");
    CHECK(r.exit_code == 0);
    CHECK(r.output == "0 (0.00)\n");

    r = run_cli("quote 100 10 20 --gamma 0.997");
    CHECK(r.exit_code == 0);
    CHECK(r.output == "1.662497915624 (1.66)\n");
}

TEST_CASE("quote rejects bad input with exit 1") {
    CHECK(run_cli("quote 0 10 20").exit_code == 1);
    CHECK(run_cli("quote 100 -1 20").exit_code == 1);
    CHECK(run_cli("quote abc 10 20").exit_code == 1);
    CHECK(run_cli("quote 100 10 20 --gamma 0").exit_code == 1);
    CHECK(run_cli("quote 100 10").exit_code == 1); // missing argument
}

TEST_CASE("run executes a bundled scenario and reports the outcome") {
    Run r = run_cli("run " + scenario("s32_multiswap"));
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("executed, output 0.165289256198 C") != std::string::npos);
    CHECK(r.output.find("all embedded assertions passed") != std::string::npos);
}

TEST_CASE("run reports the naive baseline's degraded output") {
    Run r = run_cli("run " + scenario("s31_naive"));
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("output 0.1059602649 C") != std::string::npos);
}

TEST_CASE("an empty scenario runs clean with an empty trace") {
    fs::path empty = tmp_dir() / "empty.json";
    std::ofstream(empty) << R"({
      "name": "empty",
      "shards": [{"id": "s1", "pools": [{"pair": ["A","B"], "reserves": ["100","10"]}]}]
    })";
    fs::path trace = tmp_dir() / "empty.trace";
    Run r = run_cli("run " + empty.string() + " --trace " + trace.string());
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("0 records") != std::string::npos);
    CHECK(fs::exists(trace));
    CHECK(fs::file_size(trace) == 0);
}

TEST_CASE("run exits 1 on malformed scenarios") {
    fs::path bad = tmp_dir() / "bad.json";
    std::ofstream(bad) << "{ not json";
    CHECK(run_cli("run " + bad.string()).exit_code == 1);
    CHECK(run_cli("run " + (tmp_dir() / "missing.json").string()).exit_code == 1);

    fs::path unknown = tmp_dir() / "unknown_field.json";
    std::ofstream(unknown) << R"({
      "name": "t", "typo": true,
      "shards": [{"id": "s1", "pools": [{"pair": ["A","B"], "reserves": ["1","1"]}]}]
    })";
    CHECK(run_cli("run " + unknown.string()).exit_code == 1);
}

TEST_CASE("run exits 2 when embedded assertions fail") {
    fs::path wrong = tmp_dir() / "wrong_expect.json";
    std::ofstream(wrong) << R"({
      "name": "t",
      "shards": [{"id": "s1", "pools": [{"pair": ["A","B"], "reserves": ["100","10"]}]}],
      "background": [{"at": 1, "shard": "s1", "pair": ["A","B"], "direction": "x->y", "amount": "20", "user": "u"}],
      "expect": {"pools": [{"shard": "s1", "pair": ["A","B"], "actual": ["100", "10"]}]}
    })";
    Run r = run_cli("run " + wrong.string());
    CHECK(r.exit_code == 2);
    CHECK(r.output.find("ASSERTION FAILED") != std::string::npos);
}

TEST_CASE("replay round-trips a recorded trace") {
    fs::path trace = tmp_dir() / "s32.trace";
    CHECK(run_cli("run " + scenario("s32_multiswap") + " --trace " + trace.string())
              .exit_code == 0);
    Run r = run_cli("replay " + trace.string() + " " + scenario("s32_multiswap"));
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("replay ok") != std::string::npos);
}

TEST_CASE("replay flags a tampered trace with exit 3") {
    fs::path trace = tmp_dir() / "tamper.trace";
    REQUIRE(run_cli("run " + scenario("s32_multiswap") + " --trace " + trace.string())
              .exit_code == 0);

    std::ifstream in(trace);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    in.close();
    auto pos = text.find("\"120\"");
    REQUIRE(pos != std::string::npos);
    text.replace(pos, 5, "\"121\"");
    std::ofstream(trace) << text;

    Run r = run_cli("replay " + trace.string() + " " + scenario("s32_multiswap"));
    CHECK(r.exit_code == 3);
    CHECK(r.output.find("divergence at record") != std::string::npos);
}

TEST_CASE("a different seed diverges on a jittered scenario") {
    fs::path trace = tmp_dir() / "seeded.trace";
    REQUIRE(run_cli("run " + scenario("s_jitter_race") + " --seed 99 --trace " +
                    trace.string())
                .exit_code == 0);
    // replay re-runs with the scenario's own seed, which is not 99
    Run r = run_cli("replay " + trace.string() + " " + scenario("s_jitter_race"));
    CHECK(r.exit_code == 3);
}

TEST_CASE("the trace directory env var provides a default destination") {
    fs::path dir = tmp_dir() / "trace_dir";
    fs::create_directories(dir);
    std::string cmd = "SHARDSWAP_TRACE_DIR=" + dir.string() + " " + SHARDSWAP_CLI_PATH +
                      " run " + scenario("s32_cancel") + " > /dev/null 2>&1";
    REQUIRE(WEXITSTATUS(std::system(cmd.c_str())) == 0);
    CHECK(fs::exists(dir / "s32_cancel.trace"));
}
