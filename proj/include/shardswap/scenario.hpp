#pragma once

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "shardswap/sim.hpp"

namespace shardswap {

// Scenario files are plain JSON: one SimConfig, the multi-swap requests to
// inject, and optional expected-outcome assertions. Unknown fields are
// errors; amounts are decimal strings (or integers), never floats.

struct ResultExpectation {
    std::size_t request = 0;
    std::string status; // "executed" | "cancelled"
    std::optional<Amount> output;
    std::optional<Amount> refund;
    Amount tolerance;
};

struct PoolExpectation {
    ShardId shard;
    PairKey pair;
    std::optional<Reserves> actual;
    std::optional<Reserves> virtual_reserves;
    Amount tolerance;
};

struct BalanceExpectation {
    std::string user;
    AssetSymbol asset;
    Amount amount;
    Amount tolerance;
};

struct Expectations {
    std::vector<ResultExpectation> results;
    std::vector<PoolExpectation> pools;
    std::vector<BalanceExpectation> balances;

    bool empty() const { return results.empty() && pools.empty() && balances.empty(); }
};

struct Scenario {
    std::string name;
    SimConfig config;
    std::vector<MultiSwapRequest> requests;
    Expectations expect;
};

namespace scenario_detail {

using nlohmann::json;

inline void check_keys(const json& obj, std::initializer_list<const char*> allowed,
                       const std::string& ctx) {
    if (!obj.is_object())
        throw Error("scenario: " + ctx + " must be an object");
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (const char* k : allowed)
            if (it.key() == k)
                known = true;
        if (!known)
            throw Error("scenario: unknown field '" + it.key() + "' in " + ctx);
    }
}

inline const json& require(const json& obj, const char* key, const std::string& ctx) {
    auto it = obj.find(key);
    if (it == obj.end())
        throw Error("scenario: missing field '" + std::string(key) + "' in " + ctx);
    return *it;
}

inline Amount amount_of(const json& v, const std::string& ctx) {
    if (v.is_string())
        return Amount::parse(v.get<std::string>());
    if (v.is_number_integer() && !v.is_number_float())
        return Amount(v.get<long long>());
    throw Error("scenario: " + ctx + " must be a decimal string (floats are not exact)");
}

inline std::string string_of(const json& v, const std::string& ctx) {
    if (!v.is_string())
        throw Error("scenario: " + ctx + " must be a string");
    return v.get<std::string>();
}

inline std::uint64_t uint_of(const json& v, const std::string& ctx) {
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
        throw Error("scenario: " + ctx + " must be a non-negative integer");
    return v.get<std::uint64_t>();
}

inline PairKey pair_of(const json& v, const std::string& ctx) {
    if (!v.is_array() || v.size() != 2)
        throw Error("scenario: " + ctx + " must be a two-element asset array");
    return PairKey{string_of(v[0], ctx), string_of(v[1], ctx)};
}

inline Reserves reserves_of(const json& v, const std::string& ctx) {
    if (!v.is_array() || v.size() != 2)
        throw Error("scenario: " + ctx + " must be a two-element amount array");
    return Reserves{amount_of(v[0], ctx), amount_of(v[1], ctx)};
}

inline MultiSwapRequest request_of(const json& v, std::size_t index) {
    std::string ctx = "requests[" + std::to_string(index) + "]";
    check_keys(v, {"user", "mode", "input_asset", "output_asset", "amount", "min_output",
                   "route", "timeout_ticks", "submit_at"}, ctx);
    MultiSwapRequest r;
    r.user = string_of(require(v, "user", ctx), ctx + ".user");
    r.input_asset = string_of(require(v, "input_asset", ctx), ctx + ".input_asset");
    r.output_asset = string_of(require(v, "output_asset", ctx), ctx + ".output_asset");
    r.input_amount = amount_of(require(v, "amount", ctx), ctx + ".amount");
    if (v.contains("min_output"))
        r.min_output = amount_of(v["min_output"], ctx + ".min_output");
    if (v.contains("mode")) {
        std::string mode = string_of(v["mode"], ctx + ".mode");
        if (mode == "naive")
            r.mode = SwapMode::Naive;
        else if (mode == "locked")
            r.mode = SwapMode::Locked;
        else
            throw Error("scenario: " + ctx + ".mode must be \"locked\" or \"naive\"");
    }
    const json& route = require(v, "route", ctx);
    if (!route.is_array() || route.empty())
        throw Error("scenario: " + ctx + ".route must be a non-empty array");
    for (std::size_t h = 0; h < route.size(); ++h) {
        std::string hctx = ctx + ".route[" + std::to_string(h) + "]";
        check_keys(route[h], {"shard", "pair", "direction"}, hctx);
        Hop hop;
        hop.shard = string_of(require(route[h], "shard", hctx), hctx + ".shard");
        hop.pair = pair_of(require(route[h], "pair", hctx), hctx + ".pair");
        hop.direction =
            parse_direction(string_of(require(route[h], "direction", hctx), hctx + ".direction"));
        r.route.push_back(std::move(hop));
    }
    if (v.contains("timeout_ticks"))
        r.timeout_ticks = uint_of(v["timeout_ticks"], ctx + ".timeout_ticks");
    if (v.contains("submit_at"))
        r.submit_at = uint_of(v["submit_at"], ctx + ".submit_at");
    validate_route(r);
    return r;
}

inline Expectations expectations_of(const json& v) {
    Expectations e;
    check_keys(v, {"results", "pools", "balances"}, "expect");
    if (v.contains("results")) {
        for (std::size_t i = 0; i < v["results"].size(); ++i) {
            const json& r = v["results"][i];
            std::string ctx = "expect.results[" + std::to_string(i) + "]";
            check_keys(r, {"request", "status", "output", "refund", "tolerance"}, ctx);
            ResultExpectation x;
            x.request = uint_of(require(r, "request", ctx), ctx + ".request");
            x.status = string_of(require(r, "status", ctx), ctx + ".status");
            if (x.status != "executed" && x.status != "cancelled")
                throw Error("scenario: " + ctx + ".status must be executed or cancelled");
            if (r.contains("output"))
                x.output = amount_of(r["output"], ctx + ".output");
            if (r.contains("refund"))
                x.refund = amount_of(r["refund"], ctx + ".refund");
            if (r.contains("tolerance"))
                x.tolerance = amount_of(r["tolerance"], ctx + ".tolerance");
            e.results.push_back(std::move(x));
        }
    }
    if (v.contains("pools")) {
        for (std::size_t i = 0; i < v["pools"].size(); ++i) {
            const json& p = v["pools"][i];
            std::string ctx = "expect.pools[" + std::to_string(i) + "]";
            check_keys(p, {"shard", "pair", "actual", "virtual", "tolerance"}, ctx);
            PoolExpectation x;
            x.shard = string_of(require(p, "shard", ctx), ctx + ".shard");
            x.pair = pair_of(require(p, "pair", ctx), ctx + ".pair");
            if (p.contains("actual"))
                x.actual = reserves_of(p["actual"], ctx + ".actual");
            if (p.contains("virtual"))
                x.virtual_reserves = reserves_of(p["virtual"], ctx + ".virtual");
            if (p.contains("tolerance"))
                x.tolerance = amount_of(p["tolerance"], ctx + ".tolerance");
            e.pools.push_back(std::move(x));
        }
    }
    if (v.contains("balances")) {
        for (std::size_t i = 0; i < v["balances"].size(); ++i) {
            const json& b = v["balances"][i];
            std::string ctx = "expect.balances[" + std::to_string(i) + "]";
            check_keys(b, {"user", "asset", "amount", "tolerance"}, ctx);
            BalanceExpectation x;
            x.user = string_of(require(b, "user", ctx), ctx + ".user");
            x.asset = string_of(require(b, "asset", ctx), ctx + ".asset");
            x.amount = amount_of(require(b, "amount", ctx), ctx + ".amount");
            if (b.contains("tolerance"))
                x.tolerance = amount_of(b["tolerance"], ctx + ".tolerance");
            e.balances.push_back(std::move(x));
        }
    }
    return e;
}

} // namespace scenario_detail

inline Scenario parse_scenario(const std::string& text) {
    namespace sd = scenario_detail;
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("scenario: invalid JSON: ") + e.what());
    }
    sd::check_keys(doc, {"name", "seed", "gamma", "latency", "dust_floor", "shards",
                         "background", "requests", "expect"}, "scenario");
    Scenario sc;
    sc.name = sd::string_of(sd::require(doc, "name", "scenario"), "name");
    if (doc.contains("seed"))
        sc.config.seed = sd::uint_of(doc["seed"], "seed");
    if (doc.contains("gamma"))
        sc.config.gamma = sd::amount_of(doc["gamma"], "gamma");
    if (doc.contains("dust_floor"))
        sc.config.dust_floor = sd::amount_of(doc["dust_floor"], "dust_floor");
    if (doc.contains("latency")) {
        sd::check_keys(doc["latency"], {"min", "max"}, "latency");
        if (doc["latency"].contains("min"))
            sc.config.latency.min = sd::uint_of(doc["latency"]["min"], "latency.min");
        if (doc["latency"].contains("max"))
            sc.config.latency.max = sd::uint_of(doc["latency"]["max"], "latency.max");
    }

    const auto& shards = sd::require(doc, "shards", "scenario");
    if (!shards.is_array() || shards.empty())
        throw Error("scenario: shards must be a non-empty array");
    for (std::size_t s = 0; s < shards.size(); ++s) {
        std::string ctx = "shards[" + std::to_string(s) + "]";
        sd::check_keys(shards[s], {"id", "pools"}, ctx);
        ShardSpec spec;
        spec.id = sd::string_of(sd::require(shards[s], "id", ctx), ctx + ".id");
        const auto& pools = sd::require(shards[s], "pools", ctx);
        if (!pools.is_array())
            throw Error("scenario: " + ctx + ".pools must be an array");
        for (std::size_t p = 0; p < pools.size(); ++p) {
            std::string pctx = ctx + ".pools[" + std::to_string(p) + "]";
            sd::check_keys(pools[p], {"pair", "reserves", "gamma"}, pctx);
            PoolSpec pool;
            pool.pair = sd::pair_of(sd::require(pools[p], "pair", pctx), pctx + ".pair");
            Reserves r = sd::reserves_of(sd::require(pools[p], "reserves", pctx),
                                         pctx + ".reserves");
            pool.reserve_x = r.x;
            pool.reserve_y = r.y;
            if (pools[p].contains("gamma"))
                pool.gamma = sd::amount_of(pools[p]["gamma"], pctx + ".gamma");
            spec.pools.push_back(std::move(pool));
        }
        sc.config.shards.push_back(std::move(spec));
    }

    if (doc.contains("background")) {
        const auto& bg = doc["background"];
        if (!bg.is_array())
            throw Error("scenario: background must be an array");
        for (std::size_t i = 0; i < bg.size(); ++i) {
            std::string ctx = "background[" + std::to_string(i) + "]";
            sd::check_keys(bg[i], {"at", "shard", "pair", "direction", "amount", "user"}, ctx);
            BackgroundSwap swap;
            swap.at = sd::uint_of(sd::require(bg[i], "at", ctx), ctx + ".at");
            swap.shard = sd::string_of(sd::require(bg[i], "shard", ctx), ctx + ".shard");
            swap.pair = sd::pair_of(sd::require(bg[i], "pair", ctx), ctx + ".pair");
            swap.direction = parse_direction(
                sd::string_of(sd::require(bg[i], "direction", ctx), ctx + ".direction"));
            swap.amount = sd::amount_of(sd::require(bg[i], "amount", ctx), ctx + ".amount");
            swap.user = sd::string_of(sd::require(bg[i], "user", ctx), ctx + ".user");
            sc.config.background.push_back(std::move(swap));
        }
    }

    if (doc.contains("requests")) {
        const auto& reqs = doc["requests"];
        if (!reqs.is_array())
            throw Error("scenario: requests must be an array");
        for (std::size_t i = 0; i < reqs.size(); ++i)
            sc.requests.push_back(sd::request_of(reqs[i], i));
    }

    if (doc.contains("expect"))
        sc.expect = sd::expectations_of(doc["expect"]);

    for (const auto& x : sc.expect.results)
        if (x.request >= sc.requests.size())
            throw Error("scenario: expect.results references request " +
                        std::to_string(x.request) + " but only " +
                        std::to_string(sc.requests.size()) + " exist");
    return sc;
}

inline Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw Error("cannot open scenario file " + path.string());
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_scenario(text);
}

inline Amount abs_diff(Amount a, Amount b) {
    Amount d = a - b;
    return d.is_negative() ? -d : d;
}

// Evaluates a scenario's embedded assertions against a finished run.
// Returns one line per failed assertion; empty means all held.
inline std::vector<std::string> check_expectations(const Simulator& sim,
                                                   const Expectations& expect) {
    std::vector<std::string> failures;
    auto check = [&](const std::string& what, Amount got, Amount want, Amount tol) {
        if (abs_diff(got, want) > tol)
            failures.push_back(what + ": got " + got.str() + ", want " + want.str() +
                               (tol.is_zero() ? "" : " within " + tol.str()));
    };

    for (const auto& x : expect.results) {
        auto result = sim.result(x.request);
        std::string what = "result[" + std::to_string(x.request) + "]";
        if (!result) {
            failures.push_back(what + ": request never completed");
            continue;
        }
        if (to_string(result->status) != x.status) {
            failures.push_back(what + ": got " + to_string(result->status) + ", want " +
                               x.status);
            continue;
        }
        if (x.output)
            check(what + ".output", result->output, *x.output, x.tolerance);
        if (x.refund)
            check(what + ".refund", result->refund, *x.refund, x.tolerance);
    }

    for (const auto& x : expect.pools) {
        const Pool& p = sim.pool(x.shard, x.pair);
        std::string what = "pool " + p.name();
        if (x.actual) {
            check(what + " actual.x", p.actual().x, x.actual->x, x.tolerance);
            check(what + " actual.y", p.actual().y, x.actual->y, x.tolerance);
        }
        if (x.virtual_reserves) {
            check(what + " virtual.x", p.virtual_reserves().x, x.virtual_reserves->x,
                  x.tolerance);
            check(what + " virtual.y", p.virtual_reserves().y, x.virtual_reserves->y,
                  x.tolerance);
        }
    }

    for (const auto& x : expect.balances)
        check("balance " + x.user + "." + x.asset, sim.balance(x.user, x.asset), x.amount,
              x.tolerance);

    return failures;
}

} // namespace shardswap
