#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "shardswap/coordinator.hpp"
#include "shardswap/messages.hpp"
#include "shardswap/trace.hpp"

namespace shardswap {

// Message delay in logical ticks, drawn deterministically per link from
// (seed, endpoints, message count).
struct LatencyConfig {
    Tick min = 1;
    Tick max = 1;
};

struct PoolSpec {
    PairKey pair;
    Amount reserve_x;
    Amount reserve_y;
    std::optional<Amount> gamma; // overrides the config-wide fee
};

struct ShardSpec {
    ShardId id;
    std::vector<PoolSpec> pools;
};

struct BackgroundSwap {
    Tick at = 0;
    ShardId shard;
    PairKey pair;
    Direction direction = Direction::XToY;
    Amount amount;
    std::string user;
};

struct SimConfig {
    std::uint64_t seed = 0;
    LatencyConfig latency;
    Amount gamma = Amount(1);
    Amount dust_floor = Pool::default_dust_floor();
    std::vector<ShardSpec> shards;
    std::vector<BackgroundSwap> background;
};

namespace detail {

inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

inline std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

} // namespace detail

// Single-threaded discrete-event simulator. Events are applied in
// (tick, enqueue-sequence) order, so a config and a request list map to
// exactly one trace. Each shard applies its queue serially; coordinators
// live on their own nodes and talk to shards only through messages.
class Simulator {
public:
    Simulator(SimConfig config, std::vector<MultiSwapRequest> requests)
        : cfg_(std::move(config)) {
        if (cfg_.latency.min > cfg_.latency.max)
            throw Error("config: latency min exceeds max");
        if (cfg_.latency.min == 0)
            throw Error("config: zero latency would deliver replies into the sending tick");
        FeePolicy config_fee(cfg_.gamma);

        for (const auto& shard : cfg_.shards) {
            if (shard.id.empty())
                throw Error("config: empty shard id");
            if (!shard_ids_.insert(shard.id).second)
                throw Error("config: duplicate shard id " + shard.id);
            for (const auto& spec : shard.pools) {
                if (spec.pair.x.empty() || spec.pair.y.empty() || spec.pair.x == spec.pair.y)
                    throw Error("config: bad asset pair on shard " + shard.id);
                FeePolicy fee = spec.gamma ? FeePolicy(*spec.gamma) : config_fee;
                Pool pool(shard.id, spec.pair, spec.reserve_x, spec.reserve_y, fee,
                          cfg_.dust_floor);
                if (!pools_.emplace(PoolRef{shard.id, spec.pair}, std::move(pool)).second)
                    throw Error("config: duplicate pool " + pool_name(shard.id, spec.pair));
            }
        }

        for (const auto& bg : cfg_.background) {
            require_pool(bg.shard, bg.pair, "background swap");
            if (!bg.amount.is_positive())
                throw Error("config: background swap amount must be positive");
            enqueue(bg.at, bg.shard,
                    BackgroundSwapMsg{bg.user, bg.pair, bg.direction, bg.amount});
        }

        coordinators_.reserve(requests.size());
        for (std::size_t i = 0; i < requests.size(); ++i) {
            validate_route(requests[i]);
            for (const Hop& hop : requests[i].route)
                require_pool(hop.shard, hop.pair, "request route");
            Tick submit = requests[i].submit_at;
            std::optional<Tick> timeout = requests[i].timeout_ticks;
            coordinators_.emplace_back(i, std::move(requests[i]));
            enqueue(submit, coordinators_.back().node_id(), CoordinatorWakeMsg{i});
            if (timeout)
                enqueue(submit + *timeout, coordinators_.back().node_id(),
                        CoordinatorTimeoutMsg{i});
        }
    }

    // Applies the single next event; empty when quiescent.
    std::optional<ShardEvent> step() {
        if (queue_.empty())
            return std::nullopt;
        ShardEvent ev = queue_.top();
        queue_.pop();
        deliver(ev);
        return ev;
    }

    void run_to_quiescence() {
        while (step()) {
        }
    }

    const SimConfig& config() const { return cfg_; }
    const Trace& trace() const { return trace_; }
    const PoolMap& pools() const { return pools_; }

    const Pool& pool(const ShardId& shard, const PairKey& pair) const {
        auto it = pools_.find(PoolRef{shard, pair});
        if (it == pools_.end())
            throw Error("no pool " + pool_name(shard, pair));
        return it->second;
    }

    const std::vector<Coordinator>& coordinators() const { return coordinators_; }

    std::optional<MultiSwapResult> result(std::size_t request) const {
        return request < coordinators_.size() ? coordinators_[request].result() : std::nullopt;
    }

    // Net signed balance changes per user and asset since the start of the
    // simulation. Users start from zero; spending before receiving is fine.
    const std::map<std::string, std::map<AssetSymbol, Amount>>& balances() const {
        return balances_;
    }

    Amount balance(const std::string& user, const AssetSymbol& asset) const {
        auto u = balances_.find(user);
        if (u == balances_.end())
            return Amount();
        auto a = u->second.find(asset);
        return a == u->second.end() ? Amount() : a->second;
    }

    // Per asset: user balances + pools of record + escrowed lock deposits.
    // Constant over any run; fees only ever move inside this sum.
    std::map<AssetSymbol, Amount> asset_totals() const {
        std::map<AssetSymbol, Amount> totals;
        for (const auto& [user, assets] : balances_)
            for (const auto& [asset, amt] : assets)
                totals[asset] += amt;
        for (const auto& [ref, pool] : pools_) {
            totals[pool.pair().x] += pool.actual().x;
            totals[pool.pair().y] += pool.actual().y;
            for (const auto& lock : pool.locks())
                if (lock.status == LockStatus::Pending)
                    totals[input_asset(pool.pair(), lock.direction)] += lock.input;
        }
        return totals;
    }

private:
    struct EventOrder {
        bool operator()(const ShardEvent& a, const ShardEvent& b) const {
            return a.at != b.at ? a.at > b.at : a.seq > b.seq;
        }
    };

    void require_pool(const ShardId& shard, const PairKey& pair, const char* what) const {
        if (!pools_.count(PoolRef{shard, pair}))
            throw Error(std::string(what) + " references unknown pool " +
                        pool_name(shard, pair));
    }

    Pool& pool_at(const ShardId& shard, const PairKey& pair) {
        return pools_.at(PoolRef{shard, pair});
    }

    void enqueue(Tick at, std::string target, MessagePayload payload) {
        queue_.push(ShardEvent{at, next_seq_++, std::move(target), std::move(payload)});
    }

    Tick link_delay(const std::string& from, const std::string& to) {
        std::uint64_t& n = link_counts_[{from, to}];
        std::uint64_t h = detail::mix64(cfg_.seed ^ detail::mix64(detail::fnv1a(from) ^
                                        detail::mix64(detail::fnv1a(to) ^ n)));
        ++n;
        Tick span = cfg_.latency.max - cfg_.latency.min + 1;
        return cfg_.latency.min + static_cast<Tick>(h % span);
    }

    void send(const std::string& from, const std::string& to, MessagePayload payload,
              Tick now) {
        enqueue(now + link_delay(from, to), to, std::move(payload));
    }

    void record(const ShardEvent& ev, std::string kind, Json payload,
                const Pool* touched = nullptr) {
        trace_.append(TraceRecord{ev.at, ev.seq, ev.target, std::move(kind),
                                  std::move(payload),
                                  touched ? pool_json(*touched) : Json(nullptr)});
    }

    void credit(const std::string& user, const AssetSymbol& asset, Amount amt) {
        balances_[user][asset] += amt;
    }

    void deliver(const ShardEvent& ev) {
        std::visit([&](const auto& msg) { handle(ev, msg); }, ev.payload);
    }

    static Json pair_json(const PairKey& pair) { return Json::array({pair.x, pair.y}); }

    // --- shard-side events ---

    void apply_instant(const ShardEvent& ev, const std::string& user, const PairKey& pair,
                       Direction dir, Amount amount, const InstantRequestMsg* reply_to) {
        Pool& p = pool_at(ev.target, pair);
        Json payload{{"user", user},
                     {"pair", pair_json(pair)},
                     {"direction", to_string(dir)},
                     {"amount", amount.str()}};
        if (reply_to)
            payload["request"] = reply_to->request;
        try {
            SwapOutcome out = p.instant_swap(dir, amount);
            credit(user, input_asset(pair, dir), -amount);
            credit(user, output_asset(pair, dir), out.output);
            payload["output"] = out.output.str();
            payload["branch"] = to_string(out.branch);
            record(ev, "instant-swap", payload, &p);
            if (reply_to)
                send(ev.target, node_of(reply_to->request),
                     InstantResultMsg{reply_to->request, reply_to->hop, true, out.output, ""},
                     ev.at);
        } catch (const Error& e) {
            payload["reason"] = e.what();
            record(ev, "instant-rejected", payload, &p);
            if (reply_to)
                send(ev.target, node_of(reply_to->request),
                     InstantResultMsg{reply_to->request, reply_to->hop, false, Amount(),
                                      e.what()},
                     ev.at);
        }
    }

    void handle(const ShardEvent& ev, const BackgroundSwapMsg& msg) {
        apply_instant(ev, msg.user, msg.pair, msg.direction, msg.amount, nullptr);
    }

    void handle(const ShardEvent& ev, const InstantRequestMsg& msg) {
        apply_instant(ev, msg.user, msg.pair, msg.direction, msg.amount, &msg);
    }

    void handle(const ShardEvent& ev, const LockRequestMsg& msg) {
        Pool& p = pool_at(ev.target, msg.pair);
        Json payload{{"request", msg.request},
                     {"hop", msg.hop},
                     {"user", msg.user},
                     {"pair", pair_json(msg.pair)},
                     {"direction", to_string(msg.direction)},
                     {"amount", msg.amount.str()}};
        try {
            LockRecord rec = p.lock_swap(msg.direction, msg.amount, ev.at);
            credit(msg.user, input_asset(msg.pair, msg.direction), -msg.amount);
            payload["lock_id"] = rec.id;
            payload["quoted"] = rec.quoted_output.str();
            record(ev, "lock-request", payload, &p);
            send(ev.target, node_of(msg.request),
                 LockResultMsg{msg.request, msg.hop, true, rec.id, rec.quoted_output, ""},
                 ev.at);
        } catch (const Error& e) {
            payload["reason"] = e.what();
            record(ev, "lock-rejected", payload, &p);
            send(ev.target, node_of(msg.request),
                 LockResultMsg{msg.request, msg.hop, false, 0, Amount(), e.what()}, ev.at);
        }
    }

    void handle(const ShardEvent& ev, const ResolveCommandMsg& msg) {
        Pool& p = pool_at(ev.target, msg.pair);
        ResolveEffect eff = p.resolve_lock(msg.lock_id, msg.decision);
        Amount released;
        if (msg.decision == Resolution::Execute) {
            released = eff.paid_out;
            credit(msg.user, output_asset(msg.pair, eff.direction), eff.paid_out);
        } else {
            released = eff.refunded;
            credit(msg.user, input_asset(msg.pair, eff.direction), eff.refunded);
        }
        record(ev, "resolve",
               Json{{"request", msg.request},
                    {"hop", msg.hop},
                    {"lock_id", msg.lock_id},
                    {"decision", to_string(msg.decision)},
                    {"released", released.str()},
                    {"fee_retained", eff.fee_retained.str()}},
               &p);
        send(ev.target, node_of(msg.request),
             ResolveAckMsg{msg.request, msg.hop, msg.decision, released}, ev.at);
    }

    // --- coordinator-side events ---

    std::string node_of(std::uint64_t request) const {
        return coordinators_[request].node_id();
    }

    void dispatch(const ShardEvent& ev, Coordinator& c,
                  const std::vector<Coordinator::Outgoing>& outgoing, bool had_decision,
                  bool had_result) {
        if (!had_decision && c.decision()) {
            const auto& d = *c.decision();
            record(ev, "decision",
                   Json{{"request", c.id()},
                        {"resolution", to_string(d.resolution)},
                        {"final_quote", d.final_quote.str()},
                        {"min_output", c.request().min_output.str()},
                        {"reason", d.reason}});
        }
        for (const auto& out : outgoing)
            send(c.node_id(), out.to, out.payload, ev.at);
        if (!had_result && c.result()) {
            const auto& r = *c.result();
            record(ev, "result",
                   Json{{"request", c.id()},
                        {"user", c.request().user},
                        {"status", to_string(r.status)},
                        {"output", r.output.str()},
                        {"refund", r.refund.str()},
                        {"reason", r.reason}});
        }
    }

    void handle(const ShardEvent& ev, const CoordinatorWakeMsg& msg) {
        Coordinator& c = coordinators_[msg.request];
        Json route = Json::array();
        for (const auto& hop : c.request().route)
            route.push_back(Json{{"shard", hop.shard},
                                 {"pair", pair_json(hop.pair)},
                                 {"direction", to_string(hop.direction)}});
        Json payload{{"request", c.id()},
                     {"user", c.request().user},
                     {"mode", c.request().mode == SwapMode::Naive ? "naive" : "locked"},
                     {"input_asset", c.request().input_asset},
                     {"amount", c.request().input_amount.str()},
                     {"output_asset", c.request().output_asset},
                     {"min_output", c.request().min_output.str()},
                     {"route", route}};
        try {
            Json projection = Json::array();
            for (const auto& hop : plan(c.request(), pools_).hops)
                projection.push_back(hop.projected_output.str());
            payload["projection"] = projection;
        } catch (const Error& e) {
            payload["projection"] = e.what();
        }
        record(ev, "submit", payload);

        bool had_result = c.done();
        dispatch(ev, c, c.start(), true, had_result);
    }

    void handle(const ShardEvent& ev, const CoordinatorTimeoutMsg& msg) {
        Coordinator& c = coordinators_[msg.request];
        bool had_decision = c.decision().has_value();
        bool had_result = c.done();
        auto outgoing = c.on_timeout();
        record(ev, "timeout",
               Json{{"request", c.id()}, {"acted", !had_decision && c.decision().has_value()}});
        dispatch(ev, c, outgoing, had_decision, had_result);
    }

    void handle(const ShardEvent& ev, const LockResultMsg& msg) {
        Coordinator& c = coordinators_[msg.request];
        record(ev, "lock-result",
               Json{{"request", msg.request},
                    {"hop", msg.hop},
                    {"ok", msg.ok},
                    {"quoted", msg.quoted.str()},
                    {"reason", msg.reason}});
        bool had_decision = c.decision().has_value();
        bool had_result = c.done();
        dispatch(ev, c, c.on_lock_result(msg), had_decision, had_result);
    }

    void handle(const ShardEvent& ev, const InstantResultMsg& msg) {
        Coordinator& c = coordinators_[msg.request];
        record(ev, "instant-result",
               Json{{"request", msg.request},
                    {"hop", msg.hop},
                    {"ok", msg.ok},
                    {"output", msg.output.str()},
                    {"reason", msg.reason}});
        bool had_decision = c.decision().has_value();
        bool had_result = c.done();
        dispatch(ev, c, c.on_instant_result(msg), had_decision, had_result);
    }

    void handle(const ShardEvent& ev, const ResolveAckMsg& msg) {
        Coordinator& c = coordinators_[msg.request];
        record(ev, "ack",
               Json{{"request", msg.request},
                    {"hop", msg.hop},
                    {"decision", to_string(msg.decision)},
                    {"released", msg.released.str()}});
        bool had_decision = c.decision().has_value();
        bool had_result = c.done();
        dispatch(ev, c, c.on_ack(msg), had_decision, had_result);
    }

    SimConfig cfg_;
    std::set<ShardId> shard_ids_;
    PoolMap pools_;
    std::vector<Coordinator> coordinators_;
    std::map<std::string, std::map<AssetSymbol, Amount>> balances_;
    std::priority_queue<ShardEvent, std::vector<ShardEvent>, EventOrder> queue_;
    std::uint64_t next_seq_ = 0;
    std::map<std::pair<std::string, std::string>, std::uint64_t> link_counts_;
    Trace trace_;
};

// Builds, runs to quiescence, and hands the whole simulation back.
inline Simulator run_simulation(SimConfig config, std::vector<MultiSwapRequest> requests) {
    Simulator sim(std::move(config), std::move(requests));
    sim.run_to_quiescence();
    return sim;
}

} // namespace shardswap
