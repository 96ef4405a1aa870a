#pragma once

#include <variant>
#include <vector>

#include "shardswap/request.hpp"

namespace shardswap {

// Ground-truth sequential executors. Both run on the same fixed-point
// kernel as the pools, so equivalence checks against the live protocol
// are exact rather than approximate.

struct RouteOutcome {
    Amount output;
    std::vector<Amount> hop_outputs;
    PoolMap pools;
};

// Applies each hop of the route as an instant swap on a single global
// state with nothing else running: the sequential all-at-once baseline.
inline RouteOutcome atomic_execute(const MultiSwapRequest& request, PoolMap pools) {
    validate_route(request);
    RouteOutcome out;
    Amount carried = request.input_amount;
    for (const Hop& hop : request.route) {
        auto it = pools.find(PoolRef{hop.shard, hop.pair});
        if (it == pools.end())
            throw Error("atomic_execute: unknown pool " + pool_name(hop.shard, hop.pair));
        carried = it->second.instant_swap(hop.direction, carried).output;
        out.hop_outputs.push_back(carried);
    }
    out.output = carried;
    out.pools = std::move(pools);
    return out;
}

// Interference another party causes between the hops of a naive
// multi-swap: either a swap of their own or a wholesale reserve change.
struct InterferenceSwap {
    PoolRef pool;
    Direction direction = Direction::XToY;
    Amount amount;
};

struct InterferenceSetReserves {
    PoolRef pool;
    Amount x;
    Amount y;
};

struct Interference {
    std::size_t after_hop = 0; // applied once hop `after_hop` has executed
    std::variant<InterferenceSwap, InterferenceSetReserves> action;
};

// The guard-free baseline: hops execute one by one as instant swaps, the
// scheduled interference lands in between, and the user takes whatever
// the mutated pools pay. No minimum, no refunds.
inline RouteOutcome naive_execute(const MultiSwapRequest& request, PoolMap pools,
                                  const std::vector<Interference>& schedule = {}) {
    validate_route(request);
    RouteOutcome out;
    Amount carried = request.input_amount;
    for (std::size_t i = 0; i < request.route.size(); ++i) {
        const Hop& hop = request.route[i];
        auto it = pools.find(PoolRef{hop.shard, hop.pair});
        if (it == pools.end())
            throw Error("naive_execute: unknown pool " + pool_name(hop.shard, hop.pair));
        carried = it->second.instant_swap(hop.direction, carried).output;
        out.hop_outputs.push_back(carried);

        for (const Interference& intf : schedule) {
            if (intf.after_hop != i)
                continue;
            if (const auto* swap = std::get_if<InterferenceSwap>(&intf.action)) {
                auto p = pools.find(swap->pool);
                if (p == pools.end())
                    throw Error("naive_execute: interference on unknown pool");
                p->second.instant_swap(swap->direction, swap->amount);
            } else {
                const auto& set = std::get<InterferenceSetReserves>(intf.action);
                auto p = pools.find(set.pool);
                if (p == pools.end())
                    throw Error("naive_execute: interference on unknown pool");
                if (p->second.partially_locked())
                    throw Error("naive_execute: cannot reset a partially-locked pool");
                p->second = Pool(p->second.shard(), p->second.pair(), set.x, set.y,
                                 p->second.fee());
            }
        }
    }
    out.output = carried;
    out.pools = std::move(pools);
    return out;
}

} // namespace shardswap
