#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "shardswap/pool.hpp"

namespace shardswap {

struct Hop {
    ShardId shard;
    PairKey pair;
    Direction direction = Direction::XToY;

    const AssetSymbol& in() const { return input_asset(pair, direction); }
    const AssetSymbol& out() const { return output_asset(pair, direction); }
};

struct PoolRef {
    ShardId shard;
    PairKey pair;

    auto operator<=>(const PoolRef&) const = default;
};

using PoolMap = std::map<PoolRef, Pool>;

// A locked multi-swap chains one lock per hop and resolves all-or-nothing
// against min_output. Naive mode executes the hops as plain instant swaps
// with no guarantee; it exists as the baseline the lock protocol fixes.
enum class SwapMode { Locked, Naive };

struct MultiSwapRequest {
    std::string user;
    AssetSymbol input_asset;
    AssetSymbol output_asset;
    Amount input_amount;
    Amount min_output;
    std::vector<Hop> route;
    std::optional<Tick> timeout_ticks;
    Tick submit_at = 0;
    SwapMode mode = SwapMode::Locked;
};

inline void validate_route(const MultiSwapRequest& r) {
    if (r.route.empty())
        throw Error("request for " + r.user + ": empty route");
    if (!r.input_amount.is_positive())
        throw Error("request for " + r.user + ": input amount must be positive");
    if (r.min_output.is_negative())
        throw Error("request for " + r.user + ": negative min_output");
    const AssetSymbol* carried = &r.input_asset;
    for (std::size_t i = 0; i < r.route.size(); ++i) {
        const Hop& h = r.route[i];
        if (h.in() != *carried)
            throw Error("request for " + r.user + ": hop " + std::to_string(i) +
                        " takes " + h.in() + " but the route carries " + *carried);
        carried = &h.out();
    }
    if (*carried != r.output_asset)
        throw Error("request for " + r.user + ": route ends in " + *carried +
                    ", not " + r.output_asset);
}

struct MultiSwapPlan {
    struct HopPlan {
        Hop hop;
        Amount input;
        Amount projected_output;
    };
    std::vector<HopPlan> hops;

    Amount projected_output() const {
        return hops.empty() ? Amount() : hops.back().projected_output;
    }
};

struct MultiSwapResult {
    enum class Status { Executed, Cancelled };

    Status status = Status::Cancelled;
    Amount output;      // executed: final credited amount
    Amount refund;      // cancelled: input-asset amount returned
    std::string reason; // cancelled: "below-min" | "hop-rejected" | "timeout"
};

inline std::string to_string(MultiSwapResult::Status s) {
    return s == MultiSwapResult::Status::Executed ? "executed" : "cancelled";
}

} // namespace shardswap
