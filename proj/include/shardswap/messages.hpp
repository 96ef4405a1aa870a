#pragma once

#include <cstdint>
#include <string>
#include <variant>

#include "shardswap/request.hpp"

namespace shardswap {

// Protocol messages carried between coordinator nodes and shards. Shards
// never talk to each other; every cross-shard effect flows through the
// coordinator owning the request.

struct BackgroundSwapMsg {
    std::string user;
    PairKey pair;
    Direction direction = Direction::XToY;
    Amount amount;
};

struct LockRequestMsg {
    std::uint64_t request = 0;
    std::size_t hop = 0;
    std::string user;
    PairKey pair;
    Direction direction = Direction::XToY;
    Amount amount;
};

struct LockResultMsg {
    std::uint64_t request = 0;
    std::size_t hop = 0;
    bool ok = false;
    std::uint64_t lock_id = 0;
    Amount quoted;
    std::string reason;
};

struct InstantRequestMsg {
    std::uint64_t request = 0;
    std::size_t hop = 0;
    std::string user;
    PairKey pair;
    Direction direction = Direction::XToY;
    Amount amount;
};

struct InstantResultMsg {
    std::uint64_t request = 0;
    std::size_t hop = 0;
    bool ok = false;
    Amount output;
    std::string reason;
};

struct ResolveCommandMsg {
    std::uint64_t request = 0;
    std::size_t hop = 0;
    std::uint64_t lock_id = 0;
    PairKey pair;
    Resolution decision = Resolution::Cancel;
    std::string user;
};

struct ResolveAckMsg {
    std::uint64_t request = 0;
    std::size_t hop = 0;
    Resolution decision = Resolution::Cancel;
    Amount released; // execute: paid output; cancel: refunded input
};

// Local coordinator wake-ups: request submission and timeout expiry.
struct CoordinatorWakeMsg {
    std::uint64_t request = 0;
};

struct CoordinatorTimeoutMsg {
    std::uint64_t request = 0;
};

using MessagePayload =
    std::variant<BackgroundSwapMsg, LockRequestMsg, LockResultMsg, InstantRequestMsg,
                 InstantResultMsg, ResolveCommandMsg, ResolveAckMsg, CoordinatorWakeMsg,
                 CoordinatorTimeoutMsg>;

struct ShardEvent {
    Tick at = 0;
    std::uint64_t seq = 0; // tiebreak for equal ticks: enqueue order
    std::string target;    // shard id or coordinator node id
    MessagePayload payload;
};

} // namespace shardswap
