#pragma once

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace shardswap {

struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

using ShardId = std::string;
using AssetSymbol = std::string;
using Tick = std::uint64_t;

// Ordered asset pair backing one pool, e.g. (A, B).
struct PairKey {
    AssetSymbol x;
    AssetSymbol y;

    auto operator<=>(const PairKey&) const = default;
};

enum class Direction { XToY, YToX };

inline Direction opposite(Direction d) {
    return d == Direction::XToY ? Direction::YToX : Direction::XToY;
}

inline const AssetSymbol& input_asset(const PairKey& pair, Direction d) {
    return d == Direction::XToY ? pair.x : pair.y;
}

inline const AssetSymbol& output_asset(const PairKey& pair, Direction d) {
    return d == Direction::XToY ? pair.y : pair.x;
}

inline std::string to_string(Direction d) {
    return d == Direction::XToY ? "x->y" : "y->x";
}

inline Direction parse_direction(const std::string& s) {
    if (s == "x->y")
        return Direction::XToY;
    if (s == "y->x")
        return Direction::YToX;
    throw Error("bad direction '" + s + "' (expected \"x->y\" or \"y->x\")");
}

inline std::string pool_name(const ShardId& shard, const PairKey& pair) {
    return shard + "/" + pair.x + "-" + pair.y;
}

} // namespace shardswap
