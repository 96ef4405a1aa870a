#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "shardswap/messages.hpp"
#include "shardswap/pool.hpp"

namespace shardswap {

using Json = nlohmann::ordered_json;

inline Json reserves_json(const Reserves& r) {
    return Json::array({r.x.str(), r.y.str()});
}

inline Json pool_json(const Pool& p) {
    Json escrow = Json::object();
    for (const auto& [asset, amt] : p.escrow())
        escrow[asset] = amt.str();
    return Json{{"pair", {p.pair().x, p.pair().y}},
                {"actual", reserves_json(p.actual())},
                {"virtual", reserves_json(p.virtual_reserves())},
                {"escrow", escrow},
                {"pending", p.pending_count()}};
}

// One applied event. kind names what happened; pool_after snapshots the
// touched pool (null for coordinator-side records). Serialized one JSON
// object per line; replay compares lines byte for byte.
struct TraceRecord {
    Tick tick = 0;
    std::uint64_t seq = 0;
    std::string node;
    std::string kind;
    Json payload;
    Json pool_after;
};

inline std::string to_line(const TraceRecord& r) {
    Json j{{"tick", r.tick},
           {"seq", r.seq},
           {"shard", r.node},
           {"kind", r.kind},
           {"payload", r.payload},
           {"pool_after", r.pool_after}};
    return j.dump();
}

class Trace {
public:
    void append(TraceRecord rec) { records_.push_back(std::move(rec)); }

    const std::vector<TraceRecord>& records() const { return records_; }
    std::size_t size() const { return records_.size(); }
    bool empty() const { return records_.empty(); }

    std::vector<std::string> lines() const {
        std::vector<std::string> out;
        out.reserve(records_.size());
        for (const auto& r : records_)
            out.push_back(to_line(r));
        return out;
    }

    std::string str() const {
        std::string out;
        for (const auto& r : records_) {
            out += to_line(r);
            out += '\n';
        }
        return out;
    }

private:
    std::vector<TraceRecord> records_;
};

} // namespace shardswap
