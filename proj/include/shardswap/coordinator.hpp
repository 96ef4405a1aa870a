#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "shardswap/messages.hpp"
#include "shardswap/request.hpp"

namespace shardswap {

// Projects a multi-swap over pool snapshots by replaying the hop locks on
// copies. Projection only; authoritative quotes come from each shard when
// the locks are actually placed.
inline MultiSwapPlan plan(const MultiSwapRequest& request, const PoolMap& snapshots) {
    validate_route(request);
    PoolMap scratch;
    MultiSwapPlan out;
    Amount carried = request.input_amount;
    for (const Hop& hop : request.route) {
        PoolRef ref{hop.shard, hop.pair};
        auto have = scratch.find(ref);
        if (have == scratch.end()) {
            auto src = snapshots.find(ref);
            if (src == snapshots.end())
                throw Error("plan: unknown pool " + pool_name(hop.shard, hop.pair));
            have = scratch.emplace(ref, src->second).first;
        }
        LockRecord rec = have->second.lock_swap(hop.direction, carried);
        out.hops.push_back({hop, carried, rec.quoted_output});
        carried = rec.quoted_output;
    }
    return out;
}

// Drives one multi-swap request: locks hop by hop (each hop's quoted
// output feeds the next), then resolves every held lock with a single
// execute-all or cancel-all decision. Event-driven; the simulator owns
// delivery and calls back in.
class Coordinator {
public:
    struct Outgoing {
        ShardId to;
        MessagePayload payload;
    };

    struct HeldLock {
        std::size_t hop = 0;
        ShardId shard;
        PairKey pair;
        std::uint64_t lock_id = 0;
        Amount input;
        Amount quoted;
    };

    struct Decision {
        Resolution resolution = Resolution::Cancel;
        Amount final_quote;
        std::string reason; // cancel: "below-min" | "hop-rejected" | "timeout"
    };

    Coordinator(std::uint64_t id, MultiSwapRequest request)
        : id_(id), request_(std::move(request)) {
        validate_route(request_);
    }

    std::uint64_t id() const { return id_; }
    std::string node_id() const { return "coordinator:" + std::to_string(id_); }
    const MultiSwapRequest& request() const { return request_; }
    const std::vector<HeldLock>& held() const { return held_; }
    const std::optional<Decision>& decision() const { return decision_; }
    const std::optional<MultiSwapResult>& result() const { return result_; }
    bool done() const { return result_.has_value(); }

    std::vector<Outgoing> start() {
        if (request_.mode == SwapMode::Naive)
            return {instant_for_hop(0, request_.input_amount)};
        return {lock_for_hop(0, request_.input_amount)};
    }

    std::vector<Outgoing> on_lock_result(const LockResultMsg& msg) {
        if (done() || msg.hop != next_hop_ || !awaiting_result_)
            return {};
        awaiting_result_ = false;

        if (!msg.ok) {
            if (decision_) { // a timeout already decided and resolved the held locks
                maybe_finish();
                return {};
            }
            decision_ = Decision{Resolution::Cancel, Amount(), "hop-rejected"};
            return resolve_all();
        }

        const Hop& hop = request_.route[msg.hop];
        held_.push_back({msg.hop, hop.shard, hop.pair, msg.lock_id, carried_, msg.quoted});

        if (decision_) { // timed out while this lock was in flight
            ++acks_pending_;
            return {resolve_for(held_.back())};
        }

        carried_ = msg.quoted;
        if (msg.hop + 1 < request_.route.size()) {
            ++next_hop_;
            return {lock_for_hop(next_hop_, carried_)};
        }

        // Final hop locked: the quote either clears the user's floor or
        // the whole chain unwinds.
        if (msg.quoted >= request_.min_output)
            decision_ = Decision{Resolution::Execute, msg.quoted, ""};
        else
            decision_ = Decision{Resolution::Cancel, msg.quoted, "below-min"};
        return resolve_all();
    }

    std::vector<Outgoing> on_instant_result(const InstantResultMsg& msg) {
        if (done() || msg.hop != next_hop_ || !awaiting_result_)
            return {};
        awaiting_result_ = false;
        if (!msg.ok) {
            result_ = MultiSwapResult{MultiSwapResult::Status::Cancelled, Amount(), Amount(),
                                      "hop-rejected"};
            return {};
        }
        carried_ = msg.output;
        if (msg.hop + 1 < request_.route.size()) {
            ++next_hop_;
            return {instant_for_hop(next_hop_, carried_)};
        }
        result_ = MultiSwapResult{MultiSwapResult::Status::Executed, carried_, Amount(), ""};
        return {};
    }

    std::vector<Outgoing> on_ack(const ResolveAckMsg& msg) {
        if (done() || acks_pending_ == 0)
            return {};
        if (msg.decision == Resolution::Cancel && msg.hop == 0)
            refund_ = msg.released;
        --acks_pending_;
        maybe_finish();
        return {};
    }

    // Fires at most once; past the decision point it is a no-op. Naive
    // requests hold no locks, so there is nothing to unwind.
    std::vector<Outgoing> on_timeout() {
        if (done() || decision_ || request_.mode == SwapMode::Naive)
            return {};
        decision_ = Decision{Resolution::Cancel, Amount(), "timeout"};
        auto out = resolve_all();
        // A lock request may still be in flight; its result, if ok, gets
        // cancelled on arrival (see on_lock_result).
        return out;
    }

private:
    Outgoing lock_for_hop(std::size_t hop, Amount amount) {
        awaiting_result_ = true;
        const Hop& h = request_.route[hop];
        return {h.shard, LockRequestMsg{id_, hop, request_.user, h.pair, h.direction, amount}};
    }

    Outgoing instant_for_hop(std::size_t hop, Amount amount) {
        awaiting_result_ = true;
        const Hop& h = request_.route[hop];
        return {h.shard, InstantRequestMsg{id_, hop, request_.user, h.pair, h.direction, amount}};
    }

    Outgoing resolve_for(const HeldLock& l) {
        return {l.shard, ResolveCommandMsg{id_, l.hop, l.lock_id, l.pair,
                                           decision_->resolution, request_.user}};
    }

    std::vector<Outgoing> resolve_all() {
        std::vector<Outgoing> out;
        for (const auto& l : held_) {
            ++acks_pending_;
            out.push_back(resolve_for(l));
        }
        maybe_finish();
        return out;
    }

    void maybe_finish() {
        if (done() || acks_pending_ > 0 || awaiting_result_ || !decision_)
            return;
        if (decision_->resolution == Resolution::Execute)
            result_ = MultiSwapResult{MultiSwapResult::Status::Executed, decision_->final_quote,
                                      Amount(), ""};
        else
            result_ = MultiSwapResult{MultiSwapResult::Status::Cancelled, Amount(), refund_,
                                      decision_->reason};
    }

    std::uint64_t id_;
    MultiSwapRequest request_;
    std::size_t next_hop_ = 0;
    Amount carried_{request_.input_amount};
    bool awaiting_result_ = false;
    std::vector<HeldLock> held_;
    std::optional<Decision> decision_;
    std::size_t acks_pending_ = 0;
    Amount refund_;
    std::optional<MultiSwapResult> result_;
};

} // namespace shardswap
