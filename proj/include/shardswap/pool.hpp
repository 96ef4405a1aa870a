#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "shardswap/amount.hpp"
#include "shardswap/types.hpp"

namespace shardswap {

enum class LockStatus { Pending, Executed, Cancelled };
enum class Resolution { Execute, Cancel };

inline std::string to_string(Resolution r) {
    return r == Resolution::Execute ? "execute" : "cancel";
}

// Which curve priced a swap. On a partially-locked pool the swapper is
// paid min(actual-curve quote, virtual-curve quote).
enum class QuoteBranch { Unlocked, MinOfActual, MinOfVirtual };

inline std::string to_string(QuoteBranch b) {
    switch (b) {
    case QuoteBranch::Unlocked: return "unlocked";
    case QuoteBranch::MinOfActual: return "min-of-actual";
    default: return "min-of-virtual";
    }
}

struct Reserves {
    Amount x;
    Amount y;

    Amount& in(Direction d) { return d == Direction::XToY ? x : y; }
    Amount& out(Direction d) { return d == Direction::XToY ? y : x; }
    const Amount& in(Direction d) const { return d == Direction::XToY ? x : y; }
    const Amount& out(Direction d) const { return d == Direction::XToY ? y : x; }

    bool operator==(const Reserves&) const = default;
};

// One outstanding lock-swap. input is the gross user deposit (fee
// included); quoted_output is the price fixed at lock time and is what an
// execute pays, no matter what traded in between.
struct LockRecord {
    std::uint64_t id = 0;
    Direction direction = Direction::XToY;
    Amount input;
    Amount quoted_output;
    LockStatus status = LockStatus::Pending;
    Tick created_at = 0;
};

struct SwapOutcome {
    Amount output;
    QuoteBranch branch = QuoteBranch::Unlocked;
    Reserves actual_after;
    Reserves virtual_after;
};

// What a resolution released. Execute pays quoted_output outward and folds
// the deposit into the pool of record; cancel refunds gamma*input and
// retains the fee on both curves.
struct ResolveEffect {
    std::uint64_t lock_id = 0;
    Resolution decision = Resolution::Execute;
    Direction direction = Direction::XToY;
    Amount input;
    Amount quoted_output;
    Amount paid_out;     // execute only
    Amount refunded;     // cancel only
    Amount fee_retained; // cancel only
};

// Pool state machine for one asset pair on one shard.
//
// Two curves share the pair: `actual` moves only on executed trades,
// `virtual` additionally carries every pending lock as if it had executed.
// With no pending locks the curves are identical. All mutations are
// serialized by the owning shard; a Pool value is safe to copy and read
// anywhere.
//
// Capacity rule: an operation that pays (or promises) output must leave
// the output reserve positive on the virtual curve AND on the actual
// curve net of already-promised lock outputs. The second half is what
// makes any execute/cancel interleaving of pending locks resolvable
// without ever driving a reserve negative.
class Pool {
public:
    Pool(ShardId shard, PairKey pair, Amount reserve_x, Amount reserve_y,
         FeePolicy fee = FeePolicy(), Amount dust_floor = default_dust_floor())
        : shard_(std::move(shard)), pair_(std::move(pair)),
          actual_{reserve_x, reserve_y}, virtual_{reserve_x, reserve_y},
          fee_(fee), dust_floor_(dust_floor) {
        if (!reserve_x.is_positive() || !reserve_y.is_positive())
            throw Error("pool " + name() + ": reserves must be positive");
        if (dust_floor_.is_negative())
            throw Error("pool " + name() + ": negative dust floor");
    }

    static Amount default_dust_floor() { return Amount::from_raw(1'000'000); } // 10^-6 units

    const ShardId& shard() const { return shard_; }
    const PairKey& pair() const { return pair_; }
    std::string name() const { return pool_name(shard_, pair_); }
    const FeePolicy& fee() const { return fee_; }
    const Reserves& actual() const { return actual_; }
    const Reserves& virtual_reserves() const { return virtual_; }
    const std::map<AssetSymbol, Amount>& escrow() const { return escrow_; }
    const std::vector<LockRecord>& locks() const { return locks_; }

    bool partially_locked() const { return pending_count_ > 0; }
    std::size_t pending_count() const { return pending_count_; }

    Amount quote_actual(Direction d, Amount delta_in) const {
        return quote(actual_.in(d), actual_.out(d), delta_in, fee_);
    }
    Amount quote_virtual(Direction d, Amount delta_in) const {
        return quote(virtual_.in(d), virtual_.out(d), delta_in, fee_);
    }

    // The output a swap or lock of delta_in would be paid right now.
    std::pair<Amount, QuoteBranch> preview(Direction d, Amount delta_in) const {
        if (!partially_locked())
            return {quote_actual(d, delta_in), QuoteBranch::Unlocked};
        Amount on_actual = quote_actual(d, delta_in);
        Amount on_virtual = quote_virtual(d, delta_in);
        if (on_actual <= on_virtual)
            return {on_actual, QuoteBranch::MinOfActual};
        return {on_virtual, QuoteBranch::MinOfVirtual};
    }

    // Executes immediately against the pool of record; both curves move by
    // (+delta_in, -output). The full gross delta_in enters the reserves,
    // fee included.
    SwapOutcome instant_swap(Direction d, Amount delta_in) {
        require_positive_input(delta_in);
        auto [out, branch] = preview(d, delta_in);
        if (out >= virtual_.out(d) || out >= available_actual_out(d))
            throw Error("pool " + name() + ": swap would drain the " +
                        output_asset(pair_, d) + " reserve");
        actual_.in(d) += delta_in;
        actual_.out(d) -= out;
        virtual_.in(d) += delta_in;
        virtual_.out(d) -= out;
        return {out, branch, actual_, virtual_};
    }

    // Quotes like instant_swap but defers execution: the pool of record is
    // untouched, the virtual curve moves by (+delta_in, -output), and both
    // legs are escrowed under a pending LockRecord.
    LockRecord lock_swap(Direction d, Amount delta_in, Tick now = 0) {
        require_positive_input(delta_in);
        auto [out, branch] = preview(d, delta_in);
        (void)branch;
        if (!out.is_positive())
            throw Error("pool " + name() + ": lock output rounds to zero");
        if (virtual_.out(d) - out < dust_floor_ || available_actual_out(d) - out < dust_floor_)
            throw Error("pool " + name() + ": lock would exhaust the " +
                        output_asset(pair_, d) + " reserve");

        virtual_.in(d) += delta_in;
        virtual_.out(d) -= out;
        escrow_[input_asset(pair_, d)] += delta_in;
        escrow_[output_asset(pair_, d)] += out;

        LockRecord rec{next_lock_id_++, d, delta_in, out, LockStatus::Pending, now};
        locks_.push_back(rec);
        ++pending_count_;
        return rec;
    }

    // Terminal step of a lock. Execute applies the locked trade to the
    // pool of record at the quoted price; cancel backs it out of the
    // virtual curve. Either way the fee (1 - gamma) of the deposit stays
    // in the pool: on execute it arrives inside the gross deposit, on
    // cancel it is credited to both curves so they reconcile once the
    // lock set drains. A second resolution attempt fails without mutating.
    ResolveEffect resolve_lock(std::uint64_t lock_id, Resolution decision) {
        LockRecord* rec = nullptr;
        for (auto& l : locks_)
            if (l.id == lock_id)
                rec = &l;
        if (!rec)
            throw Error("pool " + name() + ": unknown lock " + std::to_string(lock_id));
        if (rec->status != LockStatus::Pending)
            throw Error("pool " + name() + ": lock " + std::to_string(lock_id) +
                        " already resolved");

        Direction d = rec->direction;
        ResolveEffect eff{rec->id, decision, d, rec->input, rec->quoted_output,
                          Amount(), Amount(), Amount()};
        if (decision == Resolution::Execute) {
            actual_.in(d) += rec->input;
            actual_.out(d) -= rec->quoted_output;
            eff.paid_out = rec->quoted_output;
            rec->status = LockStatus::Executed;
        } else {
            Amount refund = rec->input.scaled_by(fee_.gamma);
            Amount retained = rec->input - refund;
            virtual_.in(d) -= refund;
            virtual_.out(d) += rec->quoted_output;
            actual_.in(d) += retained;
            eff.refunded = refund;
            eff.fee_retained = retained;
            rec->status = LockStatus::Cancelled;
        }
        escrow_[input_asset(pair_, d)] -= rec->input;
        escrow_[output_asset(pair_, d)] -= rec->quoted_output;
        --pending_count_;
        return eff;
    }

    // Checks every structural invariant; throws on the first violation.
    void verify() const {
        if (!actual_.x.is_positive() || !actual_.y.is_positive() ||
            !virtual_.x.is_positive() || !virtual_.y.is_positive())
            throw Error("pool " + name() + ": non-positive reserve");

        Amount dx, dy; // pending lock deltas, signed
        std::map<AssetSymbol, Amount> held;
        for (const auto& l : locks_) {
            if (l.status != LockStatus::Pending)
                continue;
            if (!l.quoted_output.is_positive())
                throw Error("pool " + name() + ": pending lock with zero quote");
            if (l.direction == Direction::XToY) {
                dx += l.input;
                dy -= l.quoted_output;
            } else {
                dy += l.input;
                dx -= l.quoted_output;
            }
            held[input_asset(pair_, l.direction)] += l.input;
            held[output_asset(pair_, l.direction)] += l.quoted_output;
        }
        if (virtual_.x != actual_.x + dx || virtual_.y != actual_.y + dy)
            throw Error("pool " + name() + ": virtual reserves out of step with pending locks");
        if (pending_count_ == 0 && !(virtual_ == actual_))
            throw Error("pool " + name() + ": curves diverge with no pending locks");
        for (const auto& [asset, amt] : escrow_) {
            Amount expect = held.count(asset) ? held[asset] : Amount();
            if (amt != expect)
                throw Error("pool " + name() + ": escrow mismatch for " + asset);
        }
        for (const auto& [asset, amt] : held)
            if (!escrow_.count(asset) && !amt.is_zero())
                throw Error("pool " + name() + ": escrow missing entry for " + asset);
        if (!available_actual_out(Direction::XToY).is_positive() ||
            !available_actual_out(Direction::YToX).is_positive())
            throw Error("pool " + name() + ": promised outputs exceed the pool of record");
    }

private:
    void require_positive_input(Amount delta_in) const {
        if (!delta_in.is_positive())
            throw Error("pool " + name() + ": swap input must be positive");
    }

    // Actual-curve output reserve minus what pending locks already promise
    // from it.
    Amount available_actual_out(Direction d) const {
        Amount promised;
        for (const auto& l : locks_)
            if (l.status == LockStatus::Pending && l.direction == d)
                promised += l.quoted_output;
        return actual_.out(d) - promised;
    }

    ShardId shard_;
    PairKey pair_;
    Reserves actual_;
    Reserves virtual_;
    std::map<AssetSymbol, Amount> escrow_;
    std::vector<LockRecord> locks_;
    std::size_t pending_count_ = 0;
    FeePolicy fee_;
    Amount dust_floor_;
    std::uint64_t next_lock_id_ = 1;
};

} // namespace shardswap
