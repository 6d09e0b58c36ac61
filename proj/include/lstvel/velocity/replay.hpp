#pragma once

#include "account_state.hpp"

#include <algorithm>
#include <exception>
#include <functional>
#include <future>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

namespace lstvel {

/// One velocity observation. `account` empty means the global aggregate.
struct VelocitySample {
    BlockHeight at_block = 0;
    std::optional<AccountId> account;
    double velocity = 0;
    TokenAmount money;

    bool is_global() const noexcept { return !account.has_value(); }
};

struct ReplayOptions {
    /// Accounts are partitioned across this many shards; each shard applies
    /// its side of every transfer. Output does not depend on the count.
    std::size_t shards = 1;
    /// Additional accounts left out of velocity aggregates (the zero and
    /// burning addresses are always left out).
    std::vector<AccountId> excluded;
};

namespace detail {

/// Exact amount held by non-excluded accounts, bucketed by acquisition block.
/// Buckets are appended in ascending block order because new parcels are
/// always acquired at the current replay block.
class AgeAggregate {
public:
    void add(BlockHeight block, const TokenAmount &amount)
    {
        if (entries_.empty() || entries_.back().block < block)
            entries_.push_back({block, TokenAmount(0), 0});
        Entry &e = entries_.back().block == block ? entries_.back() : locate(block);
        e.amount += amount;
        e.cached = to_long_double(e.amount);
        total_ += amount;
    }

    void subtract(BlockHeight block, const TokenAmount &amount)
    {
        Entry &e = locate(block);
        e.amount -= amount;
        e.cached = to_long_double(e.amount);
        total_ -= amount;
        if (e.amount == 0 && ++zero_entries_ > 1024 && zero_entries_ * 2 > entries_.size())
            compact();
    }

    const TokenAmount &total() const noexcept { return total_; }

    /// sum over buckets of amount / max(1, at - block), ascending tau.
    long double weighted_inverse_age(BlockHeight at) const
    {
        long double sum = 0;
        for (auto it = entries_.rbegin(); it != entries_.rend(); ++it)
            sum += it->cached / static_cast<long double>(holding_time(it->block, at));
        return sum;
    }

private:
    struct Entry {
        BlockHeight block;
        TokenAmount amount;
        long double cached;
    };

    Entry &locate(BlockHeight block)
    {
        auto it = std::lower_bound(entries_.begin(), entries_.end(), block,
                                   [](const Entry &e, BlockHeight b) { return e.block < b; });
        if (it == entries_.end() || it->block != block)
            throw Error(ErrorKind::InsufficientBalance,
                        "age bucket for block " + std::to_string(block) + " is missing");
        return *it;
    }

    void compact()
    {
        std::erase_if(entries_, [](const Entry &e) { return e.amount == 0; });
        zero_entries_ = 0;
    }

    std::vector<Entry> entries_;
    TokenAmount total_;
    std::size_t zero_entries_ = 0;
};

} // namespace detail

/// Replays transfers through per-account LIFO stacks and evaluates micro
/// velocity (per account) and global velocity at the current block.
class ReplayEngine {
public:
    explicit ReplayEngine(ReplayOptions options = {}) : options_(std::move(options))
    {
        if (options_.shards == 0)
            options_.shards = 1;
        shards_.resize(options_.shards);
        excluded_ = options_.excluded;
        excluded_.push_back(AccountId::zero());
        excluded_.push_back(AccountId::burning());
        std::sort(excluded_.begin(), excluded_.end());
        excluded_.erase(std::unique(excluded_.begin(), excluded_.end()), excluded_.end());
    }

    std::size_t shard_count() const noexcept { return shards_.size(); }

    bool is_excluded(const AccountId &a) const noexcept
    {
        return std::binary_search(excluded_.begin(), excluded_.end(), a);
    }

    /// Highest block applied so far (or observed through sampling).
    BlockHeight current_block() const noexcept { return current_block_; }
    std::size_t applied_count() const noexcept { return applied_; }
    const TokenAmount &total_minted() const noexcept { return total_minted_; }

    void apply(const TransferRecord &r) { advance(std::span<const TransferRecord>(&r, 1)); }

    /// Applies a batch in order. Records must continue the (block, log_index)
    /// order of everything applied before.
    void advance(std::span<const TransferRecord> records)
    {
        if (records.empty())
            return;
        check_order(records);
        if (shards_.size() == 1)
            advance_single(records);
        else
            advance_sharded(records);
        last_key_ = records.back().key();
        current_block_ = std::max(current_block_, records.back().block);
        applied_ += records.size();
    }

    /// Declares that sampling happens at `t`; all later records must be > t.
    void observe(BlockHeight t)
    {
        if (t < current_block_)
            throw Error(ErrorKind::NonMonotonicBlock, "cannot observe block " + std::to_string(t) +
                                                          " after replaying block " + std::to_string(current_block_));
        current_block_ = t;
        observed_at_ = t;
    }

    const AccountState *account(const AccountId &a) const
    {
        const auto &m = shard_of(a).accounts;
        auto it = m.find(a);
        return it == m.end() ? nullptr : &it->second;
    }

    TokenAmount balance(const AccountId &a) const
    {
        const auto *s = account(a);
        return s ? s->balance() : TokenAmount(0);
    }

    /// Sum of every account balance, including excluded accounts.
    TokenAmount total_balance() const
    {
        TokenAmount sum;
        for (const auto &sh : shards_)
            for (const auto &[id, st] : sh.accounts)
                sum += st.balance();
        return sum;
    }

    /// Money held by accounts that count toward velocity.
    const TokenAmount &circulating() const noexcept { return aggregate_.total(); }

    /// All accounts with a nonzero balance, ascending by address.
    std::vector<AccountId> holders() const
    {
        std::vector<AccountId> out;
        for (const auto &sh : shards_)
            for (const auto &[id, st] : sh.accounts)
                if (!st.empty())
                    out.push_back(id);
        std::sort(out.begin(), out.end());
        return out;
    }

    template <typename F>
    void for_each_account(F &&f) const
    {
        for (const auto &sh : shards_)
            for (const auto &[id, st] : sh.accounts)
                f(id, st);
    }

    HoldingDistribution holding_distribution(const AccountId &a, BlockHeight t) const
    {
        check_time(t);
        const auto *s = account(a);
        if (!s || s->empty())
            throw Error(ErrorKind::EmptyAccount, a.to_string() + " holds nothing at block " + std::to_string(t));
        return lstvel::holding_distribution(*s, a, t);
    }

    VelocitySample micro_velocity(const AccountId &a, BlockHeight t) const
    {
        auto d = holding_distribution(a, t);
        VelocitySample v;
        v.at_block = t;
        v.account = a;
        v.money = account(a)->balance();
        v.velocity = velocity_of(d, v.money);
        return v;
    }

    VelocitySample global_velocity(BlockHeight t) const
    {
        check_time(t);
        if (aggregate_.total() == 0)
            throw Error(ErrorKind::ZeroSupply, "no circulating money at block " + std::to_string(t));
        VelocitySample v;
        v.at_block = t;
        v.money = aggregate_.total();
        v.velocity = static_cast<double>(aggregate_.weighted_inverse_age(t) / to_long_double(v.money));
        return v;
    }

    /// Per-account samples for every non-excluded holder (or only `filter`
    /// when given), ascending by address. Empty accounts are omitted.
    std::vector<VelocitySample> account_velocities(BlockHeight t,
                                                   std::span<const AccountId> filter = {}) const
    {
        std::vector<VelocitySample> out;
        if (filter.empty()) {
            for (const auto &id : holders())
                if (!is_excluded(id))
                    out.push_back(micro_velocity(id, t));
        } else {
            std::vector<AccountId> ids(filter.begin(), filter.end());
            std::sort(ids.begin(), ids.end());
            ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
            for (const auto &id : ids) {
                const auto *s = account(id);
                if (s && !s->empty())
                    out.push_back(micro_velocity(id, t));
            }
        }
        return out;
    }

private:
    struct Shard {
        std::unordered_map<AccountId, AccountState, AccountIdHash> accounts;
        std::vector<std::pair<BlockHeight, TokenAmount>> consumed; // from non-excluded senders
        std::optional<std::size_t> failed_at;
        std::exception_ptr failure;
    };

    static bool is_noop(const TransferRecord &r) { return r.value == 0 || r.from == r.to; }

    std::size_t shard_index(const AccountId &a) const noexcept { return AccountIdHash{}(a) % shards_.size(); }
    Shard &shard_of(const AccountId &a) { return shards_[shard_index(a)]; }
    const Shard &shard_of(const AccountId &a) const { return shards_[shard_index(a)]; }

    void check_time(BlockHeight t) const
    {
        if (t < current_block_)
            throw Error(ErrorKind::NonMonotonicBlock, "sample block " + std::to_string(t) +
                                                          " precedes replayed block " + std::to_string(current_block_));
    }

    void check_order(std::span<const TransferRecord> records) const
    {
        std::optional<RecordKey> prev = last_key_;
        for (const auto &r : records) {
            if (observed_at_ && r.block <= *observed_at_)
                throw Error(ErrorKind::NonMonotonicBlock, "record at block " + std::to_string(r.block) +
                                                              " arrives after sampling block " +
                                                              std::to_string(*observed_at_));
            if (prev && r.block < prev->block)
                throw Error(ErrorKind::NonMonotonicBlock, "record at block " + std::to_string(r.block) +
                                                              " regresses behind block " + std::to_string(prev->block));
            if (prev && !(*prev < r.key()))
                throw Error(ErrorKind::UnorderedInput, "duplicate or unordered key (" + std::to_string(r.block) +
                                                           ", " + std::to_string(r.log_index) + ")");
            prev = r.key();
        }
    }

    static void insufficient(const TransferRecord &r, const TokenAmount &have)
    {
        throw Error(ErrorKind::InsufficientBalance,
                    r.from.to_string() + " spends " + to_decimal(r.value) + " at (" + std::to_string(r.block) + ", " +
                        std::to_string(r.log_index) + ") but holds " + to_decimal(have));
    }

    void advance_single(std::span<const TransferRecord> records)
    {
        auto &accounts = shards_.front().accounts;
        for (const auto &r : records) {
            if (is_noop(r))
                continue;
            if (r.is_mint()) {
                total_minted_ += r.value;
            } else {
                auto &sender = accounts[r.from];
                if (sender.balance() < r.value)
                    insufficient(r, sender.balance());
                if (is_excluded(r.from))
                    sender.spend(r.value, [](BlockHeight, const TokenAmount &) {});
                else
                    sender.spend(r.value, [&](BlockHeight b, const TokenAmount &x) { aggregate_.subtract(b, x); });
            }
            accounts[r.to].push(r.block, r.value);
            if (!is_excluded(r.to))
                aggregate_.add(r.block, r.value);
        }
    }

    void advance_sharded(std::span<const TransferRecord> records)
    {
        auto run = [&](std::size_t k) {
            Shard &sh = shards_[k];
            sh.consumed.clear();
            for (std::size_t i = 0; i < records.size(); ++i) {
                const auto &r = records[i];
                if (is_noop(r))
                    continue;
                try {
                    if (!r.is_mint() && shard_index(r.from) == k) {
                        auto &sender = sh.accounts[r.from];
                        if (sender.balance() < r.value)
                            insufficient(r, sender.balance());
                        bool track = !is_excluded(r.from);
                        sender.spend(r.value, [&](BlockHeight b, const TokenAmount &x) {
                            if (track)
                                sh.consumed.emplace_back(b, x);
                        });
                    }
                } catch (...) {
                    sh.failed_at = i;
                    sh.failure = std::current_exception();
                    return;
                }
                if (shard_index(r.to) == k)
                    sh.accounts[r.to].push(r.block, r.value);
            }
        };
        std::vector<std::future<void>> jobs;
        for (std::size_t k = 1; k < shards_.size(); ++k)
            jobs.push_back(std::async(std::launch::async, run, k));
        run(0);
        for (auto &j : jobs)
            j.get();

        const Shard *first_failure = nullptr;
        for (const auto &sh : shards_)
            if (sh.failure && (!first_failure || *sh.failed_at < *first_failure->failed_at))
                first_failure = &sh;
        if (first_failure)
            std::rethrow_exception(first_failure->failure);

        for (const auto &r : records) {
            if (is_noop(r))
                continue;
            if (r.is_mint())
                total_minted_ += r.value;
            if (!is_excluded(r.to))
                aggregate_.add(r.block, r.value);
        }
        for (auto &sh : shards_) {
            for (const auto &[b, x] : sh.consumed)
                aggregate_.subtract(b, x);
            sh.consumed.clear();
        }
    }

    ReplayOptions options_;
    std::vector<AccountId> excluded_;
    std::vector<Shard> shards_;
    detail::AgeAggregate aggregate_;
    TokenAmount total_minted_;
    std::optional<RecordKey> last_key_;
    BlockHeight current_block_ = 0;
    std::optional<BlockHeight> observed_at_;
    std::size_t applied_ = 0;
};

} // namespace lstvel
