#pragma once

#include "../core/pool_math.hpp"
#include "time_index.hpp"

#include <algorithm>
#include <optional>
#include <span>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace lstvel {

/// Exact balance replay without holding-time bookkeeping.
class BalanceReplay {
public:
    explicit BalanceReplay(std::span<const TransferRecord> ledger) : ledger_(ledger)
    {
        if (!is_strictly_ordered(ledger))
            throw Error(ErrorKind::UnorderedInput, "ledger is not strictly ordered by (block, log_index)");
    }

    /// Applies every record with block <= t.
    void advance_to(BlockHeight t)
    {
        while (cursor_ < ledger_.size() && ledger_[cursor_].block <= t) {
            const auto &r = ledger_[cursor_++];
            if (r.value == 0 || r.from == r.to)
                continue;
            if (r.is_mint()) {
                minted_ += r.value;
            } else {
                auto &b = balances_[r.from];
                if (b < r.value)
                    throw Error(ErrorKind::InsufficientBalance,
                                r.from.to_string() + " overdraws at block " + std::to_string(r.block));
                b -= r.value;
            }
            balances_[r.to] += r.value;
        }
    }

    TokenAmount balance(const AccountId &a) const
    {
        auto it = balances_.find(a);
        return it == balances_.end() ? TokenAmount(0) : it->second;
    }

    const TokenAmount &minted() const noexcept { return minted_; }
    const std::unordered_map<AccountId, TokenAmount, AccountIdHash> &balances() const noexcept { return balances_; }

private:
    std::span<const TransferRecord> ledger_;
    std::size_t cursor_ = 0;
    std::unordered_map<AccountId, TokenAmount, AccountIdHash> balances_;
    TokenAmount minted_;
};

struct BalancePoint {
    BlockHeight block = 0;
    TokenAmount balance;
    std::optional<double> smoothed;
};

struct BalanceSeries {
    AccountId account;
    std::vector<BalancePoint> points;
    std::optional<double> smoothing_days;
};

struct SmoothingOptions {
    double window_days = 0; // 0 disables smoothing
    std::optional<BlockTimeIndex> time_index;

    std::int64_t window_seconds() const
    {
        return static_cast<std::int64_t>(window_days * static_cast<double>(kSecondsPerDay));
    }
    bool enabled() const noexcept { return window_days > 0; }
    const BlockTimeIndex &index() const
    {
        if (!time_index)
            throw Error(ErrorKind::MissingTimeIndex, "day-based smoothing requested without a block time index");
        return *time_index;
    }
};

/// Exact balances of `accounts` at each sample block, plus the trailing
/// day-window mean when smoothing is enabled.
inline std::vector<BalanceSeries> balance_series(std::span<const TransferRecord> ledger,
                                                 std::span<const AccountId> accounts,
                                                 std::span<const BlockHeight> schedule,
                                                 const SmoothingOptions &smoothing = {})
{
    if (smoothing.enabled())
        (void)smoothing.index();
    std::vector<BalanceSeries> out;
    if (accounts.empty())
        return out;
    for (const auto &a : accounts)
        out.push_back({a, {}, smoothing.enabled() ? std::optional<double>(smoothing.window_days) : std::nullopt});
    BalanceReplay replay(ledger);
    for (BlockHeight t : schedule) {
        replay.advance_to(t);
        for (auto &s : out)
            s.points.push_back({t, replay.balance(s.account), std::nullopt});
    }
    if (smoothing.enabled()) {
        for (auto &s : out) {
            std::vector<long double> raw;
            raw.reserve(s.points.size());
            for (const auto &p : s.points)
                raw.push_back(to_long_double(p.balance));
            auto avg = trailing_average(schedule, raw, smoothing.index(), smoothing.window_seconds());
            for (std::size_t i = 0; i < avg.size(); ++i)
                s.points[i].smoothed = avg[i];
        }
    }
    return out;
}

struct Holder {
    AccountId account;
    TokenAmount balance;
};

/// The n largest balances at block t, descending; ties by ascending address.
/// The zero and burning addresses never qualify.
inline std::vector<Holder> top_holders(std::span<const TransferRecord> ledger, BlockHeight t, std::size_t n,
                                       std::span<const AccountId> excluded = {})
{
    if (n == 0)
        return {};
    BalanceReplay replay(ledger);
    replay.advance_to(t);
    std::unordered_set<AccountId, AccountIdHash> skip(excluded.begin(), excluded.end());
    skip.insert(AccountId::zero());
    skip.insert(AccountId::burning());
    std::vector<Holder> all;
    for (const auto &[a, b] : replay.balances())
        if (b > 0 && !skip.contains(a))
            all.push_back({a, b});
    auto cmp = [](const Holder &x, const Holder &y) {
        return x.balance != y.balance ? x.balance > y.balance : x.account < y.account;
    };
    std::size_t k = std::min(n, all.size());
    std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(k), all.end(), cmp);
    all.resize(k);
    return all;
}

struct WrappedSharePoint {
    BlockHeight block = 0;
    double fraction = 0;
    std::optional<double> smoothed;
};

/// Fraction of supply (minted minus the burning address's balance) held by
/// the wrapper contract at each sample block.
inline std::vector<WrappedSharePoint> wrapped_share_series(std::span<const TransferRecord> ledger,
                                                           const AccountId &wrapper,
                                                           std::span<const BlockHeight> schedule,
                                                           const SmoothingOptions &smoothing = {})
{
    using boost::multiprecision::cpp_int;
    if (smoothing.enabled())
        (void)smoothing.index();
    BalanceReplay replay(ledger);
    std::vector<WrappedSharePoint> out;
    std::vector<long double> raw;
    for (BlockHeight t : schedule) {
        replay.advance_to(t);
        TokenAmount supply = replay.minted() - replay.balance(AccountId::burning());
        if (supply == 0)
            throw Error(ErrorKind::ZeroSupply, "no supply at block " + std::to_string(t));
        Rational f(cpp_int(replay.balance(wrapper)), cpp_int(supply));
        out.push_back({t, f.convert_to<double>(), std::nullopt});
        raw.push_back(f.convert_to<long double>());
    }
    if (smoothing.enabled()) {
        auto avg = trailing_average(schedule, raw, smoothing.index(), smoothing.window_seconds());
        for (std::size_t i = 0; i < avg.size(); ++i)
            out[i].smoothed = avg[i];
    }
    return out;
}

} // namespace lstvel
