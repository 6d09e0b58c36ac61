#pragma once

#include "../core/types.hpp"

#include <algorithm>
#include <utility>
#include <vector>

namespace lstvel {

struct Parcel {
    BlockHeight acquired_block = 0;
    TokenAmount amount;

    friend bool operator==(const Parcel &, const Parcel &) = default;
};

/// LIFO stack of parcels; back() is the most recently acquired.
class AccountState {
public:
    const std::vector<Parcel> &parcels() const noexcept { return parcels_; }
    const TokenAmount &balance() const noexcept { return balance_; }
    bool empty() const noexcept { return parcels_.empty(); }

    void push(BlockHeight block, const TokenAmount &amount)
    {
        if (amount == 0)
            return;
        parcels_.push_back({block, amount});
        balance_ += amount;
    }

    /// Consumes `amount` from the top of the stack. `on_consume(block, taken)`
    /// sees each (possibly partial) parcel removal, newest first. The caller
    /// checks the balance beforehand.
    template <typename OnConsume>
    void spend(const TokenAmount &amount, OnConsume &&on_consume)
    {
        TokenAmount remaining = amount;
        while (remaining > 0) {
            Parcel &top = parcels_.back();
            if (top.amount <= remaining) {
                remaining -= top.amount;
                on_consume(top.acquired_block, top.amount);
                parcels_.pop_back();
            } else {
                top.amount -= remaining;
                on_consume(top.acquired_block, remaining);
                remaining = 0;
            }
        }
        balance_ -= amount;
    }

private:
    std::vector<Parcel> parcels_;
    TokenAmount balance_;
};

/// Holding-time distribution of one account: (tau, amount) in ascending tau,
/// equal-tau amounts merged. tau is clamped to at least one block.
struct HoldingDistribution {
    AccountId owner;
    BlockHeight at_block = 0;
    std::vector<std::pair<std::uint64_t, TokenAmount>> entries;

    TokenAmount total() const
    {
        TokenAmount sum;
        for (const auto &[tau, w] : entries)
            sum += w;
        return sum;
    }
};

inline std::uint64_t holding_time(BlockHeight acquired, BlockHeight at) noexcept
{
    return at > acquired + 1 ? at - acquired : 1;
}

inline HoldingDistribution holding_distribution(const AccountState &state, const AccountId &owner, BlockHeight at)
{
    HoldingDistribution d;
    d.owner = owner;
    d.at_block = at;
    // Walking from the top of the stack visits non-decreasing tau.
    const auto &ps = state.parcels();
    for (auto it = ps.rbegin(); it != ps.rend(); ++it) {
        std::uint64_t tau = holding_time(it->acquired_block, at);
        if (!d.entries.empty() && d.entries.back().first == tau)
            d.entries.back().second += it->amount;
        else
            d.entries.emplace_back(tau, it->amount);
    }
    return d;
}

/// (sum over tau of w/tau) / money, accumulated in extended precision in
/// ascending tau and rounded once to double.
inline double velocity_of(const HoldingDistribution &d, const TokenAmount &money)
{
    long double weighted = 0;
    for (const auto &[tau, w] : d.entries)
        weighted += to_long_double(w) / static_cast<long double>(tau);
    return static_cast<double>(weighted / to_long_double(money));
}

} // namespace lstvel
