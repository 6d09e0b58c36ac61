#pragma once

// Brute-force reference computations. Deliberately shares nothing with the
// replay engine: arbitrary-precision integers, ordered maps, a stack rebuilt
// from the first record on every query, 50-digit binary floats for the sums.

#include "../core/types.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include <map>
#include <span>
#include <utility>
#include <vector>

namespace lstvel::synth::oracle {

using BigInt = boost::multiprecision::cpp_int;
using BigFloat = boost::multiprecision::cpp_bin_float_50;

/// Net holdings per account from all records at or before t.
inline std::map<AccountId, BigInt> balances(std::span<const TransferRecord> ledger, BlockHeight t)
{
    std::map<AccountId, BigInt> held;
    for (const auto &rec : ledger) {
        if (rec.block > t)
            break;
        BigInt amount(rec.value);
        if (rec.from != rec.to) {
            if (rec.from != AccountId::zero())
                held[rec.from] -= amount;
            held[rec.to] += amount;
        }
    }
    for (auto it = held.begin(); it != held.end();)
        it = it->second == 0 ? held.erase(it) : std::next(it);
    return held;
}

inline BigInt minted(std::span<const TransferRecord> ledger, BlockHeight t)
{
    BigInt total = 0;
    for (const auto &rec : ledger)
        if (rec.block <= t && rec.from == AccountId::zero() && rec.to != AccountId::zero())
            total += BigInt(rec.value);
    return total;
}

/// Parcels of `who` at t, bottom of the stack first, each (block, amount).
/// Spending always takes from the newest parcel first.
inline std::vector<std::pair<BlockHeight, BigInt>> stack(std::span<const TransferRecord> ledger, const AccountId &who,
                                                        BlockHeight t)
{
    std::vector<std::pair<BlockHeight, BigInt>> parcels;
    for (const auto &rec : ledger) {
        if (rec.block > t)
            break;
        if (rec.from == rec.to || rec.value == 0)
            continue;
        if (rec.from == who && who != AccountId::zero()) {
            BigInt owed(rec.value);
            while (owed > 0) {
                if (parcels.empty())
                    throw Error(ErrorKind::InsufficientBalance, "oracle: overdraft by " + who.to_string());
                auto &newest = parcels.back();
                if (newest.second > owed) {
                    newest.second -= owed;
                    owed = 0;
                } else {
                    owed -= newest.second;
                    parcels.pop_back();
                }
            }
        }
        if (rec.to == who)
            parcels.emplace_back(rec.block, BigInt(rec.value));
    }
    return parcels;
}

/// M_i V_i = sum over parcels of amount / max(1, t - acquired), and M_i.
inline std::pair<BigFloat, BigInt> weighted_money(std::span<const TransferRecord> ledger, const AccountId &who,
                                                  BlockHeight t)
{
    BigFloat weighted = 0;
    BigInt money = 0;
    for (const auto &[acquired, amount] : stack(ledger, who, t)) {
        BlockHeight age = t > acquired ? t - acquired : 0;
        if (age < 1)
            age = 1;
        weighted += BigFloat(amount) / BigFloat(age);
        money += amount;
    }
    return {weighted, money};
}

inline double velocity(std::span<const TransferRecord> ledger, const AccountId &who, BlockHeight t)
{
    auto [weighted, money] = weighted_money(ledger, who, t);
    if (money == 0)
        throw Error(ErrorKind::EmptyAccount, "oracle: " + who.to_string() + " holds nothing");
    return static_cast<double>(weighted / BigFloat(money));
}

/// Money-weighted mean of every holder's velocity, leaving out the zero and
/// burning addresses.
inline double global_velocity(std::span<const TransferRecord> ledger, BlockHeight t)
{
    BigFloat weighted = 0;
    BigInt money = 0;
    for (const auto &[who, held] : balances(ledger, t)) {
        if (who == AccountId::zero() || who == AccountId::burning())
            continue;
        auto [w, m] = weighted_money(ledger, who, t);
        weighted += w;
        money += m;
    }
    if (money == 0)
        throw Error(ErrorKind::ZeroSupply, "oracle: no circulating money");
    return static_cast<double>(weighted / BigFloat(money));
}

} // namespace lstvel::synth::oracle
