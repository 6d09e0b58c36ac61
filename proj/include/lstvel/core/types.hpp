#pragma once

#include "account.hpp"
#include "amount.hpp"

#include <algorithm>
#include <cstdint>
#include <span>
#include <string>
#include <tuple>
#include <vector>

namespace lstvel {

using BlockHeight = std::uint64_t;

/// First and last blocks of the full stETH event window.
inline constexpr BlockHeight kStudyFirstBlock = 11480187;
inline constexpr BlockHeight kStudyLastBlock = 21145533;

enum class Denomination { Tokens, Shares };

constexpr std::string_view to_string(Denomination d) noexcept
{
    return d == Denomination::Tokens ? "tokens" : "shares";
}

struct RecordKey {
    BlockHeight block = 0;
    std::uint64_t log_index = 0;

    friend auto operator<=>(const RecordKey &, const RecordKey &) = default;
};

struct TransferRecord {
    BlockHeight block = 0;
    std::uint64_t log_index = 0;
    AccountId from;
    AccountId to;
    TokenAmount value;
    Denomination denomination = Denomination::Tokens;
    std::string tx_hash; // optional, carried through for output only

    RecordKey key() const noexcept { return {block, log_index}; }
    bool is_mint() const noexcept { return from.is_zero(); }
    bool is_burn_destined() const noexcept { return to.is_burning(); }

    friend bool operator==(const TransferRecord &, const TransferRecord &) = default;
};

using TransferLedger = std::vector<TransferRecord>;

inline bool by_key(const TransferRecord &a, const TransferRecord &b) noexcept { return a.key() < b.key(); }

/// Strictly increasing keys, i.e. sorted with no duplicates.
inline bool is_strictly_ordered(std::span<const TransferRecord> records) noexcept
{
    return std::adjacent_find(records.begin(), records.end(), [](const auto &a, const auto &b) {
               return !(a.key() < b.key());
           }) == records.end();
}

inline void sort_records(TransferLedger &records)
{
    std::stable_sort(records.begin(), records.end(), by_key);
}

struct LidoStateSnapshot {
    BlockHeight block = 0;
    std::uint64_t deposited_validators = 0;
    std::uint64_t beacon_validators = 0;
    TokenAmount beacon_balance;
    TokenAmount buffered_ether;
    TokenAmount total_shares;

    friend bool operator==(const LidoStateSnapshot &, const LidoStateSnapshot &) = default;
};

} // namespace lstvel
