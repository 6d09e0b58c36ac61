#pragma once

#include "../core/types.hpp"

#include <algorithm>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace lstvel {

/// A half-open band [lower, upper) of cumulative received amount, in base
/// units. No upper bound means unbounded above.
struct CategoryBand {
    std::string name;
    TokenAmount lower;
    std::optional<TokenAmount> upper;
};

/// Bands partitioning [0, inf), stored in ascending order of lower bound.
class CategoryTable {
public:
    explicit CategoryTable(std::vector<CategoryBand> bands) : bands_(std::move(bands))
    {
        std::sort(bands_.begin(), bands_.end(),
                  [](const CategoryBand &a, const CategoryBand &b) { return a.lower < b.lower; });
        if (bands_.empty())
            throw Error(ErrorKind::InvalidConfig, "category table has no bands");
        if (bands_.front().lower != 0)
            throw Error(ErrorKind::InvalidConfig, "category table must start at 0, first band '" +
                                                      bands_.front().name + "' starts at " +
                                                      to_decimal(bands_.front().lower));
        for (std::size_t i = 0; i < bands_.size(); ++i) {
            const auto &b = bands_[i];
            bool last = i + 1 == bands_.size();
            if (last && b.upper)
                throw Error(ErrorKind::InvalidConfig, "last band '" + b.name + "' must be unbounded above");
            if (!last && (!b.upper || *b.upper != bands_[i + 1].lower))
                throw Error(ErrorKind::InvalidConfig,
                            "band '" + b.name + "' does not end where '" + bands_[i + 1].name + "' begins");
            if (b.upper && *b.upper <= b.lower)
                throw Error(ErrorKind::InvalidConfig, "band '" + b.name + "' is empty");
        }
    }

    /// Whale/Orca/Dolphin/Fish/Shrimp/Krill/Plankton, in whole tokens.
    static const CategoryTable &standard()
    {
        static const CategoryTable table = [] {
            auto t = [](std::uint64_t whole) { return TokenAmount(whole) * kOneToken; };
            return CategoryTable({
                {"Plankton", TokenAmount(0), t(1)},
                {"Krill", t(1), t(10)},
                {"Shrimp", t(10), t(100)},
                {"Fish", t(100), t(1000)},
                {"Dolphin", t(1000), t(3000)},
                {"Orca", t(3000), t(10000)},
                {"Whale", t(10000), std::nullopt},
            });
        }();
        return table;
    }

    const std::vector<CategoryBand> &bands() const noexcept { return bands_; }

    std::size_t index_of(const TokenAmount &received) const
    {
        auto it = std::upper_bound(bands_.begin(), bands_.end(), received,
                                   [](const TokenAmount &v, const CategoryBand &b) { return v < b.lower; });
        return static_cast<std::size_t>(std::distance(bands_.begin(), it)) - 1;
    }

    const std::string &categorize(const TokenAmount &received) const { return bands_[index_of(received)].name; }

    /// Names ordered from the top band down (Whale first for the standard table).
    std::vector<std::string> names_descending() const
    {
        std::vector<std::string> out;
        for (auto it = bands_.rbegin(); it != bands_.rend(); ++it)
            out.push_back(it->name);
        return out;
    }

private:
    std::vector<CategoryBand> bands_;
};

inline const std::string &categorize(const TokenAmount &received, const CategoryTable &table)
{
    return table.categorize(received);
}

using ReceivedTotals = std::unordered_map<AccountId, TokenAmount, AccountIdHash>;

/// Cumulative inbound value per recipient, mints included, self-transfers
/// skipped.
inline ReceivedTotals received_totals(std::span<const TransferRecord> ledger)
{
    ReceivedTotals out;
    for (const auto &r : ledger)
        if (r.from != r.to)
            out[r.to] += r.value;
    return out;
}

inline TokenAmount total_received(std::span<const TransferRecord> ledger, const AccountId &a)
{
    TokenAmount sum;
    for (const auto &r : ledger)
        if (r.to == a && r.from != a)
            sum += r.value;
    return sum;
}

} // namespace lstvel
