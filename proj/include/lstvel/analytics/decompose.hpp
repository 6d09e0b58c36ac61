#pragma once

#include "../velocity/sampling.hpp"
#include "categories.hpp"

#include <span>
#include <string>
#include <vector>

namespace lstvel {

struct CategoryShares {
    BlockHeight block = 0;
    /// One entry per band, in CategoryTable::names_descending() order.
    std::vector<std::pair<std::string, double>> shares;
};

/// Each category's share of sum_i M_i V_i at every sample block. Accounts are
/// assigned once from `received` (absent accounts count as having received 0).
inline std::vector<CategoryShares> velocity_shares_by_category(std::span<const TransferRecord> ledger,
                                                               std::span<const BlockHeight> schedule,
                                                               const CategoryTable &table,
                                                               const ReceivedTotals &received,
                                                               ReplayOptions options = {})
{
    for (std::size_t i = 1; i < schedule.size(); ++i)
        if (schedule[i - 1] >= schedule[i])
            throw Error(ErrorKind::UnorderedInput, "sample schedule must be strictly ascending");
    const auto names = table.names_descending();
    const std::size_t bands = table.bands().size();
    ReplayEngine engine(std::move(options));
    std::vector<CategoryShares> out;
    std::size_t cursor = 0;
    for (BlockHeight t : schedule) {
        std::size_t end = cursor;
        while (end < ledger.size() && ledger[end].block <= t)
            ++end;
        engine.advance(ledger.subspan(cursor, end - cursor));
        cursor = end;
        engine.observe(t);
        if (engine.circulating() == 0)
            throw Error(ErrorKind::ZeroSupply, "no circulating money at block " + std::to_string(t));

        // M_i V_i = sum_tau w/tau; accumulate per band in address order.
        std::vector<long double> per_band(bands, 0);
        for (const auto &id : engine.holders()) {
            if (engine.is_excluded(id))
                continue;
            auto d = engine.holding_distribution(id, t);
            long double mv = 0;
            for (const auto &[tau, w] : d.entries)
                mv += to_long_double(w) / static_cast<long double>(tau);
            auto it = received.find(id);
            per_band[table.index_of(it == received.end() ? TokenAmount(0) : it->second)] += mv;
        }
        long double total = 0;
        for (auto v : per_band)
            total += v;
        CategoryShares row;
        row.block = t;
        for (std::size_t k = 0; k < bands; ++k) {
            std::size_t band = bands - 1 - k;
            row.shares.emplace_back(names[k], static_cast<double>(per_band[band] / total));
        }
        out.push_back(std::move(row));
    }
    return out;
}

} // namespace lstvel
