#pragma once

#include "../analytics/balances.hpp"
#include "../analytics/decompose.hpp"
#include "../shares/supply.hpp"
#include "../velocity/sampling.hpp"
#include "csv.hpp"

#include <map>
#include <ostream>
#include <span>

namespace lstvel::io {

inline void write_velocity_samples(std::ostream &out, std::span<const VelocitySample> samples)
{
    out << "block_number,scope,address,money,velocity\n";
    for (const auto &s : samples) {
        out << s.at_block << ',' << (s.is_global() ? "global" : "account") << ','
            << (s.account ? s.account->to_string() : "") << ',' << to_decimal(s.money) << ','
            << format_double(s.velocity) << '\n';
    }
}

inline void write_category_shares(std::ostream &out, std::span<const CategoryShares> rows)
{
    out << "block_number,category,share\n";
    for (const auto &r : rows)
        for (const auto &[name, share] : r.shares)
            out << r.block << ',' << name << ',' << format_double(share) << '\n';
}

/// address,category,total_received
inline void write_category_assignment(std::ostream &out, const ReceivedTotals &received, const CategoryTable &table)
{
    std::vector<std::pair<AccountId, TokenAmount>> rows(received.begin(), received.end());
    std::sort(rows.begin(), rows.end(), [](const auto &a, const auto &b) { return a.first < b.first; });
    out << "address,category,total_received\n";
    for (const auto &[a, v] : rows)
        out << a.to_string() << ',' << table.categorize(v) << ',' << to_decimal(v) << '\n';
}

inline void write_balance_series(std::ostream &out, std::span<const BalanceSeries> series,
                                 const std::map<AccountId, std::string> &labels)
{
    out << "block_number,address,label,balance,smoothed\n";
    for (const auto &s : series) {
        auto l = labels.find(s.account);
        for (const auto &p : s.points)
            out << p.block << ',' << s.account.to_string() << ',' << (l == labels.end() ? "" : l->second) << ','
                << to_decimal(p.balance) << ',' << (p.smoothed ? format_double(*p.smoothed) : "") << '\n';
    }
}

inline void write_top_holders(std::ostream &out, BlockHeight at, std::span<const Holder> holders,
                              const std::map<AccountId, std::string> &labels)
{
    out << "block_number,rank,address,label,balance\n";
    std::size_t rank = 1;
    for (const auto &h : holders) {
        auto l = labels.find(h.account);
        out << at << ',' << rank++ << ',' << h.account.to_string() << ',' << (l == labels.end() ? "" : l->second)
            << ',' << to_decimal(h.balance) << '\n';
    }
}

inline void write_wrapped_share(std::ostream &out, std::span<const WrappedSharePoint> points)
{
    out << "block_number,fraction,smoothed\n";
    for (const auto &p : points)
        out << p.block << ',' << format_double(p.fraction) << ',' << (p.smoothed ? format_double(*p.smoothed) : "")
            << '\n';
}

inline void write_supply(std::ostream &out, std::span<const SupplyPoint> points)
{
    out << "block_number,total_shares,total_pooled_ether,conversion_rate\n";
    for (const auto &p : points)
        out << p.block << ',' << to_decimal(p.total_shares) << ',' << to_decimal(p.total_pooled_ether) << ','
            << p.conversion_rate << '\n';
}

} // namespace lstvel::io
