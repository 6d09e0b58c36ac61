#pragma once

#include "../core/types.hpp"

#include <algorithm>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace lstvel {

inline constexpr std::int64_t kSecondsPerDay = 86400;
inline constexpr std::int64_t kDefaultSecondsPerBlock = 12;

/// Block -> unix timestamp. Either an explicit table (linear interpolation
/// between known blocks) or an affine clock anchored at one block.
class BlockTimeIndex {
public:
    static BlockTimeIndex affine(BlockHeight anchor_block, std::int64_t anchor_timestamp,
                                 std::int64_t seconds_per_block = kDefaultSecondsPerBlock)
    {
        if (seconds_per_block <= 0)
            throw Error(ErrorKind::InvalidConfig, "seconds per block must be positive");
        BlockTimeIndex idx;
        idx.anchor_block_ = anchor_block;
        idx.anchor_ts_ = anchor_timestamp;
        idx.seconds_per_block_ = seconds_per_block;
        return idx;
    }

    static BlockTimeIndex explicit_table(std::vector<std::pair<BlockHeight, std::int64_t>> points)
    {
        std::sort(points.begin(), points.end());
        if (points.empty())
            throw Error(ErrorKind::MissingTimeIndex, "explicit time index has no entries");
        for (std::size_t i = 1; i < points.size(); ++i) {
            if (points[i].first == points[i - 1].first)
                throw Error(ErrorKind::DuplicateKey, "time index lists block " + std::to_string(points[i].first) + " twice");
            if (points[i].second < points[i - 1].second)
                throw Error(ErrorKind::InvalidConfig,
                            "time index is not monotone at block " + std::to_string(points[i].first));
        }
        BlockTimeIndex idx;
        idx.table_ = std::move(points);
        return idx;
    }

    bool is_explicit() const noexcept { return !table_.empty(); }

    std::int64_t timestamp(BlockHeight b) const
    {
        if (!is_explicit())
            return anchor_ts_ + (static_cast<std::int64_t>(b) - static_cast<std::int64_t>(anchor_block_)) *
                                    seconds_per_block_;
        auto it = std::lower_bound(table_.begin(), table_.end(), b,
                                   [](const auto &p, BlockHeight x) { return p.first < x; });
        if (it != table_.end() && it->first == b)
            return it->second;
        if (it == table_.begin() || it == table_.end())
            throw Error(ErrorKind::MissingTimeIndex, "block " + std::to_string(b) + " is outside the time index");
        auto lo = std::prev(it);
        auto span_blocks = static_cast<std::int64_t>(it->first - lo->first);
        auto offset = static_cast<std::int64_t>(b - lo->first);
        return lo->second + (it->second - lo->second) * offset / span_blocks;
    }

    /// Converts a day count to blocks under this clock's average spacing.
    BlockHeight blocks_for_days(double days) const
    {
        double spb = static_cast<double>(seconds_per_block_);
        if (is_explicit() && table_.size() > 1) {
            spb = static_cast<double>(table_.back().second - table_.front().second) /
                  static_cast<double>(table_.back().first - table_.front().first);
        }
        return static_cast<BlockHeight>(days * kSecondsPerDay / spb);
    }

private:
    BlockHeight anchor_block_ = 0;
    std::int64_t anchor_ts_ = 0;
    std::int64_t seconds_per_block_ = kDefaultSecondsPerBlock;
    std::vector<std::pair<BlockHeight, std::int64_t>> table_;
};

/// Trailing moving average: the value at sample k is the mean of every
/// sample j <= k with timestamp(j) >= timestamp(k) - window_seconds.
inline std::vector<double> trailing_average(std::span<const BlockHeight> blocks, std::span<const long double> values,
                                            const BlockTimeIndex &time, std::int64_t window_seconds)
{
    if (blocks.size() != values.size())
        throw Error(ErrorKind::InvalidConfig, "trailing_average: blocks and values differ in length");
    std::vector<std::int64_t> ts(blocks.size());
    for (std::size_t i = 0; i < blocks.size(); ++i)
        ts[i] = time.timestamp(blocks[i]);
    std::vector<double> out(blocks.size());
    std::size_t lo = 0;
    for (std::size_t k = 0; k < blocks.size(); ++k) {
        while (ts[lo] < ts[k] - window_seconds)
            ++lo;
        // Direct summation keeps the operator exactly linear in the values.
        long double sum = 0;
        for (std::size_t j = lo; j <= k; ++j)
            sum += values[j];
        out[k] = static_cast<double>(sum / static_cast<long double>(k - lo + 1));
    }
    return out;
}

} // namespace lstvel
