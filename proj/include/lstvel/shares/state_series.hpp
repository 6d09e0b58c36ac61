#pragma once

#include "../core/pool_math.hpp"

#include <algorithm>
#include <vector>

namespace lstvel {

/// Per-block protocol state, resolved as a step function: lookup(b) is the
/// latest snapshot at or before b.
class StateSeries {
public:
    StateSeries() = default;

    explicit StateSeries(std::vector<LidoStateSnapshot> snapshots) : snapshots_(std::move(snapshots))
    {
        for (std::size_t i = 1; i < snapshots_.size(); ++i)
            if (snapshots_[i - 1].block >= snapshots_[i].block)
                throw Error(ErrorKind::UnorderedInput,
                            "state snapshots not strictly ascending at block " +
                                std::to_string(snapshots_[i].block));
    }

    const LidoStateSnapshot *find(BlockHeight b) const noexcept
    {
        auto it = std::upper_bound(snapshots_.begin(), snapshots_.end(), b,
                                   [](BlockHeight lhs, const LidoStateSnapshot &s) { return lhs < s.block; });
        if (it == snapshots_.begin())
            return nullptr;
        return &*std::prev(it);
    }

    const LidoStateSnapshot &lookup(BlockHeight b) const
    {
        const auto *s = find(b);
        if (!s)
            throw Error(ErrorKind::MissingState, "no state snapshot at or before block " + std::to_string(b));
        return *s;
    }

    const std::vector<LidoStateSnapshot> &snapshots() const noexcept { return snapshots_; }
    bool empty() const noexcept { return snapshots_.empty(); }
    std::size_t size() const noexcept { return snapshots_.size(); }

private:
    std::vector<LidoStateSnapshot> snapshots_;
};

} // namespace lstvel
