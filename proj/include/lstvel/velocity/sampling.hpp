#pragma once

#include "replay.hpp"

#include <algorithm>
#include <map>
#include <span>
#include <vector>

namespace lstvel {

/// Weekly window at 12 s/block.
inline constexpr BlockHeight kBlocksPerWeek = 50400;

enum class SampleScope { Global, Accounts, Both };

struct SampleRequest {
    SampleScope scope = SampleScope::Global;
    /// Restricts per-account output; empty means every non-excluded holder.
    std::vector<AccountId> accounts;
};

/// Single forward replay of `ledger`; at each scheduled block (ascending)
/// emits the requested samples after every record at or before it is
/// applied. Per-account samples precede the global one within a block and
/// are ordered by address.
inline std::vector<VelocitySample> sample_series(std::span<const TransferRecord> ledger,
                                                 std::span<const BlockHeight> schedule, const SampleRequest &request,
                                                 ReplayEngine &engine)
{
    for (std::size_t i = 1; i < schedule.size(); ++i)
        if (schedule[i - 1] >= schedule[i])
            throw Error(ErrorKind::UnorderedInput, "sample schedule must be strictly ascending");
    std::vector<VelocitySample> out;
    std::size_t cursor = 0;
    for (BlockHeight t : schedule) {
        std::size_t end = cursor;
        while (end < ledger.size() && ledger[end].block <= t)
            ++end;
        engine.advance(ledger.subspan(cursor, end - cursor));
        cursor = end;
        engine.observe(t);
        if (request.scope != SampleScope::Global) {
            auto per_account = engine.account_velocities(t, request.accounts);
            out.insert(out.end(), per_account.begin(), per_account.end());
        }
        if (request.scope != SampleScope::Accounts && engine.circulating() > 0)
            out.push_back(engine.global_velocity(t));
    }
    return out;
}

inline std::vector<VelocitySample> sample_series(std::span<const TransferRecord> ledger,
                                                 std::span<const BlockHeight> schedule,
                                                 const SampleRequest &request = {}, ReplayOptions options = {})
{
    ReplayEngine engine(std::move(options));
    return sample_series(ledger, schedule, request, engine);
}

/// start, start+stride, ..., with `end` always included.
inline std::vector<BlockHeight> make_schedule(BlockHeight start, BlockHeight end, BlockHeight stride)
{
    if (stride == 0)
        throw Error(ErrorKind::InvalidConfig, "schedule stride must be positive");
    std::vector<BlockHeight> out;
    if (end < start)
        return out;
    for (BlockHeight b = start; b <= end; b += stride) {
        out.push_back(b);
        if (end - b < stride)
            break;
    }
    if (out.back() != end)
        out.push_back(end);
    return out;
}

struct WindowOptions {
    BlockHeight width = kBlocksPerWeek;
    /// Distance between window starts; 0 means tumbling windows (stride = width).
    BlockHeight stride = 0;
    BlockHeight origin = 0;
};

/// Arithmetic mean of the raw velocities falling in each window
/// [origin + k*stride, origin + k*stride + width), per scope. The averaged
/// sample is stamped with the window's start block and carries the money of
/// the last raw sample in the window. Empty windows produce nothing.
inline std::vector<VelocitySample> average_windows(std::span<const VelocitySample> samples,
                                                   const WindowOptions &options)
{
    if (options.width == 0)
        throw Error(ErrorKind::InvalidConfig, "window width must be positive");
    const BlockHeight stride = options.stride == 0 ? options.width : options.stride;

    struct Acc {
        long double sum = 0;
        std::size_t count = 0;
        BlockHeight last_block = 0;
        TokenAmount money;
    };
    // Key: (window index, scope); global sorts after accounts within a window.
    using Key = std::pair<std::uint64_t, std::pair<int, AccountId>>;
    std::map<Key, Acc> acc;
    for (const auto &s : samples) {
        if (s.at_block < options.origin)
            continue;
        BlockHeight rel = s.at_block - options.origin;
        // Windows k with k*stride <= rel < k*stride + width.
        std::uint64_t k_hi = rel / stride;
        std::uint64_t k_lo = rel >= options.width ? (rel - options.width) / stride + 1 : 0;
        for (std::uint64_t k = k_lo; k <= k_hi; ++k) {
            Key key{k, {s.is_global() ? 1 : 0, s.account.value_or(AccountId{})}};
            auto &a = acc[key];
            a.sum += s.velocity;
            ++a.count;
            if (a.count == 1 || s.at_block >= a.last_block) {
                a.last_block = s.at_block;
                a.money = s.money;
            }
        }
    }
    std::vector<VelocitySample> out;
    out.reserve(acc.size());
    for (const auto &[key, a] : acc) {
        VelocitySample v;
        v.at_block = options.origin + key.first * stride;
        if (key.second.first == 0)
            v.account = key.second.second;
        v.velocity = static_cast<double>(a.sum / static_cast<long double>(a.count));
        v.money = a.money;
        out.push_back(std::move(v));
    }
    return out;
}

} // namespace lstvel
