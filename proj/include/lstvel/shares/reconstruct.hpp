#pragma once

#include "conversion.hpp"
#include "state_series.hpp"

#include <algorithm>
#include <future>
#include <optional>
#include <span>
#include <vector>

namespace lstvel {

enum class Provenance { NativeEvent, Reconstructed };

constexpr std::string_view to_string(Provenance p) noexcept
{
    return p == Provenance::NativeEvent ? "native" : "reconstructed";
}

/// Canonical share-denominated transfer history. `provenance[i]` describes
/// `transfers[i]`.
struct ShareLedger {
    TransferLedger transfers;
    std::vector<Provenance> provenance;
    std::optional<BlockHeight> cutover; // first native share block, if any

    std::size_t size() const noexcept { return transfers.size(); }
    bool empty() const noexcept { return transfers.empty(); }
};

struct ReconstructOptions {
    /// Number of block-aligned partitions converted concurrently.
    std::size_t partitions = 1;
};

namespace detail {

inline void convert_range(std::span<const TransferRecord> in, std::span<TransferRecord> out,
                          const StateSeries &states)
{
    for (std::size_t i = 0; i < in.size(); ++i) {
        const auto &r = in[i];
        const auto *snap = states.find(r.block);
        if (!snap)
            throw Error(ErrorKind::MissingState,
                        "no state snapshot at or before block " + std::to_string(r.block) + " (log " +
                            std::to_string(r.log_index) + ")");
        TransferRecord s = r;
        try {
            s.value = tokens_to_shares(r.value, *snap);
        } catch (const Error &e) {
            if (e.kind() == ErrorKind::ZeroPool)
                throw Error(ErrorKind::MissingState, "token transfer at block " + std::to_string(r.block) +
                                                         " precedes the first deposit (pooled ether is zero)");
            throw;
        }
        s.denomination = Denomination::Shares;
        out[i] = std::move(s);
    }
}

} // namespace detail

/// Merges token-denominated transfers (converted at their own block's state)
/// with native share transfers. The first native share block is the cutover:
/// token records at or after it are redundant and dropped.
inline ShareLedger reconstruct(std::span<const TransferRecord> token_transfers,
                               std::span<const TransferRecord> native_share_transfers, const StateSeries &states,
                               const ReconstructOptions &options = {})
{
    if (!is_strictly_ordered(token_transfers))
        throw Error(ErrorKind::UnorderedInput, "token transfers are not strictly ordered by (block, log_index)");
    if (!is_strictly_ordered(native_share_transfers))
        throw Error(ErrorKind::UnorderedInput, "share transfers are not strictly ordered by (block, log_index)");

    ShareLedger ledger;
    if (!native_share_transfers.empty())
        ledger.cutover = native_share_transfers.front().block;

    auto pre_end = token_transfers.end();
    if (ledger.cutover) {
        pre_end = std::lower_bound(token_transfers.begin(), token_transfers.end(), *ledger.cutover,
                                   [](const TransferRecord &r, BlockHeight b) { return r.block < b; });
    }
    std::span<const TransferRecord> pre(token_transfers.begin(), pre_end);

    ledger.transfers.resize(pre.size() + native_share_transfers.size());
    std::span<TransferRecord> out(ledger.transfers.data(), pre.size());

    std::size_t parts = std::clamp<std::size_t>(options.partitions, 1, std::max<std::size_t>(pre.size(), 1));
    if (parts == 1) {
        detail::convert_range(pre, out, states);
    } else {
        // Partition on block boundaries; each range writes a disjoint slice.
        std::vector<std::size_t> bounds{0};
        for (std::size_t p = 1; p < parts; ++p) {
            std::size_t idx = pre.size() * p / parts;
            while (idx > bounds.back() && idx < pre.size() && pre[idx].block == pre[idx - 1].block)
                ++idx;
            if (idx > bounds.back() && idx < pre.size())
                bounds.push_back(idx);
        }
        bounds.push_back(pre.size());
        std::vector<std::future<void>> jobs;
        for (std::size_t p = 0; p + 1 < bounds.size(); ++p) {
            auto len = bounds[p + 1] - bounds[p];
            jobs.push_back(std::async(std::launch::async, [&, p, len] {
                detail::convert_range(pre.subspan(bounds[p], len), out.subspan(bounds[p], len), states);
            }));
        }
        // Surface the error of the earliest partition for deterministic diagnostics.
        std::exception_ptr first;
        for (auto &j : jobs) {
            try {
                j.get();
            } catch (...) {
                if (!first)
                    first = std::current_exception();
            }
        }
        if (first)
            std::rethrow_exception(first);
    }

    std::copy(native_share_transfers.begin(), native_share_transfers.end(), ledger.transfers.begin() + pre.size());
    ledger.provenance.assign(pre.size(), Provenance::Reconstructed);
    ledger.provenance.resize(ledger.transfers.size(), Provenance::NativeEvent);
    for (std::size_t i = pre.size(); i < ledger.transfers.size(); ++i)
        ledger.transfers[i].denomination = Denomination::Shares;
    return ledger;
}

/// Wraps an already share-denominated ledger as native records.
inline ShareLedger native_share_ledger(TransferLedger transfers)
{
    if (!is_strictly_ordered(transfers))
        throw Error(ErrorKind::UnorderedInput, "share transfers are not strictly ordered by (block, log_index)");
    ShareLedger ledger;
    if (!transfers.empty())
        ledger.cutover = transfers.front().block;
    ledger.provenance.assign(transfers.size(), Provenance::NativeEvent);
    ledger.transfers = std::move(transfers);
    return ledger;
}

} // namespace lstvel
