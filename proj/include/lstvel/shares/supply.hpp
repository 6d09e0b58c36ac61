#pragma once

#include "reconstruct.hpp"
#include "state_series.hpp"

#include <span>
#include <string>
#include <vector>

namespace lstvel {

struct SupplyPoint {
    BlockHeight block = 0;
    TokenAmount total_shares;
    TokenAmount total_pooled_ether;
    std::string conversion_rate; // shares per pooled-ether unit, plain decimal
};

inline constexpr int kConversionRateDigits = 24;

/// Token supply, share supply and token->share conversion rate at each
/// sample block.
inline std::vector<SupplyPoint> supply_series(const StateSeries &states, std::span<const BlockHeight> sample_blocks)
{
    using boost::multiprecision::cpp_int;
    std::vector<SupplyPoint> out;
    out.reserve(sample_blocks.size());
    for (BlockHeight b : sample_blocks) {
        const auto &s = states.lookup(b);
        SupplyPoint p;
        p.block = b;
        p.total_shares = s.total_shares;
        p.total_pooled_ether = total_pooled_ether(s);
        if (p.total_pooled_ether == 0)
            throw Error(ErrorKind::ZeroPool, "block " + std::to_string(b) + ": conversion rate undefined");
        p.conversion_rate = format_ratio(cpp_int(p.total_shares), cpp_int(p.total_pooled_ether), kConversionRateDigits);
        out.push_back(std::move(p));
    }
    return out;
}

/// Samples every `stride` blocks across the share ledger's span, both ends
/// included.
inline std::vector<SupplyPoint> supply_series(const StateSeries &states, const ShareLedger &ledger,
                                              BlockHeight stride)
{
    std::vector<BlockHeight> blocks;
    if (!ledger.empty() && stride > 0) {
        BlockHeight last = ledger.transfers.back().block;
        for (BlockHeight b = ledger.transfers.front().block; b <= last; b += stride)
            blocks.push_back(b);
        if (blocks.back() != last)
            blocks.push_back(last);
    }
    return supply_series(states, blocks);
}

} // namespace lstvel
