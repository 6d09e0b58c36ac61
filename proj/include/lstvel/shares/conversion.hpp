#pragma once

#include "../core/pool_math.hpp"

namespace lstvel {

/// floor(amount * total_shares / total_pooled_ether), as getSharesByPooledEth.
inline TokenAmount tokens_to_shares(const TokenAmount &amount, const LidoStateSnapshot &s)
{
    TokenAmount pooled = total_pooled_ether(s);
    if (pooled == 0)
        throw Error(ErrorKind::ZeroPool, "block " + std::to_string(s.block) + ": total pooled ether is zero");
    return mul_div_floor(amount, s.total_shares, pooled);
}

/// floor(shares * total_pooled_ether / total_shares), as getPooledEthByShares.
inline TokenAmount shares_to_tokens(const TokenAmount &shares, const LidoStateSnapshot &s)
{
    if (s.total_shares == 0)
        throw Error(ErrorKind::ZeroShares, "block " + std::to_string(s.block) + ": total_shares is zero");
    return mul_div_floor(shares, total_pooled_ether(s), s.total_shares);
}

} // namespace lstvel
