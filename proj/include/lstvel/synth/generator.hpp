#pragma once

#include "../shares/conversion.hpp"
#include "../shares/state_series.hpp"
#include "rng.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace lstvel::synth {

struct GeneratorConfig {
    std::uint64_t seed = 1;
    std::size_t accounts = 20;
    std::size_t transfers = 1000;
    BlockHeight start_block = 1000;
    BlockHeight block_span = 100000;
    /// Probability that a record is a mint (records are always mints while
    /// nobody holds anything).
    double mint_fraction = 0.2;
    /// Probability that a spend goes to the burning address.
    double burn_fraction = 0.02;
    /// Amounts are log-uniform in [10^min, 10^max] base units.
    double value_log10_min = 15;
    double value_log10_max = 21;
    /// Probability that a spend's sender, or a record's recipient, is the
    /// designated whale (account 0).
    double whale_fraction = 0;
    /// Probability that a spend moves the sender's whole balance.
    double full_spend_fraction = 0.25;
    /// Staking reward per rebase, as a fraction of the beacon balance.
    double reward_rate = 0.0001;
    BlockHeight rebase_period = 7200;

    void validate() const
    {
        auto fraction = [](double v, const char *name) {
            if (!(v >= 0 && v <= 1))
                throw Error(ErrorKind::InvalidConfig, std::string(name) + " must lie in [0, 1]");
        };
        fraction(mint_fraction, "mint_fraction");
        fraction(burn_fraction, "burn_fraction");
        fraction(whale_fraction, "whale_fraction");
        fraction(full_spend_fraction, "full_spend_fraction");
        fraction(reward_rate, "reward_rate");
        if (transfers > 0 && accounts < 2)
            throw Error(ErrorKind::InvalidConfig, "accounts must be at least 2 when transfers are generated");
        if (!(value_log10_min >= 0 && value_log10_min <= value_log10_max && value_log10_max <= 70))
            throw Error(ErrorKind::InvalidConfig, "value_log10 bounds must satisfy 0 <= min <= max <= 70");
        if (rebase_period == 0)
            throw Error(ErrorKind::InvalidConfig, "rebase_period must be positive");
    }
};

struct GeneratedLedger {
    TransferLedger transfers; // share-denominated
    StateSeries states;
    TokenAmount total_minted;
};

namespace detail {

inline TokenAmount pow10(unsigned e)
{
    TokenAmount v(1);
    for (unsigned i = 0; i < e; ++i)
        v *= 10;
    return v;
}

inline TokenAmount log_uniform(CounterRng &rng, double lo, double hi)
{
    double e = lo + rng.uniform() * (hi - lo);
    double whole = std::floor(e);
    // 15 significant digits from the mantissa, then an exact power-of-ten scale.
    auto mantissa = static_cast<std::uint64_t>(std::pow(10.0, e - whole) * 1e15);
    auto exponent = static_cast<int>(whole) - 15;
    TokenAmount v = exponent >= 0 ? TokenAmount(mantissa) * pow10(static_cast<unsigned>(exponent))
                                  : TokenAmount(mantissa) / pow10(static_cast<unsigned>(-exponent));
    return v == 0 ? TokenAmount(1) : v;
}

/// Protocol state evolved alongside the generated ledger.
class SyntheticPool {
public:
    SyntheticPool(double reward_rate) : reward_ppb_(static_cast<std::uint64_t>(std::llround(reward_rate * 1e9))) {}

    void mint_shares(const TokenAmount &shares)
    {
        TokenAmount tokens = state_.total_shares == 0 || total_pooled_ether(state_) == 0
                                 ? shares
                                 : mul_div_floor(shares, total_pooled_ether(state_), state_.total_shares);
        state_.total_shares += shares;
        state_.buffered_ether += tokens == 0 ? TokenAmount(1) : tokens;
        if (state_.buffered_ether >= kValidatorDeposit) {
            auto count = TokenAmount(state_.buffered_ether / kValidatorDeposit);
            state_.deposited_validators += count.convert_to<std::uint64_t>();
            state_.buffered_ether -= count * kValidatorDeposit;
        }
        dirty_ = true;
    }

    void rebase()
    {
        TokenAmount activated = TokenAmount(state_.deposited_validators - state_.beacon_validators) * kValidatorDeposit;
        state_.beacon_validators = state_.deposited_validators;
        state_.beacon_balance += activated;
        state_.beacon_balance += state_.beacon_balance * reward_ppb_ / 1000000000u;
        dirty_ = true;
    }

    void snapshot(BlockHeight b, std::vector<LidoStateSnapshot> &out)
    {
        if (!dirty_)
            return;
        state_.block = b;
        if (!out.empty() && out.back().block == b)
            out.back() = state_;
        else
            out.push_back(state_);
        dirty_ = false;
    }

private:
    LidoStateSnapshot state_;
    std::uint64_t reward_ppb_;
    bool dirty_ = true;
};

} // namespace detail

/// Deterministic synthetic share ledger plus a consistent state series.
/// Spends never exceed the sender's balance.
inline GeneratedLedger generate(const GeneratorConfig &config)
{
    config.validate();
    CounterRng rng(config.seed);
    GeneratedLedger out;

    std::vector<BlockHeight> blocks(config.transfers);
    for (auto &b : blocks)
        b = config.start_block + rng.below(config.block_span + 1);
    std::sort(blocks.begin(), blocks.end());

    std::vector<AccountId> ids(config.accounts);
    for (std::size_t i = 0; i < config.accounts; ++i)
        ids[i] = AccountId::synthetic(i);
    std::vector<TokenAmount> balance(config.accounts);
    std::vector<std::size_t> funded;               // account indices with balance > 0
    std::vector<std::size_t> slot(config.accounts, SIZE_MAX); // position in `funded`
    auto fund = [&](std::size_t i) {
        if (slot[i] == SIZE_MAX) {
            slot[i] = funded.size();
            funded.push_back(i);
        }
    };
    auto defund = [&](std::size_t i) {
        std::size_t pos = slot[i];
        funded[pos] = funded.back();
        slot[funded[pos]] = pos;
        funded.pop_back();
        slot[i] = SIZE_MAX;
    };
    // not_this == accounts means any account may receive.
    auto pick_recipient = [&](std::size_t not_this) {
        if (config.whale_fraction > 0 && not_this != 0 && rng.chance(config.whale_fraction))
            return std::size_t{0};
        if (not_this >= config.accounts)
            return static_cast<std::size_t>(rng.below(config.accounts));
        std::size_t r = rng.below(config.accounts - 1);
        return r >= not_this ? r + 1 : r;
    };

    detail::SyntheticPool pool(config.reward_rate);
    std::vector<LidoStateSnapshot> snaps;
    BlockHeight next_rebase = config.start_block + config.rebase_period;
    pool.snapshot(config.start_block > 0 ? config.start_block - 1 : 0, snaps);
    auto rebase_until = [&](BlockHeight b) {
        while (next_rebase <= b) {
            pool.rebase();
            if (next_rebase < b)
                pool.snapshot(next_rebase, snaps);
            next_rebase += config.rebase_period;
        }
    };

    std::uint64_t log_index = 0;
    for (std::size_t k = 0; k < config.transfers; ++k) {
        BlockHeight b = blocks[k];
        if (k == 0 || blocks[k - 1] != b) {
            if (k > 0)
                pool.snapshot(blocks[k - 1], snaps);
            rebase_until(b);
            log_index = 0;
        }
        TransferRecord r;
        r.block = b;
        r.log_index = log_index++;
        r.denomination = Denomination::Shares;
        if (funded.empty() || rng.chance(config.mint_fraction)) {
            std::size_t to = pick_recipient(config.accounts);
            r.from = AccountId::zero();
            r.to = ids[to];
            r.value = detail::log_uniform(rng, config.value_log10_min, config.value_log10_max);
            balance[to] += r.value;
            fund(to);
            pool.mint_shares(r.value);
            out.total_minted += r.value;
        } else {
            std::size_t from = config.whale_fraction > 0 && slot[0] != SIZE_MAX && rng.chance(config.whale_fraction)
                                   ? 0
                                   : funded[rng.below(funded.size())];
            r.from = ids[from];
            if (rng.chance(config.full_spend_fraction))
                r.value = balance[from];
            else
                r.value = std::min(balance[from],
                                   detail::log_uniform(rng, config.value_log10_min, config.value_log10_max));
            balance[from] -= r.value;
            if (balance[from] == 0)
                defund(from);
            if (rng.chance(config.burn_fraction)) {
                r.to = AccountId::burning();
            } else {
                std::size_t to = pick_recipient(from);
                r.to = ids[to];
                balance[to] += r.value;
                fund(to);
            }
        }
        out.transfers.push_back(std::move(r));
    }
    if (!blocks.empty())
        pool.snapshot(blocks.back(), snaps);
    rebase_until(config.start_block + config.block_span);
    pool.snapshot(config.start_block + config.block_span, snaps);
    out.states = StateSeries(std::move(snaps));
    return out;
}

/// Token-denominated view of a share ledger. Each value becomes the smallest
/// token amount that converts back to at least its share value at that
/// block, the way a token transfer moves shares; while shares do not exceed
/// pooled ether the round trip is exact.
inline TransferLedger to_token_ledger(std::span<const TransferRecord> shares, const StateSeries &states)
{
    TransferLedger out;
    out.reserve(shares.size());
    for (const auto &r : shares) {
        TransferRecord t = r;
        const auto &s = states.lookup(r.block);
        t.value = shares_to_tokens(r.value, s);
        while (tokens_to_shares(t.value, s) < r.value)
            ++t.value;
        t.denomination = Denomination::Tokens;
        out.push_back(std::move(t));
    }
    return out;
}

} // namespace lstvel::synth
