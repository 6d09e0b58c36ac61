#pragma once

#include "../velocity/sampling.hpp"
#include "generator.hpp"
#include "oracle.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace lstvel::synth {

struct SelfcheckOptions {
    std::uint64_t seed = 1;
    std::size_t ledgers = 20;
    std::size_t accounts = 20;
    std::size_t transfers = 500;
    std::size_t samples = 8; // sample blocks per ledger, spread over the span
    double tolerance = 1e-12;
};

struct SelfcheckResult {
    std::uint64_t seed = 0;
    std::size_t transfers = 0;
    std::size_t samples = 0;       // velocity values compared
    double max_relative_error = 0; // engine vs oracle
    bool conserved = true;         // sum of balances == minted at every sample block
    bool passed = true;
};

inline double relative_error(double got, double want)
{
    if (got == want)
        return 0;
    return std::abs(got - want) / std::max(std::abs(want), std::numeric_limits<double>::min());
}

/// Evenly spaced sample blocks covering [first, last] of the ledger.
inline std::vector<BlockHeight> spread_schedule(std::span<const TransferRecord> ledger, std::size_t samples)
{
    if (ledger.empty() || samples == 0)
        return {};
    BlockHeight first = ledger.front().block, last = ledger.back().block;
    std::vector<BlockHeight> out;
    for (std::size_t i = 0; i < samples; ++i) {
        BlockHeight b = first + (last - first) * (i + 1) / samples;
        if (out.empty() || b > out.back())
            out.push_back(b);
    }
    return out;
}

/// Compares the replay engine against the brute-force oracle on one ledger.
inline SelfcheckResult check_ledger(std::span<const TransferRecord> ledger, std::span<const BlockHeight> schedule,
                                    double tolerance)
{
    SelfcheckResult res;
    res.transfers = ledger.size();
    SampleRequest request{SampleScope::Both, {}};
    ReplayEngine engine;
    std::size_t cursor = 0;
    for (BlockHeight t : schedule) {
        auto samples = sample_series(ledger.subspan(cursor), std::span(&t, 1), request, engine);
        while (cursor < ledger.size() && ledger[cursor].block <= t)
            ++cursor;
        for (const auto &s : samples) {
            double want = s.is_global() ? oracle::global_velocity(ledger, t) : oracle::velocity(ledger, *s.account, t);
            res.max_relative_error = std::max(res.max_relative_error, relative_error(s.velocity, want));
            ++res.samples;
        }
        oracle::BigInt held = 0;
        for (const auto &[who, v] : oracle::balances(ledger, t))
            held += v;
        if (held != oracle::minted(ledger, t) || oracle::BigInt(engine.total_balance()) != held)
            res.conserved = false;
    }
    res.passed = res.conserved && res.max_relative_error <= tolerance;
    return res;
}

/// Generates `ledgers` synthetic ledgers with consecutive seeds and checks
/// each against the oracle.
inline std::vector<SelfcheckResult> run_selfcheck(const SelfcheckOptions &options)
{
    std::vector<SelfcheckResult> out;
    for (std::size_t i = 0; i < options.ledgers; ++i) {
        GeneratorConfig config;
        config.seed = options.seed + i;
        config.accounts = options.accounts;
        config.transfers = options.transfers;
        auto generated = generate(config);
        auto schedule = spread_schedule(generated.transfers, options.samples);
        auto res = check_ledger(generated.transfers, schedule, options.tolerance);
        res.seed = config.seed;
        out.push_back(res);
    }
    return out;
}

} // namespace lstvel::synth
