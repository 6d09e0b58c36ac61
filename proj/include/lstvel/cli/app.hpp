#pragma once

#include "../analytics/balances.hpp"
#include "../analytics/decompose.hpp"
#include "../io/fetch.hpp"
#include "../io/ledger_csv.hpp"
#include "../io/series_csv.hpp"
#include "../shares/reconstruct.hpp"
#include "../shares/supply.hpp"
#include "../synth/generator.hpp"
#include "../synth/selfcheck.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace lstvel::cli {

enum class TokenKind { StethTokens, StethShares, Wsteth };

/// Every tunable of a run. Subcommands bind the subset they use.
struct RunConfig {
    // inputs
    std::string transfers;
    std::string native_shares;
    std::string states;
    std::string categories;
    std::string labels;
    std::string time_index;
    std::vector<std::string> columns; // canonical=actual
    std::string token_kind = "steth-tokens";

    // schedule
    BlockHeight start = 0;
    BlockHeight end = 0;
    BlockHeight stride = kBlocksPerWeek;
    BlockHeight window = 0;
    BlockHeight window_stride = 0;

    // velocity
    std::string scope = "global";
    std::vector<std::string> accounts;
    std::vector<std::string> exclude;
    std::size_t shards = 1;

    // balances and smoothing
    double smooth_days = 0;
    BlockHeight anchor_block = 0;
    std::int64_t anchor_timestamp = 0;
    std::int64_t seconds_per_block = kDefaultSecondsPerBlock;
    std::size_t top = 0;
    std::string wrapper = io::kWstethContract;

    // outputs
    std::string output;
    std::string assignment;
    std::string top_output;
    std::string out_dir;

    // fetchers
    std::string rpc_url;
    std::string fixture;
    std::string contract;
    std::string event = "Transfer";
    std::string topic;
    std::string checkpoint;
    BlockHeight from_block = 0;
    BlockHeight to_block = 0;
    BlockHeight page_size = 2000;
    std::size_t concurrency = 4;
    int max_attempts = 5;

    // synthetic data
    synth::GeneratorConfig generator;
    synth::SelfcheckOptions selfcheck;
};

namespace detail {

[[noreturn]] inline void config_error(const std::string &field, const std::string &what)
{
    throw Error(ErrorKind::InvalidConfig, field + ": " + what);
}

inline TokenKind token_kind(const RunConfig &c)
{
    if (c.token_kind == "steth-tokens")
        return TokenKind::StethTokens;
    if (c.token_kind == "steth-shares")
        return TokenKind::StethShares;
    if (c.token_kind == "wsteth")
        return TokenKind::Wsteth;
    config_error("token-kind", "expected steth-tokens, steth-shares or wsteth, got '" + c.token_kind + "'");
}

inline io::HeaderMap::Mapping column_mapping(const RunConfig &c)
{
    io::HeaderMap::Mapping m;
    for (const auto &spec : c.columns) {
        auto eq = spec.find('=');
        if (eq == std::string::npos || eq == 0 || eq + 1 == spec.size())
            config_error("column", "expected canonical=actual, got '" + spec + "'");
        m[spec.substr(0, eq)] = spec.substr(eq + 1);
    }
    return m;
}

inline AccountId parse_account(const std::string &field, const std::string &text)
{
    try {
        return AccountId::parse(text);
    } catch (const Error &e) {
        config_error(field, e.message());
    }
}

inline std::vector<AccountId> parse_accounts(const std::string &field, const std::vector<std::string> &texts)
{
    std::vector<AccountId> out;
    for (const auto &t : texts)
        out.push_back(parse_account(field, t));
    return out;
}

inline void require_file(const std::string &field, const std::string &path)
{
    if (path.empty())
        config_error(field, "required");
    if (!std::filesystem::exists(path))
        config_error(field, "no such file '" + path + "'");
}

inline void optional_file(const std::string &field, const std::string &path)
{
    if (!path.empty())
        require_file(field, path);
}

inline void validate_schedule(const RunConfig &c, const CLI::App &cmd)
{
    if (c.stride == 0)
        config_error("stride", "must be positive");
    if (cmd.count("--start") && cmd.count("--end") && c.end < c.start)
        config_error("end", "precedes start");
}

inline void validate_smoothing(const RunConfig &c)
{
    if (c.smooth_days < 0)
        config_error("smooth-days", "must not be negative");
    if (c.seconds_per_block <= 0)
        config_error("seconds-per-block", "must be positive");
    optional_file("time-index", c.time_index);
}

/// Loads the configured transfer input as the ledger replayed for velocity
/// and balances: share-denominated for stETH, raw for wstETH.
inline TransferLedger replay_ledger(const RunConfig &c)
{
    auto mapping = column_mapping(c);
    switch (token_kind(c)) {
    case TokenKind::StethShares:
        return io::load_transfers(c.transfers, Denomination::Shares, mapping);
    case TokenKind::Wsteth:
        return io::load_transfers(c.transfers, Denomination::Tokens, mapping);
    case TokenKind::StethTokens:
        break;
    }
    auto tokens = io::load_transfers(c.transfers, Denomination::Tokens, mapping);
    TransferLedger natives;
    if (!c.native_shares.empty())
        natives = io::load_transfers(c.native_shares, Denomination::Shares, mapping);
    auto states = io::load_states(c.states);
    return reconstruct(tokens, natives, states, {c.shards}).transfers;
}

inline void validate_ledger_inputs(const RunConfig &c)
{
    auto kind = token_kind(c);
    require_file("transfers", c.transfers);
    optional_file("native-shares", c.native_shares);
    if (kind == TokenKind::StethTokens)
        require_file("states", c.states);
    else
        optional_file("states", c.states);
    (void)column_mapping(c);
}

inline std::vector<BlockHeight> schedule_for(const RunConfig &c, const CLI::App &cmd,
                                             std::span<const TransferRecord> ledger)
{
    if (ledger.empty() && (!cmd.count("--start") || !cmd.count("--end")))
        return {};
    BlockHeight start = cmd.count("--start") ? c.start : ledger.front().block;
    BlockHeight end = cmd.count("--end") ? c.end : ledger.back().block;
    return make_schedule(start, end, c.stride);
}

inline SmoothingOptions smoothing_for(const RunConfig &c)
{
    SmoothingOptions s;
    s.window_days = c.smooth_days;
    if (!c.time_index.empty())
        s.time_index = io::load_time_index(c.time_index);
    else
        s.time_index = BlockTimeIndex::affine(c.anchor_block, c.anchor_timestamp, c.seconds_per_block);
    return s;
}

inline void emit(const std::string &path, const std::string &content)
{
    if (path.empty() || path == "-") {
        std::cout << content;
        std::cout.flush();
    } else {
        io::write_atomically(path, content);
    }
}

inline std::map<AccountId, std::string> labels_for(const RunConfig &c)
{
    return c.labels.empty() ? io::default_labels() : io::load_labels(c.labels);
}

inline std::unique_ptr<io::RpcTransport> transport_for(const RunConfig &c)
{
    if (!c.fixture.empty())
        return io::FixtureNode::from_file(c.fixture);
    return std::make_unique<io::HttpRpcTransport>(io::resolve_endpoint(c.rpc_url));
}

inline void validate_fetch(const RunConfig &c)
{
    if (c.output.empty())
        config_error("output", "required");
    if (c.to_block < c.from_block)
        config_error("to-block", "precedes from-block");
    if (c.concurrency == 0)
        config_error("concurrency", "must be positive");
    if (c.max_attempts < 1)
        config_error("max-attempts", "must be at least 1");
    optional_file("fixture", c.fixture);
    if (c.fixture.empty())
        (void)io::resolve_endpoint(c.rpc_url);
    if (!c.checkpoint.empty() && io::read_checkpoint(c.checkpoint) && !std::filesystem::exists(c.output))
        config_error("output", "checkpoint " + c.checkpoint + " exists but the output file is missing");
}

/// Opens the fetch output for appending, truncating rows past the checkpoint
/// when resuming or writing a fresh header otherwise.
inline std::ofstream open_fetch_output(const RunConfig &c, std::string_view header)
{
    auto cp = io::read_checkpoint(c.checkpoint);
    if (cp) {
        io::truncate_rows_after(c.output, *cp);
    } else {
        io::write_atomically(c.output, std::string(header) + "\n");
    }
    std::ofstream out(c.output, std::ios::app | std::ios::binary);
    if (!out)
        throw Error(ErrorKind::Io, "cannot append to " + c.output);
    return out;
}

// ---------------------------------------------------------------------------
// Commands

inline void cmd_reconstruct(const RunConfig &c)
{
    require_file("transfers", c.transfers);
    require_file("states", c.states);
    optional_file("native-shares", c.native_shares);
    if (c.shards == 0)
        config_error("shards", "must be positive");
    auto mapping = column_mapping(c);
    auto tokens = io::load_transfers(c.transfers, Denomination::Tokens, mapping);
    TransferLedger natives;
    if (!c.native_shares.empty())
        natives = io::load_transfers(c.native_shares, Denomination::Shares, mapping);
    auto ledger = reconstruct(tokens, natives, io::load_states(c.states), {c.shards});
    std::ostringstream out;
    io::write_share_ledger(out, ledger);
    emit(c.output, out.str());
}

inline void cmd_velocity(const RunConfig &c, const CLI::App &cmd)
{
    validate_ledger_inputs(c);
    validate_schedule(c, cmd);
    if (c.shards == 0)
        config_error("shards", "must be positive");
    SampleRequest request;
    if (c.scope == "global")
        request.scope = SampleScope::Global;
    else if (c.scope == "accounts")
        request.scope = SampleScope::Accounts;
    else if (c.scope == "both")
        request.scope = SampleScope::Both;
    else
        config_error("scope", "expected global, accounts or both, got '" + c.scope + "'");
    request.accounts = parse_accounts("account", c.accounts);
    ReplayOptions options{c.shards, parse_accounts("exclude", c.exclude)};

    auto ledger = replay_ledger(c);
    auto schedule = schedule_for(c, cmd, ledger);
    auto samples = sample_series(ledger, schedule, request, options);
    if (c.window > 0)
        samples = average_windows(samples, {c.window, c.window_stride, schedule.empty() ? 0 : schedule.front()});
    std::ostringstream out;
    io::write_velocity_samples(out, samples);
    emit(c.output, out.str());
}

inline void cmd_decompose(const RunConfig &c, const CLI::App &cmd)
{
    validate_ledger_inputs(c);
    validate_schedule(c, cmd);
    optional_file("categories", c.categories);
    if (c.shards == 0)
        config_error("shards", "must be positive");
    auto table = c.categories.empty() ? CategoryTable::standard() : io::load_category_table(c.categories);
    ReplayOptions options{c.shards, parse_accounts("exclude", c.exclude)};

    auto ledger = replay_ledger(c);
    // Categories are by tokens received; share ledgers convert when states exist.
    ReceivedTotals received;
    auto kind = token_kind(c);
    if (kind == TokenKind::StethTokens)
        received = received_totals(io::load_transfers(c.transfers, Denomination::Tokens, column_mapping(c)));
    else if (kind == TokenKind::StethShares && !c.states.empty())
        received = received_totals(synth::to_token_ledger(ledger, io::load_states(c.states)));
    else
        received = received_totals(ledger);

    auto schedule = schedule_for(c, cmd, ledger);
    auto shares = velocity_shares_by_category(ledger, schedule, table, received, options);
    std::ostringstream out;
    io::write_category_shares(out, shares);
    emit(c.output, out.str());
    if (!c.assignment.empty()) {
        std::ostringstream a;
        io::write_category_assignment(a, received, table);
        emit(c.assignment, a.str());
    }
}

inline void cmd_balances(const RunConfig &c, const CLI::App &cmd)
{
    validate_ledger_inputs(c);
    validate_schedule(c, cmd);
    validate_smoothing(c);
    optional_file("labels", c.labels);
    auto labels = labels_for(c);
    std::vector<AccountId> accounts = parse_accounts("account", c.accounts);
    if (accounts.empty())
        for (const auto &[a, name] : labels)
            accounts.push_back(a);
    auto excluded = parse_accounts("exclude", c.exclude);

    auto ledger = replay_ledger(c);
    auto schedule = schedule_for(c, cmd, ledger);
    auto series = balance_series(ledger, accounts, schedule, smoothing_for(c));
    std::ostringstream out;
    io::write_balance_series(out, series, labels);
    emit(c.output, out.str());
    if (c.top > 0) {
        BlockHeight at = schedule.empty() ? (ledger.empty() ? 0 : ledger.back().block) : schedule.back();
        std::ostringstream t;
        io::write_top_holders(t, at, top_holders(ledger, at, c.top, excluded), labels);
        emit(c.top_output, t.str());
    }
}

inline void cmd_wrapped_share(const RunConfig &c, const CLI::App &cmd)
{
    validate_ledger_inputs(c);
    validate_schedule(c, cmd);
    validate_smoothing(c);
    auto wrapper = parse_account("wrapper", c.wrapper);
    auto ledger = replay_ledger(c);
    auto schedule = schedule_for(c, cmd, ledger);
    auto points = wrapped_share_series(ledger, wrapper, schedule, smoothing_for(c));
    std::ostringstream out;
    io::write_wrapped_share(out, points);
    emit(c.output, out.str());
}

inline void cmd_supply(const RunConfig &c, const CLI::App &cmd)
{
    require_file("states", c.states);
    validate_schedule(c, cmd);
    auto states = io::load_states(c.states);
    std::vector<BlockHeight> schedule;
    if (!states.empty() || (cmd.count("--start") && cmd.count("--end"))) {
        BlockHeight start = cmd.count("--start") ? c.start : states.snapshots().front().block;
        BlockHeight end = cmd.count("--end") ? c.end : states.snapshots().back().block;
        schedule = make_schedule(start, end, c.stride);
    }
    std::ostringstream out;
    io::write_supply(out, supply_series(states, schedule));
    emit(c.output, out.str());
}

inline void cmd_fetch_logs(const RunConfig &c)
{
    validate_fetch(c);
    if (c.page_size == 0)
        config_error("page-size", "must be positive");
    std::string topic = c.topic;
    Denomination denomination = c.event == "TransferShares" ? Denomination::Shares : Denomination::Tokens;
    if (topic.empty()) {
        auto registry = io::default_event_topics();
        auto it = registry.find(c.event);
        if (it == registry.end())
            config_error("event", "unknown event '" + c.event + "' (known: Transfer, TransferShares)");
        topic = it->second;
    }
    if (io::strip_0x(topic).size() != 64)
        config_error("topic", "expected a 32-byte hex topic hash");
    io::LogQuery query;
    query.contract = parse_account("contract", c.contract.empty() ? io::kStethContract : c.contract);
    query.topic0 = topic;
    query.denomination = denomination;
    query.from_block = c.from_block;
    query.to_block = c.to_block;
    query.page_size = c.page_size;
    query.concurrency = c.concurrency;
    io::FetchOptions options;
    options.checkpoint_path = c.checkpoint;
    options.retry.max_attempts = c.max_attempts;

    auto transport = transport_for(c);
    auto out = open_fetch_output(c, io::kTransferHeader);
    io::fetch_logs(
        *transport, query,
        [&](std::span<const TransferRecord> page, BlockHeight) {
            for (const auto &r : page) {
                io::write_transfer_row(out, r);
                out << '\n';
            }
            if (!out.flush())
                throw Error(ErrorKind::Io, "cannot write " + c.output);
        },
        options);
}

inline void cmd_fetch_state(const RunConfig &c)
{
    validate_fetch(c);
    if (c.stride == 0)
        config_error("stride", "must be positive");
    io::StateQuery query;
    query.contract = parse_account("contract", c.contract.empty() ? io::kStethContract : c.contract);
    query.from_block = c.from_block;
    query.to_block = c.to_block;
    query.stride = c.stride;
    query.concurrency = c.concurrency;
    io::FetchOptions options;
    options.checkpoint_path = c.checkpoint;
    options.retry.max_attempts = c.max_attempts;

    auto transport = transport_for(c);
    auto out = open_fetch_output(c, io::kStateHeader);
    io::fetch_state(
        *transport, query,
        [&](const LidoStateSnapshot &s) {
            io::write_state_row(out, s);
            if (!out.flush())
                throw Error(ErrorKind::Io, "cannot write " + c.output);
        },
        options);
}

inline bool cmd_selfcheck(const RunConfig &c)
{
    const auto &o = c.selfcheck;
    if (o.ledgers == 0)
        config_error("ledgers", "must be positive");
    if (o.accounts < 2)
        config_error("accounts", "must be at least 2");
    auto results = synth::run_selfcheck(o);
    std::ostringstream out;
    out << "seed,transfers,samples,max_relative_error,conserved,passed\n";
    bool ok = true;
    for (const auto &r : results) {
        out << r.seed << ',' << r.transfers << ',' << r.samples << ',' << r.max_relative_error << ','
            << (r.conserved ? "true" : "false") << ',' << (r.passed ? "true" : "false") << '\n';
        ok = ok && r.passed;
    }
    emit(c.output, out.str());
    return ok;
}

inline void cmd_generate(const RunConfig &c)
{
    if (c.out_dir.empty())
        config_error("out-dir", "required");
    const auto &g = c.generator;
    try {
        g.validate();
    } catch (const Error &e) {
        config_error("generator", e.message());
    }
    auto generated = synth::generate(g);
    std::filesystem::create_directories(c.out_dir);
    auto path = [&](const char *name) { return (std::filesystem::path(c.out_dir) / name).string(); };

    std::ostringstream shares, tokens, states, config;
    io::write_transfers(shares, generated.transfers);
    auto token_ledger = synth::to_token_ledger(generated.transfers, generated.states);
    io::write_transfers(tokens, token_ledger);
    io::write_states(states, generated.states);
    config << "rng = " << synth::CounterRng::kAlgorithm << "\n"
           << "seed = " << g.seed << "\n"
           << "accounts = " << g.accounts << "\n"
           << "transfers = " << g.transfers << "\n"
           << "start_block = " << g.start_block << "\n"
           << "block_span = " << g.block_span << "\n"
           << "mint_fraction = " << io::format_double(g.mint_fraction) << "\n"
           << "burn_fraction = " << io::format_double(g.burn_fraction) << "\n"
           << "value_log10_min = " << io::format_double(g.value_log10_min) << "\n"
           << "value_log10_max = " << io::format_double(g.value_log10_max) << "\n"
           << "whale_fraction = " << io::format_double(g.whale_fraction) << "\n"
           << "full_spend_fraction = " << io::format_double(g.full_spend_fraction) << "\n"
           << "reward_rate = " << io::format_double(g.reward_rate) << "\n"
           << "rebase_period = " << g.rebase_period << "\n"
           << "total_minted_shares = " << to_decimal(generated.total_minted) << "\n";
    io::write_atomically(path("shares.csv"), shares.str());
    io::write_atomically(path("tokens.csv"), tokens.str());
    io::write_atomically(path("states.csv"), states.str());
    io::write_atomically(path("generator.ini"), config.str());
}

inline void add_ledger_options(CLI::App &cmd, RunConfig &c)
{
    cmd.add_option("--transfers", c.transfers, "Transfer CSV (optionally .gz)");
    cmd.add_option("--token-kind", c.token_kind, "steth-tokens | steth-shares | wsteth")->capture_default_str();
    cmd.add_option("--native-shares", c.native_shares, "Native TransferShares CSV (steth-tokens only)");
    cmd.add_option("--states", c.states, "Protocol state CSV");
    cmd.add_option("--column", c.columns, "Column rename canonical=actual (repeatable)");
}

inline void add_schedule_options(CLI::App &cmd, RunConfig &c)
{
    cmd.add_option("--start", c.start, "First sample block (default: first ledger block)");
    cmd.add_option("--end", c.end, "Last sample block, always sampled (default: last ledger block)");
    cmd.add_option("--stride", c.stride, "Blocks between samples")->capture_default_str();
}

inline void add_smoothing_options(CLI::App &cmd, RunConfig &c)
{
    cmd.add_option("--smooth-days", c.smooth_days, "Trailing moving-average window in days (0: off)");
    cmd.add_option("--time-index", c.time_index, "block_number,timestamp CSV (default: affine clock)");
    cmd.add_option("--anchor-block", c.anchor_block, "Block of the affine clock anchor");
    cmd.add_option("--anchor-timestamp", c.anchor_timestamp, "Unix time of the anchor block");
    cmd.add_option("--seconds-per-block", c.seconds_per_block, "Affine clock rate")->capture_default_str();
}

inline void add_fetch_options(CLI::App &cmd, RunConfig &c)
{
    cmd.add_option("--rpc-url", c.rpc_url, "JSON-RPC endpoint (default: $ETH_RPC_URL)");
    cmd.add_option("--fixture", c.fixture, "Serve requests from a recorded JSON fixture instead of a node");
    cmd.add_option("--contract", c.contract, "Contract address (default: stETH)");
    cmd.add_option("--from-block", c.from_block, "First block")->required();
    cmd.add_option("--to-block", c.to_block, "Last block (inclusive)")->required();
    cmd.add_option("--concurrency", c.concurrency, "Concurrent requests")->capture_default_str();
    cmd.add_option("--checkpoint", c.checkpoint, "Checkpoint file for resuming");
    cmd.add_option("--max-attempts", c.max_attempts, "Attempts per request on transient errors")
        ->capture_default_str();
    cmd.add_option("-o,--output", c.output, "Output CSV")->required();
}

inline int exit_code(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::InvalidConfig:
    case ErrorKind::MissingTimeIndex:
        return 1;
    default:
        return 2;
    }
}

} // namespace detail

/// Entry point. Returns 0 on success, 1 on usage or configuration errors,
/// 2 on data errors; diagnostics go to `err` as one line.
inline int run(int argc, const char *const *argv, std::ostream &err = std::cerr)
{
    RunConfig c;
    CLI::App app{"Velocity and holdings analytics for liquid staking token transfer ledgers", "lstvel"};
    app.set_config("--config", "", "INI/TOML file of option values (sections per subcommand)");
    app.require_subcommand(1);

    auto *reconstruct_cmd = app.add_subcommand("reconstruct", "Convert token transfers into a share ledger");
    reconstruct_cmd->add_option("--transfers", c.transfers, "Token-denominated Transfer CSV");
    reconstruct_cmd->add_option("--native-shares", c.native_shares, "Native TransferShares CSV");
    reconstruct_cmd->add_option("--states", c.states, "Protocol state CSV");
    reconstruct_cmd->add_option("--column", c.columns, "Column rename canonical=actual (repeatable)");
    reconstruct_cmd->add_option("--shards", c.shards, "Concurrent conversion partitions")->capture_default_str();
    reconstruct_cmd->add_option("-o,--output", c.output, "Output CSV (default: stdout)");

    auto *velocity_cmd = app.add_subcommand("velocity", "Sample micro and global velocity");
    detail::add_ledger_options(*velocity_cmd, c);
    detail::add_schedule_options(*velocity_cmd, c);
    velocity_cmd->add_option("--scope", c.scope, "global | accounts | both")->capture_default_str();
    velocity_cmd->add_option("--account", c.accounts, "Restrict per-account samples (repeatable)");
    velocity_cmd->add_option("--exclude", c.exclude, "Leave an address out of the aggregates (repeatable)");
    velocity_cmd->add_option("--window", c.window, "Average samples over windows of this many blocks (0: off)");
    velocity_cmd->add_option("--window-stride", c.window_stride, "Blocks between window starts (0: window)");
    velocity_cmd->add_option("--shards", c.shards, "Replay shards")->capture_default_str();
    velocity_cmd->add_option("-o,--output", c.output, "Output CSV (default: stdout)");

    auto *decompose_cmd = app.add_subcommand("decompose", "Velocity share by holder category");
    detail::add_ledger_options(*decompose_cmd, c);
    detail::add_schedule_options(*decompose_cmd, c);
    decompose_cmd->add_option("--categories", c.categories, "Category table CSV (name,lower,upper)");
    decompose_cmd->add_option("--exclude", c.exclude, "Leave an address out of the aggregates (repeatable)");
    decompose_cmd->add_option("--assignment", c.assignment, "Also write address,category,total_received");
    decompose_cmd->add_option("--shards", c.shards, "Replay shards")->capture_default_str();
    decompose_cmd->add_option("-o,--output", c.output, "Output CSV (default: stdout)");

    auto *balances_cmd = app.add_subcommand("balances", "Balance series of labeled accounts and top holders");
    detail::add_ledger_options(*balances_cmd, c);
    detail::add_schedule_options(*balances_cmd, c);
    detail::add_smoothing_options(*balances_cmd, c);
    balances_cmd->add_option("--labels", c.labels, "address,label CSV (default: built-in protocol labels)");
    balances_cmd->add_option("--account", c.accounts, "Accounts to track (default: labeled ones)");
    balances_cmd->add_option("--top", c.top, "Also rank the N largest holders at the last sample");
    balances_cmd->add_option("--exclude", c.exclude, "Leave an address out of the ranking (repeatable)");
    balances_cmd->add_option("--top-output", c.top_output, "Top-holder CSV (default: stdout)");
    balances_cmd->add_option("-o,--output", c.output, "Output CSV (default: stdout)");

    auto *wrapped_cmd = app.add_subcommand("wrapped-share", "Fraction of supply held by the wrapper contract");
    detail::add_ledger_options(*wrapped_cmd, c);
    detail::add_schedule_options(*wrapped_cmd, c);
    detail::add_smoothing_options(*wrapped_cmd, c);
    wrapped_cmd->add_option("--wrapper", c.wrapper, "Wrapper address")->capture_default_str();
    wrapped_cmd->add_option("-o,--output", c.output, "Output CSV (default: stdout)");

    auto *supply_cmd = app.add_subcommand("supply", "Share supply, pooled ether and conversion rate");
    supply_cmd->add_option("--states", c.states, "Protocol state CSV");
    detail::add_schedule_options(*supply_cmd, c);
    supply_cmd->add_option("-o,--output", c.output, "Output CSV (default: stdout)");

    auto *logs_cmd = app.add_subcommand("fetch-logs", "Fetch Transfer or TransferShares logs");
    detail::add_fetch_options(*logs_cmd, c);
    logs_cmd->add_option("--event", c.event, "Transfer | TransferShares")->capture_default_str();
    logs_cmd->add_option("--topic", c.topic, "Explicit topic0 hash (overrides --event)");
    logs_cmd->add_option("--page-size", c.page_size, "Blocks per log query")->capture_default_str();

    auto *state_cmd = app.add_subcommand("fetch-state", "Fetch protocol state at sampled blocks");
    detail::add_fetch_options(*state_cmd, c);
    state_cmd->add_option("--stride", c.stride, "Blocks between samples (endpoints included)")
        ->capture_default_str();

    auto *selfcheck_cmd = app.add_subcommand("selfcheck", "Compare the engine with the oracle on generated ledgers");
    selfcheck_cmd->add_option("--seed", c.selfcheck.seed, "Seed of the first ledger")->capture_default_str();
    selfcheck_cmd->add_option("--ledgers", c.selfcheck.ledgers, "Ledgers to check")->capture_default_str();
    selfcheck_cmd->add_option("--accounts", c.selfcheck.accounts, "Accounts per ledger")->capture_default_str();
    selfcheck_cmd->add_option("--transfers", c.selfcheck.transfers, "Transfers per ledger")->capture_default_str();
    selfcheck_cmd->add_option("--samples", c.selfcheck.samples, "Sample blocks per ledger")->capture_default_str();
    selfcheck_cmd->add_option("-o,--output", c.output, "Output CSV (default: stdout)");

    auto *generate_cmd = app.add_subcommand("generate", "Write a synthetic ledger and state series");
    auto &g = c.generator;
    generate_cmd->add_option("--seed", g.seed, "Generator seed")->capture_default_str();
    generate_cmd->add_option("--accounts", g.accounts, "Accounts")->capture_default_str();
    generate_cmd->add_option("--transfers", g.transfers, "Records")->capture_default_str();
    generate_cmd->add_option("--start-block", g.start_block, "First block")->capture_default_str();
    generate_cmd->add_option("--block-span", g.block_span, "Blocks covered")->capture_default_str();
    generate_cmd->add_option("--mint-fraction", g.mint_fraction, "Probability of a mint")->capture_default_str();
    generate_cmd->add_option("--burn-fraction", g.burn_fraction, "Probability a spend burns")
        ->capture_default_str();
    generate_cmd->add_option("--value-log10-min", g.value_log10_min, "Smallest amount, log10 base units")
        ->capture_default_str();
    generate_cmd->add_option("--value-log10-max", g.value_log10_max, "Largest amount, log10 base units")
        ->capture_default_str();
    generate_cmd->add_option("--whale-fraction", g.whale_fraction, "Turnover routed through account 0")
        ->capture_default_str();
    generate_cmd->add_option("--full-spend-fraction", g.full_spend_fraction, "Probability a spend empties the sender")
        ->capture_default_str();
    generate_cmd->add_option("--reward-rate", g.reward_rate, "Reward per rebase")->capture_default_str();
    generate_cmd->add_option("--rebase-period", g.rebase_period, "Blocks between rebases")->capture_default_str();
    generate_cmd->add_option("--out-dir", c.out_dir, "Directory for shares.csv, tokens.csv, states.csv");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &) {
        std::cout << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp &) {
        std::cout << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError &e) {
        const CLI::App *sub = nullptr;
        for (const auto *s : app.get_subcommands())
            sub = s;
        err << "lstvel: " << e.what() << '\n' << (sub ? sub->help() : app.help());
        return 1;
    }

    try {
        if (*reconstruct_cmd)
            detail::cmd_reconstruct(c);
        else if (*velocity_cmd)
            detail::cmd_velocity(c, *velocity_cmd);
        else if (*decompose_cmd)
            detail::cmd_decompose(c, *decompose_cmd);
        else if (*balances_cmd)
            detail::cmd_balances(c, *balances_cmd);
        else if (*wrapped_cmd)
            detail::cmd_wrapped_share(c, *wrapped_cmd);
        else if (*supply_cmd)
            detail::cmd_supply(c, *supply_cmd);
        else if (*logs_cmd)
            detail::cmd_fetch_logs(c);
        else if (*state_cmd)
            detail::cmd_fetch_state(c);
        else if (*selfcheck_cmd)
            return detail::cmd_selfcheck(c) ? 0 : 2;
        else if (*generate_cmd)
            detail::cmd_generate(c);
    } catch (const Error &e) {
        std::string msg = e.what();
        std::replace(msg.begin(), msg.end(), '\n', ' ');
        err << "lstvel: " << msg << '\n';
        return detail::exit_code(e.kind());
    } catch (const std::exception &e) {
        std::string msg = e.what();
        std::replace(msg.begin(), msg.end(), '\n', ' ');
        err << "lstvel: " << msg << '\n';
        return 2;
    }
    return 0;
}

} // namespace lstvel::cli
