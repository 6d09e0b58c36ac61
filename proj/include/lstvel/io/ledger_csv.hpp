#pragma once

#include "../analytics/categories.hpp"
#include "../analytics/time_index.hpp"
#include "../shares/reconstruct.hpp"
#include "../shares/state_series.hpp"
#include "csv.hpp"

#include <map>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace lstvel::io {

inline constexpr std::string_view kTransferHeader = "block_number,log_index,tx_hash,from_address,to_address,value";
inline constexpr std::string_view kStateHeader =
    "block_number,deposited_validators,beacon_validators,beacon_balance,buffered_ether,total_shares";

namespace detail {

template <typename F>
void with_location(const LineReader &reader, F &&f)
{
    try {
        f();
    } catch (const Error &e) {
        if (e.kind() == ErrorKind::ParseError)
            throw Error(ErrorKind::ParseError,
                        reader.path() + ":" + std::to_string(reader.line_number()) + ": " + e.message());
        throw;
    }
}

inline std::string require_header(LineReader &reader)
{
    std::string header;
    if (!reader.next(header))
        throw Error(ErrorKind::ParseError, reader.path() + ":1: missing header row");
    return header;
}

} // namespace detail

/// Loads a transfer CSV, sorted by (block, log_index). Columns are found by
/// header name (optionally renamed through `mapping`); tx_hash is optional
/// and extra columns are ignored.
inline TransferLedger load_transfers(const std::string &path, Denomination denomination,
                                     const HeaderMap::Mapping &mapping = {})
{
    LineReader reader(path);
    HeaderMap header(detail::require_header(reader), mapping);
    const auto c_block = header.require("block_number", path);
    const auto c_log = header.require("log_index", path);
    const auto c_from = header.require("from_address", path);
    const auto c_to = header.require("to_address", path);
    const auto c_value = header.require("value", path);
    const auto c_tx = header.find("tx_hash");
    const std::size_t width = std::max({c_block, c_log, c_from, c_to, c_value, c_tx.value_or(0)}) + 1;

    TransferLedger out;
    std::string line;
    std::vector<std::string_view> f;
    while (reader.next(line)) {
        if (line.empty())
            continue;
        detail::with_location(reader, [&] {
            split_fields(line, f);
            if (f.size() < width)
                throw Error(ErrorKind::ParseError, "expected at least " + std::to_string(width) + " fields, got " +
                                                       std::to_string(f.size()));
            TransferRecord r;
            r.block = parse_int<BlockHeight>(f[c_block], "block_number");
            r.log_index = parse_int<std::uint64_t>(f[c_log], "log_index");
            r.from = AccountId::parse(f[c_from]);
            r.to = AccountId::parse(f[c_to]);
            r.value = parse_amount(f[c_value]);
            r.denomination = denomination;
            if (c_tx)
                r.tx_hash = std::string(f[*c_tx]);
            out.push_back(std::move(r));
        });
    }
    sort_records(out);
    for (std::size_t i = 1; i < out.size(); ++i)
        if (out[i - 1].key() == out[i].key())
            throw Error(ErrorKind::DuplicateKey, path + ": duplicate (block_number, log_index) = (" +
                                                     std::to_string(out[i].block) + ", " +
                                                     std::to_string(out[i].log_index) + ")");
    return out;
}

inline void write_transfer_row(std::ostream &out, const TransferRecord &r)
{
    out << r.block << ',' << r.log_index << ',' << r.tx_hash << ',' << r.from.to_string() << ','
        << r.to.to_string() << ',' << to_decimal(r.value);
}

inline void write_transfers(std::ostream &out, std::span<const TransferRecord> records)
{
    out << kTransferHeader << '\n';
    for (const auto &r : records) {
        write_transfer_row(out, r);
        out << '\n';
    }
}

/// Share ledger with a trailing provenance column (native | reconstructed).
inline void write_share_ledger(std::ostream &out, const ShareLedger &ledger)
{
    out << kTransferHeader << ",provenance\n";
    for (std::size_t i = 0; i < ledger.size(); ++i) {
        write_transfer_row(out, ledger.transfers[i]);
        out << ',' << to_string(ledger.provenance[i]) << '\n';
    }
}

/// Loads protocol snapshots; a block listed twice keeps its last row.
inline StateSeries load_states(const std::string &path, const HeaderMap::Mapping &mapping = {})
{
    LineReader reader(path);
    HeaderMap header(detail::require_header(reader), mapping);
    const std::size_t cols[] = {
        header.require("block_number", path),      header.require("deposited_validators", path),
        header.require("beacon_validators", path), header.require("beacon_balance", path),
        header.require("buffered_ether", path),    header.require("total_shares", path),
    };
    const std::size_t width = *std::max_element(std::begin(cols), std::end(cols)) + 1;
    std::map<BlockHeight, LidoStateSnapshot> rows;
    std::string line;
    std::vector<std::string_view> f;
    while (reader.next(line)) {
        if (line.empty())
            continue;
        detail::with_location(reader, [&] {
            split_fields(line, f);
            if (f.size() < width)
                throw Error(ErrorKind::ParseError, "expected at least " + std::to_string(width) + " fields");
            LidoStateSnapshot s;
            s.block = parse_int<BlockHeight>(f[cols[0]], "block_number");
            s.deposited_validators = parse_int<std::uint64_t>(f[cols[1]], "deposited_validators");
            s.beacon_validators = parse_int<std::uint64_t>(f[cols[2]], "beacon_validators");
            s.beacon_balance = parse_amount(f[cols[3]]);
            s.buffered_ether = parse_amount(f[cols[4]]);
            s.total_shares = parse_amount(f[cols[5]]);
            rows[s.block] = s;
        });
    }
    std::vector<LidoStateSnapshot> snaps;
    snaps.reserve(rows.size());
    for (auto &[b, s] : rows)
        snaps.push_back(std::move(s));
    return StateSeries(std::move(snaps));
}

inline void write_state_row(std::ostream &out, const LidoStateSnapshot &s)
{
    out << s.block << ',' << s.deposited_validators << ',' << s.beacon_validators << ','
        << to_decimal(s.beacon_balance) << ',' << to_decimal(s.buffered_ether) << ',' << to_decimal(s.total_shares)
        << '\n';
}

inline void write_states(std::ostream &out, const StateSeries &states)
{
    out << kStateHeader << '\n';
    for (const auto &s : states.snapshots())
        write_state_row(out, s);
}

/// address,label rows.
inline std::map<AccountId, std::string> load_labels(const std::string &path)
{
    LineReader reader(path);
    HeaderMap header(detail::require_header(reader));
    const auto c_addr = header.require("address", path);
    const auto c_label = header.find("label");
    std::map<AccountId, std::string> out;
    std::string line;
    std::vector<std::string_view> f;
    while (reader.next(line)) {
        if (line.empty())
            continue;
        detail::with_location(reader, [&] {
            split_fields(line, f);
            if (f.size() <= c_addr)
                throw Error(ErrorKind::ParseError, "missing address field");
            out[AccountId::parse(f[c_addr])] = c_label && *c_label < f.size() ? std::string(f[*c_label]) : "";
        });
    }
    return out;
}

/// Protocol contracts that dominate wstETH holdings outside exchanges.
inline std::map<AccountId, std::string> default_labels()
{
    return {
        {AccountId::parse("0x0b925ed163218f6662a35e0f0371ac234f9e9371"), "Aave Ethereum wstETH"},
        {AccountId::parse("0x12b54025c112aa61face2cdb7118740875a566e9"), "Spark: wstETH"},
        {AccountId::parse("0x248ccbf4864221fc0e840f29bb042ad5bfc89b5c"), "SkyMoney: MCD Join wstETH 2"},
        {AccountId::parse("0x10cd5fbe1b404b7e19ef964b63939907bdaf42e2"), "SkyMoney: MCD Join wstETH"},
        {AccountId::parse("0xba12222222228d8ba445958a75a0704d566bf2c8"), "Balancer Vault"},
    };
}

/// name,lower,upper in whole tokens (decimals allowed); an empty upper means
/// unbounded.
inline CategoryTable load_category_table(const std::string &path)
{
    LineReader reader(path);
    HeaderMap header(detail::require_header(reader));
    const auto c_name = header.require("name", path);
    const auto c_lower = header.require("lower", path);
    const auto c_upper = header.require("upper", path);
    std::vector<CategoryBand> bands;
    std::string line;
    std::vector<std::string_view> f;
    while (reader.next(line)) {
        if (line.empty())
            continue;
        detail::with_location(reader, [&] {
            split_fields(line, f);
            if (f.size() <= std::max({c_name, c_lower, c_upper}))
                throw Error(ErrorKind::ParseError, "category row needs name, lower, upper");
            CategoryBand b;
            b.name = std::string(f[c_name]);
            b.lower = parse_token_decimal(f[c_lower]);
            if (!f[c_upper].empty())
                b.upper = parse_token_decimal(f[c_upper]);
            bands.push_back(std::move(b));
        });
    }
    return CategoryTable(std::move(bands));
}

/// block_number,timestamp rows.
inline BlockTimeIndex load_time_index(const std::string &path)
{
    LineReader reader(path);
    HeaderMap header(detail::require_header(reader));
    const auto c_block = header.require("block_number", path);
    const auto c_ts = header.require("timestamp", path);
    std::vector<std::pair<BlockHeight, std::int64_t>> points;
    std::string line;
    std::vector<std::string_view> f;
    while (reader.next(line)) {
        if (line.empty())
            continue;
        detail::with_location(reader, [&] {
            split_fields(line, f);
            if (f.size() <= std::max(c_block, c_ts))
                throw Error(ErrorKind::ParseError, "time index row needs block_number and timestamp");
            points.emplace_back(parse_int<BlockHeight>(f[c_block], "block_number"),
                                parse_int<std::int64_t>(f[c_ts], "timestamp"));
        });
    }
    return BlockTimeIndex::explicit_table(std::move(points));
}

} // namespace lstvel::io
