#pragma once

#include "../core/types.hpp"
#include "csv.hpp"
#include "rpc.hpp"

#include <filesystem>
#include <fstream>
#include <future>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

namespace lstvel::io {

// ---------------------------------------------------------------------------
// Hex helpers

inline std::string to_hex_quantity(std::uint64_t v)
{
    static constexpr char kHex[] = "0123456789abcdef";
    if (v == 0)
        return "0x0";
    std::string s;
    while (v) {
        s.push_back(kHex[v & 0xf]);
        v >>= 4;
    }
    s += "x0";
    return {s.rbegin(), s.rend()};
}

inline unsigned hex_nibble(char c)
{
    if (c >= '0' && c <= '9')
        return static_cast<unsigned>(c - '0');
    if (c >= 'a' && c <= 'f')
        return static_cast<unsigned>(c - 'a' + 10);
    if (c >= 'A' && c <= 'F')
        return static_cast<unsigned>(c - 'A' + 10);
    throw Error(ErrorKind::DecodeError, std::string("invalid hex digit '") + c + "'");
}

inline std::string_view strip_0x(std::string_view s)
{
    if (s.size() >= 2 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X'))
        s.remove_prefix(2);
    return s;
}

inline std::uint64_t parse_hex_quantity(std::string_view s)
{
    s = strip_0x(s);
    if (s.empty() || s.size() > 16)
        throw Error(ErrorKind::DecodeError, "invalid hex quantity '" + std::string(s) + "'");
    std::uint64_t v = 0;
    for (char c : s)
        v = (v << 4) | hex_nibble(c);
    return v;
}

/// Big-endian 32-byte word(s) as an unsigned amount.
inline TokenAmount parse_hex_word(std::string_view s)
{
    s = strip_0x(s);
    if (s.size() > 64)
        throw Error(ErrorKind::DecodeError, "word wider than 256 bits");
    TokenAmount v;
    for (char c : s)
        v = (v << 4) | TokenAmount(hex_nibble(c));
    return v;
}

/// Address from a left-padded 32-byte topic.
inline AccountId parse_topic_address(std::string_view topic)
{
    topic = strip_0x(topic);
    if (topic.size() != 64)
        throw Error(ErrorKind::DecodeError, "address topic must be 32 bytes");
    if (topic.substr(0, 24).find_first_not_of('0') != std::string_view::npos)
        throw Error(ErrorKind::DecodeError, "address topic has nonzero padding");
    return AccountId::parse(topic.substr(24));
}

// ---------------------------------------------------------------------------
// Event and call registry

/// topic0 hashes of the decoded event layouts, by name. Both share the
/// (indexed from, indexed to, uint256 value) shape.
inline std::map<std::string, std::string> default_event_topics()
{
    return {
        {"Transfer", "0xddf252ad1be2c89b69c2b068fc378daa952ba7f163c4a11628f55a4df523b3ef"},
        {"TransferShares", "0x9d9c909296d9c674451c0c24f02cb64981eb3b727f99865939192f880a755dcb"},
    };
}

struct StateSelectors {
    std::string beacon_stat = "0xae2e3538";    // getBeaconStat() -> (deposited, beaconValidators, beaconBalance)
    std::string buffered_ether = "0x47b714e0"; // getBufferedEther()
    std::string total_shares = "0xd5002f2e";   // getTotalShares()
};

inline const char *kStethContract = "0xae7ab96520de3a18e5e111b5eaab095312d7fe84";
inline const char *kWstethContract = "0x7f39c581f595b53c5cb19bd0b3f8da6c935e2ca0";

/// Decodes one eth_getLogs entry into a transfer record.
inline TransferRecord decode_transfer_log(const json &log, const std::string &topic0, Denomination denomination)
{
    try {
        const auto &topics = log.at("topics");
        if (!topics.is_array() || topics.size() != 3)
            throw Error(ErrorKind::DecodeError, "expected 3 topics");
        auto t0 = topics[0].get<std::string>();
        std::transform(t0.begin(), t0.end(), t0.begin(), [](unsigned char c) { return std::tolower(c); });
        if (t0 != topic0)
            throw Error(ErrorKind::DecodeError, "unexpected topic0 " + t0);
        auto data = strip_0x(log.at("data").get_ref<const std::string &>());
        if (data.size() != 64)
            throw Error(ErrorKind::DecodeError, "data must hold exactly one 32-byte word");
        TransferRecord r;
        r.block = parse_hex_quantity(log.at("blockNumber").get<std::string>());
        r.log_index = parse_hex_quantity(log.at("logIndex").get<std::string>());
        r.tx_hash = log.value("transactionHash", std::string());
        std::transform(r.tx_hash.begin(), r.tx_hash.end(), r.tx_hash.begin(),
                       [](unsigned char c) { return std::tolower(c); });
        r.from = parse_topic_address(topics[1].get<std::string>());
        r.to = parse_topic_address(topics[2].get<std::string>());
        r.value = parse_hex_word(data);
        r.denomination = denomination;
        return r;
    } catch (const json::exception &e) {
        throw Error(ErrorKind::DecodeError, std::string("malformed log: ") + e.what());
    } catch (const Error &e) {
        if (e.kind() == ErrorKind::DecodeError)
            throw;
        throw Error(ErrorKind::DecodeError, e.message());
    }
}

// ---------------------------------------------------------------------------
// Checkpoints

inline std::optional<BlockHeight> read_checkpoint(const std::string &path)
{
    if (path.empty() || !std::filesystem::exists(path))
        return std::nullopt;
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    line = std::string(trim(line));
    if (line.empty())
        return std::nullopt;
    try {
        return parse_int<BlockHeight>(line, "checkpoint");
    } catch (const Error &) {
        throw Error(ErrorKind::ParseError, path + ": checkpoint must be a single decimal block number");
    }
}

inline void write_checkpoint(const std::string &path, BlockHeight b)
{
    if (!path.empty())
        write_atomically(path, std::to_string(b) + "\n");
}

/// Drops rows whose leading block_number exceeds `checkpoint`, so a resumed
/// fetch can append without duplicating a partially written page.
inline void truncate_rows_after(const std::string &path, BlockHeight checkpoint)
{
    if (!std::filesystem::exists(path))
        return;
    std::ifstream in(path);
    std::ostringstream kept;
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
        if (header) {
            kept << line << '\n';
            header = false;
            continue;
        }
        if (line.empty())
            continue;
        auto comma = line.find(',');
        BlockHeight b = parse_int<BlockHeight>(std::string_view(line).substr(0, comma), "block_number");
        if (b <= checkpoint)
            kept << line << '\n';
    }
    in.close();
    write_atomically(path, kept.str());
}

// ---------------------------------------------------------------------------
// Log fetcher

struct LogQuery {
    AccountId contract;
    std::string topic0;
    Denomination denomination = Denomination::Tokens;
    BlockHeight from_block = 0;
    BlockHeight to_block = 0;
    BlockHeight page_size = 2000; // blocks per eth_getLogs call
    std::size_t concurrency = 4;
};

struct FetchOptions {
    std::string checkpoint_path; // empty: no checkpointing
    RetryPolicy retry;
};

/// Receives each committed page's records in (block, log_index) order,
/// followed by the page's last block.
using LogPageSink = std::function<void(std::span<const TransferRecord>, BlockHeight)>;

/// Paginated eth_getLogs over [from_block, to_block]. Pages are requested
/// up to `concurrency` at a time and committed strictly in order; the
/// checkpoint records the last committed block and a rerun resumes after it.
/// Returns the number of records delivered by this run.
inline std::size_t fetch_logs(RpcTransport &transport, const LogQuery &query, const LogPageSink &sink,
                              const FetchOptions &options = {})
{
    if (query.page_size == 0)
        throw Error(ErrorKind::InvalidConfig, "page-size must be positive");
    if (query.to_block < query.from_block)
        throw Error(ErrorKind::InvalidConfig, "to-block precedes from-block");
    std::string topic0 = query.topic0;
    std::transform(topic0.begin(), topic0.end(), topic0.begin(), [](unsigned char c) { return std::tolower(c); });

    BlockHeight start = query.from_block;
    if (auto cp = read_checkpoint(options.checkpoint_path)) {
        if (*cp >= query.to_block)
            return 0;
        start = std::max(start, *cp + 1);
    }

    auto fetch_page = [&](BlockHeight lo, BlockHeight hi) {
        json filter = {{"address", query.contract.to_string()},
                       {"topics", json::array({topic0})},
                       {"fromBlock", to_hex_quantity(lo)},
                       {"toBlock", to_hex_quantity(hi)}};
        json result = call_with_retry(transport, "eth_getLogs", json::array({filter}), options.retry);
        if (!result.is_array())
            throw Error(ErrorKind::DecodeError, "eth_getLogs result is not an array");
        TransferLedger page;
        for (const auto &log : result) {
            if (log.value("removed", false))
                continue;
            page.push_back(decode_transfer_log(log, topic0, query.denomination));
            if (page.back().block < lo || page.back().block > hi)
                throw Error(ErrorKind::DecodeError, "node returned a log outside the requested range");
        }
        sort_records(page);
        return page;
    };

    std::size_t delivered = 0;
    const std::size_t width = std::max<std::size_t>(query.concurrency, 1);
    BlockHeight next = start;
    bool done = false;
    while (!done) {
        std::vector<std::pair<BlockHeight, std::future<TransferLedger>>> wave;
        while (wave.size() < width && !done) {
            BlockHeight hi = query.to_block - next < query.page_size - 1 ? query.to_block : next + query.page_size - 1;
            wave.emplace_back(hi, std::async(std::launch::async, fetch_page, next, hi));
            if (hi == query.to_block)
                done = true;
            else
                next = hi + 1;
        }
        std::exception_ptr failure;
        for (auto &[hi, fut] : wave) {
            try {
                auto page = fut.get();
                if (failure)
                    continue;
                sink(page, hi);
                write_checkpoint(options.checkpoint_path, hi);
                delivered += page.size();
            } catch (...) {
                if (!failure)
                    failure = std::current_exception();
            }
        }
        if (failure)
            std::rethrow_exception(failure);
    }
    return delivered;
}

// ---------------------------------------------------------------------------
// State fetcher

struct StateQuery {
    AccountId contract = AccountId::parse(kStethContract);
    BlockHeight from_block = 0;
    BlockHeight to_block = 0;
    BlockHeight stride = 1;
    std::size_t concurrency = 4;
    StateSelectors selectors;
};

/// Sampled blocks: from, from+stride, ..., with to always included.
inline std::vector<BlockHeight> state_blocks(BlockHeight from, BlockHeight to, BlockHeight stride)
{
    if (stride == 0)
        throw Error(ErrorKind::InvalidConfig, "stride must be positive");
    std::vector<BlockHeight> out;
    for (BlockHeight b = from; b <= to; b += stride) {
        out.push_back(b);
        if (to - b < stride)
            break;
    }
    if (!out.empty() && out.back() != to)
        out.push_back(to);
    return out;
}

inline std::vector<TokenAmount> decode_words(const json &result, std::size_t expected, const std::string &what)
{
    if (!result.is_string())
        throw Error(ErrorKind::DecodeError, what + ": result is not a hex string");
    auto hex = strip_0x(result.get_ref<const std::string &>());
    if (hex.size() != 64 * expected)
        throw Error(ErrorKind::DecodeError, what + ": expected " + std::to_string(expected) + " words");
    std::vector<TokenAmount> words;
    for (std::size_t i = 0; i < expected; ++i)
        words.push_back(parse_hex_word(hex.substr(64 * i, 64)));
    return words;
}

inline LidoStateSnapshot read_state_at(RpcTransport &transport, const StateQuery &query, BlockHeight b,
                                       const RetryPolicy &retry)
{
    auto call = [&](const std::string &selector) {
        json tx = {{"to", query.contract.to_string()}, {"data", selector}};
        return call_with_retry(transport, "eth_call", json::array({tx, to_hex_quantity(b)}), retry);
    };
    auto as_count = [](const TokenAmount &v, const char *what) {
        if (v > TokenAmount(std::numeric_limits<std::uint64_t>::max()))
            throw Error(ErrorKind::DecodeError, std::string(what) + " does not fit 64 bits");
        return v.convert_to<std::uint64_t>();
    };
    auto stat = decode_words(call(query.selectors.beacon_stat), 3, "getBeaconStat");
    LidoStateSnapshot s;
    s.block = b;
    s.deposited_validators = as_count(stat[0], "depositedValidators");
    s.beacon_validators = as_count(stat[1], "beaconValidators");
    s.beacon_balance = stat[2];
    s.buffered_ether = decode_words(call(query.selectors.buffered_ether), 1, "getBufferedEther")[0];
    s.total_shares = decode_words(call(query.selectors.total_shares), 1, "getTotalShares")[0];
    return s;
}

using StateSink = std::function<void(const LidoStateSnapshot &)>;

/// Historical state reads at each sampled block, committed in block order
/// with the same checkpoint/resume contract as fetch_logs.
inline std::size_t fetch_state(RpcTransport &transport, const StateQuery &query, const StateSink &sink,
                               const FetchOptions &options = {})
{
    if (query.to_block < query.from_block)
        throw Error(ErrorKind::InvalidConfig, "to-block precedes from-block");
    auto blocks = state_blocks(query.from_block, query.to_block, query.stride);
    if (auto cp = read_checkpoint(options.checkpoint_path))
        std::erase_if(blocks, [&](BlockHeight b) { return b <= *cp; });

    std::size_t delivered = 0;
    const std::size_t width = std::max<std::size_t>(query.concurrency, 1);
    for (std::size_t i = 0; i < blocks.size(); i += width) {
        std::vector<std::future<LidoStateSnapshot>> wave;
        for (std::size_t j = i; j < std::min(blocks.size(), i + width); ++j)
            wave.push_back(std::async(std::launch::async, read_state_at, std::ref(transport), std::cref(query),
                                      blocks[j], std::cref(options.retry)));
        std::exception_ptr failure;
        for (auto &fut : wave) {
            try {
                auto s = fut.get();
                if (failure)
                    continue;
                sink(s);
                write_checkpoint(options.checkpoint_path, s.block);
                ++delivered;
            } catch (...) {
                if (!failure)
                    failure = std::current_exception();
            }
        }
        if (failure)
            std::rethrow_exception(failure);
    }
    return delivered;
}

// ---------------------------------------------------------------------------
// Recorded-fixture node

/// Serves eth_getLogs and eth_call from canned data:
///   {"logs": [<raw log objects>],
///    "calls": {"<block>": {"<selector>": "0x<return data>"}},
///    "archive_from": <oldest block with state>}
/// eth_call resolves to the latest canned block at or before the request.
class FixtureNode : public RpcTransport {
public:
    explicit FixtureNode(json fixture) : fixture_(std::move(fixture)) {}

    static std::unique_ptr<FixtureNode> from_file(const std::string &path)
    {
        std::ifstream in(path);
        if (!in)
            throw Error(ErrorKind::Io, "cannot open fixture " + path);
        try {
            return std::make_unique<FixtureNode>(json::parse(in));
        } catch (const json::exception &e) {
            throw Error(ErrorKind::ParseError, path + ": " + e.what());
        }
    }

    /// After this many calls every call fails as if the process died.
    void kill_after(std::size_t calls) { kill_after_ = calls; }
    /// The next n calls fail with a retryable error.
    void fail_transiently(std::size_t n) { transient_failures_ = n; }
    std::size_t calls() const { return calls_; }

    json call(const std::string &method, const json &params) override
    {
        {
            std::lock_guard lock(mutex_);
            ++calls_;
            if (kill_after_ && calls_ > *kill_after_)
                throw Error(ErrorKind::Io, "fixture node: connection lost");
            if (transient_failures_ > 0) {
                --transient_failures_;
                throw RpcFailure(ErrorKind::RpcError, "fixture node: rate limited", true);
            }
        }
        if (method == "eth_getLogs")
            return get_logs(params.at(0));
        if (method == "eth_call")
            return eth_call(params.at(0), params.at(1).get<std::string>());
        if (method == "eth_blockNumber")
            return to_hex_quantity(fixture_.value("head", BlockHeight{0}));
        throw_rpc_error({{"code", -32601}, {"message", "method not found: " + method}});
    }

    /// Answers a raw JSON-RPC request body, for serving over HTTP in tests.
    std::string handle(const std::string &body)
    {
        json req = json::parse(body);
        json resp = {{"jsonrpc", "2.0"}, {"id", req.value("id", json())}};
        try {
            resp["result"] = call(req.at("method").get<std::string>(), req.value("params", json::array()));
        } catch (const RpcFailure &e) {
            resp["error"] = {{"code", e.kind() == ErrorKind::ArchiveRequired ? -32000 : -32005},
                             {"message", e.kind() == ErrorKind::ArchiveRequired ? "missing trie node" : e.what()}};
        } catch (const std::exception &e) {
            resp["error"] = {{"code", -32000}, {"message", e.what()}};
        }
        return resp.dump();
    }

private:
    static std::string lower(std::string s)
    {
        std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
        return s;
    }

    json get_logs(const json &filter) const
    {
        auto lo = parse_hex_quantity(filter.at("fromBlock").get<std::string>());
        auto hi = parse_hex_quantity(filter.at("toBlock").get<std::string>());
        std::string address = lower(filter.value("address", std::string()));
        std::string topic0;
        if (filter.contains("topics") && !filter["topics"].empty())
            topic0 = lower(filter["topics"][0].get<std::string>());
        json out = json::array();
        for (const auto &log : fixture_.value("logs", json::array())) {
            auto b = parse_hex_quantity(log.at("blockNumber").get<std::string>());
            if (b < lo || b > hi)
                continue;
            if (!address.empty() && lower(log.value("address", std::string())) != address)
                continue;
            if (!topic0.empty() && lower(log.at("topics").at(0).get<std::string>()) != topic0)
                continue;
            out.push_back(log);
        }
        return out;
    }

    json eth_call(const json &tx, const std::string &tag) const
    {
        BlockHeight b = parse_hex_quantity(tag);
        if (fixture_.contains("archive_from") && b < fixture_["archive_from"].get<BlockHeight>())
            throw_rpc_error({{"code", -32000}, {"message", "missing trie node 0xabc (path ) state is not available"}});
        std::string selector = lower(tx.at("data").get<std::string>()).substr(0, 10);
        const json *best = nullptr;
        BlockHeight best_block = 0;
        static const json no_calls = json::object();
        const json &all = fixture_.contains("calls") ? fixture_.at("calls") : no_calls;
        for (const auto &[key, calls] : all.items()) {
            BlockHeight kb = std::stoull(key);
            if (kb <= b && (!best || kb >= best_block) && calls.contains(selector)) {
                best = &calls;
                best_block = kb;
            }
        }
        if (!best)
            throw_rpc_error({{"code", 3}, {"message", "execution reverted"}});
        return (*best)[selector];
    }

    json fixture_;
    std::mutex mutex_;
    std::size_t calls_ = 0;
    std::optional<std::size_t> kill_after_;
    std::size_t transient_failures_ = 0;
};

} // namespace lstvel::io
