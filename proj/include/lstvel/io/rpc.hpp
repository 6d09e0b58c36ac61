#pragma once

#include "../core/errors.hpp"

#include <httplib.h>
#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <functional>
#include <string>
#include <thread>

namespace lstvel::io {

using json = nlohmann::json;

/// RPC failure. Transient failures (transport errors, rate limits, 5xx) are
/// retried; the rest are final.
class RpcFailure : public Error {
public:
    RpcFailure(ErrorKind kind, const std::string &what, bool transient) : Error(kind, what), transient_(transient) {}
    bool transient() const noexcept { return transient_; }

private:
    bool transient_;
};

/// Node responses meaning the requested historical state is pruned.
inline bool is_archive_miss(const std::string &message)
{
    static const char *markers[] = {"missing trie node", "historical state", "state not available",
                                    "pruned", "header not found", "state is not available"};
    std::string lower = message;
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
    return std::any_of(std::begin(markers), std::end(markers),
                       [&](const char *m) { return lower.find(m) != std::string::npos; });
}

/// Raises the appropriate failure for a JSON-RPC error object.
[[noreturn]] inline void throw_rpc_error(const json &error)
{
    int code = error.value("code", 0);
    std::string message = error.value("message", std::string("unknown error"));
    if (is_archive_miss(message))
        throw RpcFailure(ErrorKind::ArchiveRequired,
                         "node cannot serve historical state (" + message + "); an archive endpoint is required",
                         false);
    // -32005: limit exceeded; -32603: internal error. Both worth retrying.
    bool transient = code == -32005 || code == -32603 || code == 429;
    throw RpcFailure(ErrorKind::RpcError, "rpc error " + std::to_string(code) + ": " + message, transient);
}

class RpcTransport {
public:
    virtual ~RpcTransport() = default;
    /// Returns the `result` member of the response. Must be callable from
    /// several threads at once.
    virtual json call(const std::string &method, const json &params) = 0;
};

/// JSON-RPC over HTTP(S). A fresh client per call keeps concurrent use safe.
class HttpRpcTransport : public RpcTransport {
public:
    explicit HttpRpcTransport(std::string url, std::chrono::seconds timeout = std::chrono::seconds(60))
        : timeout_(timeout)
    {
        auto scheme = url.find("://");
        if (scheme == std::string::npos)
            throw Error(ErrorKind::InvalidConfig, "rpc url must include a scheme: " + url);
        auto path_start = url.find('/', scheme + 3);
        base_ = path_start == std::string::npos ? url : url.substr(0, path_start);
        path_ = path_start == std::string::npos ? "/" : url.substr(path_start);
    }

    json call(const std::string &method, const json &params) override
    {
        httplib::Client client(base_);
        client.set_connection_timeout(timeout_);
        client.set_read_timeout(timeout_);
        json request = {{"jsonrpc", "2.0"}, {"id", ++id_}, {"method", method}, {"params", params}};
        auto res = client.Post(path_, request.dump(), "application/json");
        if (!res)
            throw RpcFailure(ErrorKind::RpcError, method + ": transport error " + httplib::to_string(res.error()), true);
        if (res->status == 429 || res->status >= 500)
            throw RpcFailure(ErrorKind::RpcError, method + ": HTTP " + std::to_string(res->status), true);
        if (res->status != 200)
            throw RpcFailure(ErrorKind::RpcError, method + ": HTTP " + std::to_string(res->status), false);
        json body;
        try {
            body = json::parse(res->body);
        } catch (const json::exception &e) {
            throw RpcFailure(ErrorKind::DecodeError, method + ": malformed response: " + e.what(), false);
        }
        if (body.contains("error") && !body["error"].is_null())
            throw_rpc_error(body["error"]);
        if (!body.contains("result"))
            throw RpcFailure(ErrorKind::DecodeError, method + ": response has no result", false);
        return body["result"];
    }

private:
    std::string base_;
    std::string path_;
    std::chrono::seconds timeout_;
    std::atomic<std::uint64_t> id_{0};
};

struct RetryPolicy {
    int max_attempts = 5;
    std::chrono::milliseconds initial_backoff{250};
    double multiplier = 2.0;
    std::chrono::milliseconds max_backoff{8000};
    std::function<void(std::chrono::milliseconds)> sleep = [](std::chrono::milliseconds d) {
        std::this_thread::sleep_for(d);
    };
};

/// Calls through `transport`, retrying transient failures with exponential
/// backoff up to the attempt cap.
inline json call_with_retry(RpcTransport &transport, const std::string &method, const json &params,
                            const RetryPolicy &policy)
{
    auto backoff = policy.initial_backoff;
    for (int attempt = 1;; ++attempt) {
        try {
            return transport.call(method, params);
        } catch (const RpcFailure &e) {
            if (!e.transient() || attempt >= policy.max_attempts)
                throw;
            if (policy.sleep)
                policy.sleep(backoff);
            backoff = std::min(policy.max_backoff, std::chrono::milliseconds(static_cast<std::int64_t>(
                                                       static_cast<double>(backoff.count()) * policy.multiplier)));
        }
    }
}

/// Endpoint from the flag, else from ETH_RPC_URL.
inline std::string resolve_endpoint(const std::string &flag_value)
{
    if (!flag_value.empty())
        return flag_value;
    if (const char *env = std::getenv("ETH_RPC_URL"); env && *env)
        return env;
    throw Error(ErrorKind::InvalidConfig, "rpc-url: no endpoint given and ETH_RPC_URL is unset");
}

} // namespace lstvel::io
