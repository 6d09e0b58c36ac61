#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lstvel {

enum class ErrorKind {
    InvalidSnapshot,
    ZeroShares,
    ZeroPool,
    Overflow,
    MissingState,
    UnorderedInput,
    InsufficientBalance,
    NonMonotonicBlock,
    EmptyAccount,
    ZeroSupply,
    ParseError,
    DuplicateKey,
    RpcError,
    DecodeError,
    ArchiveRequired,
    InvalidConfig,
    MissingTimeIndex,
    Io,
};

constexpr std::string_view to_string(ErrorKind kind) noexcept
{
    switch (kind) {
    case ErrorKind::InvalidSnapshot: return "InvalidSnapshot";
    case ErrorKind::ZeroShares: return "ZeroShares";
    case ErrorKind::ZeroPool: return "ZeroPool";
    case ErrorKind::Overflow: return "Overflow";
    case ErrorKind::MissingState: return "MissingState";
    case ErrorKind::UnorderedInput: return "UnorderedInput";
    case ErrorKind::InsufficientBalance: return "InsufficientBalance";
    case ErrorKind::NonMonotonicBlock: return "NonMonotonicBlock";
    case ErrorKind::EmptyAccount: return "EmptyAccount";
    case ErrorKind::ZeroSupply: return "ZeroSupply";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::DuplicateKey: return "DuplicateKey";
    case ErrorKind::RpcError: return "RpcError";
    case ErrorKind::DecodeError: return "DecodeError";
    case ErrorKind::ArchiveRequired: return "ArchiveRequired";
    case ErrorKind::InvalidConfig: return "InvalidConfig";
    case ErrorKind::MissingTimeIndex: return "MissingTimeIndex";
    case ErrorKind::Io: return "Io";
    }
    return "Unknown";
}

/// Every failure raised by the library carries a kind so callers (and the CLI
/// exit-code mapping) can dispatch without parsing messages.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string &what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind), message_(what)
    {}

    ErrorKind kind() const noexcept { return kind_; }
    /// The message without the kind prefix.
    const std::string &message() const noexcept { return message_; }

private:
    ErrorKind kind_;
    std::string message_;
};

} // namespace lstvel
