#pragma once

#include "errors.hpp"

#include <array>
#include <compare>
#include <cstdint>
#include <cstring>
#include <functional>
#include <string>
#include <string_view>

namespace lstvel {

/// 20-byte account address. Parsing accepts any hex case; rendering is
/// always lowercase with a 0x prefix.
class AccountId {
public:
    static constexpr std::size_t kSize = 20;
    using Bytes = std::array<std::uint8_t, kSize>;

    constexpr AccountId() = default;
    constexpr explicit AccountId(const Bytes &bytes) : bytes_(bytes) {}

    static AccountId parse(std::string_view text)
    {
        if (text.size() >= 2 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X'))
            text.remove_prefix(2);
        if (text.size() != 2 * kSize)
            throw Error(ErrorKind::ParseError, "address must have 40 hex digits: '" + std::string(text) + "'");
        Bytes out{};
        for (std::size_t i = 0; i < kSize; ++i)
            out[i] = static_cast<std::uint8_t>((nibble(text[2 * i]) << 4) | nibble(text[2 * i + 1]));
        return AccountId(out);
    }

    /// Deterministic synthetic address: index encoded big-endian in the
    /// trailing bytes behind a fixed tag, never colliding with the zero or
    /// burning address.
    static AccountId synthetic(std::uint64_t index)
    {
        Bytes out{};
        out[0] = 0xa1;
        for (int i = 0; i < 8; ++i)
            out[kSize - 1 - i] = static_cast<std::uint8_t>(index >> (8 * i));
        return AccountId(out);
    }

    static const AccountId &zero()
    {
        static const AccountId z{};
        return z;
    }

    /// Lido burner contract; receives shares on withdrawal finalization.
    static const AccountId &burning()
    {
        static const AccountId b = parse("0xD15a672319Cf0352560eE76d9e89eAB0889046D3");
        return b;
    }

    bool is_zero() const noexcept { return *this == zero(); }
    bool is_burning() const noexcept { return *this == burning(); }

    const Bytes &bytes() const noexcept { return bytes_; }

    std::string to_string() const
    {
        static constexpr char kHex[] = "0123456789abcdef";
        std::string s(2 + 2 * kSize, '0');
        s[1] = 'x';
        for (std::size_t i = 0; i < kSize; ++i) {
            s[2 + 2 * i] = kHex[bytes_[i] >> 4];
            s[3 + 2 * i] = kHex[bytes_[i] & 0xf];
        }
        return s;
    }

    friend auto operator<=>(const AccountId &, const AccountId &) = default;
    friend bool operator==(const AccountId &, const AccountId &) = default;

private:
    static std::uint8_t nibble(char c)
    {
        if (c >= '0' && c <= '9')
            return static_cast<std::uint8_t>(c - '0');
        if (c >= 'a' && c <= 'f')
            return static_cast<std::uint8_t>(c - 'a' + 10);
        if (c >= 'A' && c <= 'F')
            return static_cast<std::uint8_t>(c - 'A' + 10);
        throw Error(ErrorKind::ParseError, std::string("invalid hex digit '") + c + "' in address");
    }

    Bytes bytes_{};
};

struct AccountIdHash {
    std::size_t operator()(const AccountId &a) const noexcept
    {
        // Addresses are hash outputs already; mix a few words for synthetic ones.
        std::uint64_t lo = 0, hi = 0;
        std::uint32_t tail = 0;
        std::memcpy(&lo, a.bytes().data(), 8);
        std::memcpy(&hi, a.bytes().data() + 8, 8);
        std::memcpy(&tail, a.bytes().data() + 16, 4);
        std::uint64_t h = lo ^ (hi * 0x9e3779b97f4a7c15ULL) ^ (std::uint64_t(tail) * 0xc2b2ae3d27d4eb4fULL);
        h ^= h >> 29;
        h *= 0xbf58476d1ce4e5b9ULL;
        h ^= h >> 32;
        return static_cast<std::size_t>(h);
    }
};

} // namespace lstvel

template <>
struct std::hash<lstvel::AccountId> : lstvel::AccountIdHash {};
