#pragma once

#include "errors.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>
#include <string_view>

namespace lstvel {

/// Unsigned 256-bit amount in 10^-18 base units. The checked backend throws
/// on overflow and on subtraction below zero, so arithmetic bugs surface as
/// exceptions instead of wrapping.
using TokenAmount = boost::multiprecision::checked_uint256_t;

/// Intermediate width for products of two amounts.
using WideAmount = boost::multiprecision::uint512_t;

inline const TokenAmount kOneToken = TokenAmount(1000000000000000000ULL);
inline const TokenAmount kValidatorDeposit = TokenAmount(32) * kOneToken;

inline const WideAmount &max_token_amount()
{
    static const WideAmount max = (WideAmount(1) << 256) - 1;
    return max;
}

/// floor(a * b / d) with a 512-bit intermediate product.
inline TokenAmount mul_div_floor(const TokenAmount &a, const TokenAmount &b, const TokenAmount &d)
{
    if (d == 0)
        throw Error(ErrorKind::ZeroShares, "division by zero in mul_div_floor");
    WideAmount q = (WideAmount(a) * WideAmount(b)) / WideAmount(d);
    if (q > max_token_amount())
        throw Error(ErrorKind::Overflow, "mul_div_floor result exceeds 256 bits");
    return TokenAmount(q);
}

/// Parses a plain decimal string (no sign, no prefix, no exponent).
inline TokenAmount parse_amount(std::string_view text)
{
    if (text.empty())
        throw Error(ErrorKind::ParseError, "empty amount");
    for (char c : text)
        if (c < '0' || c > '9')
            throw Error(ErrorKind::ParseError, "invalid decimal amount '" + std::string(text) + "'");
    auto first = text.find_first_not_of('0');
    if (first == std::string_view::npos)
        return TokenAmount(0);
    text.remove_prefix(first);
    if (text.size() > 78)
        throw Error(ErrorKind::ParseError, "amount exceeds 2^256-1: " + std::string(text));
    if (text.size() <= 19) {
        std::uint64_t v = 0;
        for (char c : text)
            v = v * 10 + static_cast<std::uint64_t>(c - '0');
        return TokenAmount(v);
    }
    WideAmount v{std::string(text)};
    if (v > max_token_amount())
        throw Error(ErrorKind::ParseError, "amount exceeds 2^256-1: " + std::string(text));
    return TokenAmount(v);
}

/// Parses a whole-token decimal with an optional fractional part ("0.5",
/// "10000") into base units; at most 18 fractional digits.
inline TokenAmount parse_token_decimal(std::string_view text)
{
    auto dot = text.find('.');
    std::string whole(text.substr(0, dot));
    std::string frac = dot == std::string_view::npos ? std::string() : std::string(text.substr(dot + 1));
    if (frac.size() > 18)
        throw Error(ErrorKind::ParseError, "more than 18 fractional digits in '" + std::string(text) + "'");
    frac.append(18 - frac.size(), '0');
    if (whole.empty())
        whole = "0";
    return parse_amount(whole) * kOneToken + parse_amount(frac);
}

inline std::string to_decimal(const TokenAmount &v) { return v.str(); }

inline long double to_long_double(const TokenAmount &v) { return v.convert_to<long double>(); }

} // namespace lstvel
