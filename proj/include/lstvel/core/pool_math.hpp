#pragma once

#include "types.hpp"

#include <boost/multiprecision/cpp_int.hpp>

namespace lstvel {

using Rational = boost::multiprecision::cpp_rational;

/// buffered + beacon + transient, where transient counts validators that
/// were deposited but are not yet visible on the beacon chain at 32 ETH each.
inline TokenAmount total_pooled_ether(const LidoStateSnapshot &s)
{
    if (s.deposited_validators < s.beacon_validators)
        throw Error(ErrorKind::InvalidSnapshot,
                    "block " + std::to_string(s.block) + ": deposited_validators (" +
                        std::to_string(s.deposited_validators) + ") < beacon_validators (" +
                        std::to_string(s.beacon_validators) + ")");
    TokenAmount transient = TokenAmount(s.deposited_validators - s.beacon_validators) * kValidatorDeposit;
    return s.buffered_ether + s.beacon_balance + transient;
}

/// Pooled ether per share as an exact rational.
inline Rational share_price(const LidoStateSnapshot &s)
{
    if (s.total_shares == 0)
        throw Error(ErrorKind::ZeroShares, "block " + std::to_string(s.block) + ": total_shares is zero");
    using boost::multiprecision::cpp_int;
    return Rational(cpp_int(total_pooled_ether(s)), cpp_int(s.total_shares));
}

/// Renders num/den as a plain decimal carrying exactly `significant`
/// significant digits, truncated toward zero, never in scientific notation.
inline std::string format_ratio(const boost::multiprecision::cpp_int &num,
                                const boost::multiprecision::cpp_int &den, int significant = 24)
{
    using boost::multiprecision::cpp_int;
    if (den == 0)
        throw Error(ErrorKind::ZeroShares, "format_ratio: zero denominator");
    if (num == 0)
        return "0";
    cpp_int whole = num / den;
    cpp_int rem = num % den;
    std::string out = whole.str();
    int used = whole == 0 ? 0 : static_cast<int>(out.size());
    if (used >= significant)
        return out;
    out.push_back('.');
    while (used < significant) {
        rem *= 10;
        int digit = cpp_int(rem / den).convert_to<int>();
        rem %= den;
        out.push_back(static_cast<char>('0' + digit));
        if (used > 0 || digit != 0)
            ++used;
    }
    return out;
}

} // namespace lstvel
