#include "support.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <random>

using namespace lstvel;
using namespace lstvel::test;
using boost::multiprecision::cpp_int;

TEST(AccountId, ParsesWithAndWithoutPrefixAndNormalizesCase)
{
    auto a = AccountId::parse("0xAE7ab96520DE3A18E5e111B5EaAb095312D7fE84");
    auto b = AccountId::parse("ae7ab96520de3a18e5e111b5eaab095312d7fe84");
    EXPECT_EQ(a, b);
    EXPECT_EQ(a.to_string(), "0xae7ab96520de3a18e5e111b5eaab095312d7fe84");
    EXPECT_EQ(a.to_string().size(), 42u);
}

TEST(AccountId, RejectsWrongLengthAndBadDigits)
{
    EXPECT_EQ(error_kind_of([] { AccountId::parse("0x1234"); }), ErrorKind::ParseError);
    EXPECT_EQ(error_kind_of([] { AccountId::parse("0x" + std::string(39, '0') + "g"); }), ErrorKind::ParseError);
    EXPECT_EQ(error_kind_of([] { AccountId::parse("0x" + std::string(42, '0')); }), ErrorKind::ParseError);
}

TEST(AccountId, DistinguishedAddresses)
{
    EXPECT_TRUE(AccountId::zero().is_zero());
    EXPECT_EQ(AccountId::zero().to_string(), "0x0000000000000000000000000000000000000000");
    EXPECT_TRUE(AccountId::burning().is_burning());
    EXPECT_EQ(AccountId::burning().to_string(), "0xd15a672319cf0352560ee76d9e89eab0889046d3");
    EXPECT_FALSE(acct(1).is_zero());
    EXPECT_NE(acct(1), acct(2));
    EXPECT_LT(acct(1), acct(2));
}

TEST(Amount, ParsesDecimalsUpToFullWidth)
{
    EXPECT_EQ(parse_amount("0"), 0);
    EXPECT_EQ(parse_amount("000123"), 123);
    EXPECT_EQ(parse_amount("18446744073709551616"), TokenAmount(1) << 64);
    const std::string max = "115792089237316195423570985008687907853269984665640564039457584007913129639935";
    EXPECT_EQ(parse_amount(max), (cpp_int(1) << 256) - 1);
    EXPECT_EQ(to_decimal(parse_amount(max)), max);
}

TEST(Amount, RejectsOutOfRangeAndJunk)
{
    EXPECT_EQ(error_kind_of([] {
                  parse_amount("115792089237316195423570985008687907853269984665640564039457584007913129639936");
              }),
              ErrorKind::ParseError);
    EXPECT_EQ(error_kind_of([] { parse_amount(std::string(79, '9')); }), ErrorKind::ParseError);
    EXPECT_EQ(error_kind_of([] { parse_amount(""); }), ErrorKind::ParseError);
    EXPECT_EQ(error_kind_of([] { parse_amount("-1"); }), ErrorKind::ParseError);
    EXPECT_EQ(error_kind_of([] { parse_amount("1e18"); }), ErrorKind::ParseError);
}

TEST(Amount, ParsesTokenDecimals)
{
    EXPECT_EQ(parse_token_decimal("10000"), tokens(10000));
    EXPECT_EQ(parse_token_decimal("0.5"), kOneToken / 2);
    EXPECT_EQ(parse_token_decimal("0.000000000000000001"), 1);
    EXPECT_EQ(error_kind_of([] { parse_token_decimal("0.0000000000000000001"); }), ErrorKind::ParseError);
}

TEST(Amount, MulDivFloorUsesWideIntermediate)
{
    TokenAmount big = (TokenAmount(1) << 255) + 7;
    EXPECT_EQ(mul_div_floor(big, TokenAmount(3), TokenAmount(6)), TokenAmount(cpp_int(big) * 3 / 6));
    EXPECT_EQ(mul_div_floor(big, big, big), big);
    EXPECT_EQ(mul_div_floor(7, 3, 2), 10);
    EXPECT_EQ(error_kind_of([] { mul_div_floor(1, 1, 0); }), ErrorKind::ZeroShares);
    EXPECT_EQ(error_kind_of([&] { mul_div_floor(big, 4, 1); }), ErrorKind::Overflow);
}

TEST(PoolMath, TotalPooledEther)
{
    EXPECT_EQ(total_pooled_ether(snapshot(1, 0, 0, 0, 0, 0)), 0);
    EXPECT_EQ(total_pooled_ether(snapshot(1, 2, 1, tokens(32), tokens(5), 1)), tokens(69));
    EXPECT_EQ(total_pooled_ether(snapshot(1, 10, 10, tokens(321), 0, 1)), tokens(321));
    EXPECT_EQ(error_kind_of([] { total_pooled_ether(snapshot(1, 1, 2, 0, 0, 1)); }), ErrorKind::InvalidSnapshot);
}

TEST(PoolMath, SharePrice)
{
    EXPECT_EQ(share_price(pool(1, 1000, 500)), Rational(2));
    EXPECT_EQ(share_price(pool(1, 777, 777)), Rational(1));
    EXPECT_EQ(share_price(pool(1, 0, 100)), Rational(0));
    EXPECT_EQ(error_kind_of([] { share_price(pool(1, 10, 0)); }), ErrorKind::ZeroShares);
}

TEST(PoolMath, PooledEtherMonotoneInEachTerm)
{
    std::mt19937_64 rng(11);
    for (int i = 0; i < 2000; ++i) {
        std::uint64_t beacon = rng() % 1000, deposited = beacon + rng() % 1000;
        auto s = snapshot(1, deposited, beacon, TokenAmount(rng()) * rng(), TokenAmount(rng()) * rng(), 1);
        auto base = total_pooled_ether(s);
        auto t = s;
        t.buffered_ether += rng() % 100;
        EXPECT_GE(total_pooled_ether(t), base);
        t = s;
        t.beacon_balance += rng() % 100;
        EXPECT_GE(total_pooled_ether(t), base);
        t = s;
        t.deposited_validators += rng() % 3;
        EXPECT_GE(total_pooled_ether(t), base);
    }
}

TEST(PoolMath, SharePriceMatchesIntegerDivisionWithinOneUnit)
{
    std::mt19937_64 rng(12);
    for (int i = 0; i < 2000; ++i) {
        auto s = snapshot(1, rng() % 100000, 0, TokenAmount(rng()) * rng(), TokenAmount(rng()), 1 + rng());
        s.beacon_validators = s.deposited_validators / 2;
        Rational scaled = share_price(s) * Rational(cpp_int(kOneToken));
        cpp_int exact_floor = numerator(scaled) / denominator(scaled);
        TokenAmount integer = mul_div_floor(total_pooled_ether(s), kOneToken, s.total_shares);
        EXPECT_EQ(cpp_int(integer), exact_floor);
        EXPECT_LT(scaled - Rational(cpp_int(integer)), Rational(1));
    }
}

TEST(PoolMath, FormatRatioTruncatesToSignificantDigits)
{
    EXPECT_EQ(format_ratio(1, 3, 5), "0.33333");
    EXPECT_EQ(format_ratio(2, 3, 5), "0.66666");
    EXPECT_EQ(format_ratio(10, 4, 5), "2.5000");
    EXPECT_EQ(format_ratio(123456, 1, 3), "123456");
    EXPECT_EQ(format_ratio(0, 7, 5), "0");
    EXPECT_EQ(format_ratio(1, 800, 4), "0.001250");
}

TEST(Records, SortIsStableIdempotentAndStrict)
{
    TransferLedger records = {
        rec(5, 2, acct(1), acct(2), 1), rec(3, 0, acct(1), acct(2), 2), rec(5, 0, acct(2), acct(3), 3),
        rec(3, 7, acct(3), acct(1), 4), rec(4, 1, acct(1), acct(3), 5),
    };
    EXPECT_FALSE(is_strictly_ordered(records));
    sort_records(records);
    EXPECT_TRUE(is_strictly_ordered(records));
    auto once = records;
    sort_records(records);
    EXPECT_EQ(records, once);
    std::vector<std::pair<BlockHeight, std::uint64_t>> keys;
    for (const auto &r : records)
        keys.emplace_back(r.block, r.log_index);
    EXPECT_EQ(keys, (std::vector<std::pair<BlockHeight, std::uint64_t>>{{3, 0}, {3, 7}, {4, 1}, {5, 0}, {5, 2}}));

    TransferLedger dup = {rec(1, 0, acct(1), acct(2), 1), rec(1, 0, acct(2), acct(1), 1)};
    EXPECT_FALSE(is_strictly_ordered(dup));
}

TEST(Records, MintAndBurnClassification)
{
    EXPECT_TRUE(mint(1, 0, acct(1), 5).is_mint());
    EXPECT_FALSE(rec(1, 0, acct(1), acct(2), 5).is_mint());
    EXPECT_TRUE(rec(1, 0, acct(1), AccountId::burning(), 5).is_burn_destined());
}
