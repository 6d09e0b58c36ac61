#include "support.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <random>

using namespace lstvel;
using namespace lstvel::test;

namespace {

const AccountId A = acct(1);
const AccountId B = acct(2);
const AccountId C = acct(3);

TokenAmount milli_tokens(std::uint64_t m) { return TokenAmount(m) * TokenAmount(1000000000000000ULL); }

} // namespace

TEST(TotalReceived, SumsInboundValue)
{
    TransferLedger ledger = {mint(1, 0, A, 3), rec(2, 0, A, B, 1), mint(3, 0, A, 4), rec(4, 0, A, A, 99)};
    EXPECT_EQ(total_received(ledger, C), 0);
    EXPECT_EQ(total_received(ledger, A), 7);
    EXPECT_EQ(total_received(ledger, B), 1);
    auto totals = received_totals(ledger);
    EXPECT_EQ(totals.at(A), 7);
    EXPECT_EQ(totals.at(B), 1);
    EXPECT_FALSE(totals.contains(C));
}

TEST(TotalReceived, MatchesIndependentRecount)
{
    auto g = synth::generate({.seed = 77, .accounts = 20, .transfers = 1500});
    auto totals = received_totals(g.transfers);
    for (std::uint64_t i = 0; i < 20; ++i) {
        auto id = AccountId::synthetic(i);
        boost::multiprecision::cpp_int sum = 0;
        for (const auto &r : g.transfers)
            if (r.to == id && r.from != id)
                sum += boost::multiprecision::cpp_int(r.value);
        EXPECT_EQ(boost::multiprecision::cpp_int(total_received(g.transfers, id)), sum);
        auto it = totals.find(id);
        EXPECT_EQ(boost::multiprecision::cpp_int(it == totals.end() ? TokenAmount(0) : it->second), sum);
    }
}

TEST(Categories, StandardBoundaries)
{
    const auto &t = CategoryTable::standard();
    EXPECT_EQ(categorize(tokens(10000), t), "Whale");
    EXPECT_EQ(categorize(tokens(3000), t), "Orca");
    EXPECT_EQ(categorize(tokens(1000), t), "Dolphin");
    EXPECT_EQ(categorize(tokens(100), t), "Fish");
    EXPECT_EQ(categorize(tokens(10), t), "Shrimp");
    EXPECT_EQ(categorize(tokens(1), t), "Krill");
    EXPECT_EQ(categorize(kOneToken - 1, t), "Plankton");
    EXPECT_EQ(categorize(kOneToken / 2, t), "Plankton");
    EXPECT_EQ(categorize(0, t), "Plankton");
    EXPECT_EQ(categorize(tokens(10000) - 1, t), "Orca");
    EXPECT_EQ(categorize(max_token_amount().convert_to<TokenAmount>(), t), "Whale");
    EXPECT_EQ(t.names_descending(),
              (std::vector<std::string>{"Whale", "Orca", "Dolphin", "Fish", "Shrimp", "Krill", "Plankton"}));
}

TEST(Categories, RejectsTablesThatDoNotPartition)
{
    EXPECT_EQ(error_kind_of([] { CategoryTable({{"a", 1, std::nullopt}}); }), ErrorKind::InvalidConfig);
    EXPECT_EQ(error_kind_of([] { CategoryTable({{"a", 0, TokenAmount(5)}, {"b", 6, std::nullopt}}); }),
              ErrorKind::InvalidConfig);
    EXPECT_EQ(error_kind_of([] { CategoryTable({{"a", 0, TokenAmount(5)}}); }), ErrorKind::InvalidConfig);
    EXPECT_EQ(error_kind_of([] { CategoryTable({}); }), ErrorKind::InvalidConfig);
    CategoryTable ok({{"small", 0, TokenAmount(5)}, {"big", 5, std::nullopt}});
    EXPECT_EQ(ok.categorize(4), "small");
    EXPECT_EQ(ok.categorize(5), "big");
}

TEST(Decompose, SingleCategoryTakesEverything)
{
    TransferLedger ledger = {mint(1, 0, A, tokens(2)), mint(2, 0, B, tokens(3)), rec(5, 0, A, C, tokens(1))};
    auto rows = velocity_shares_by_category(ledger, std::vector<BlockHeight>{6, 20}, CategoryTable::standard(),
                                            received_totals(ledger));
    ASSERT_EQ(rows.size(), 2u);
    for (const auto &row : rows)
        for (const auto &[name, share] : row.shares)
            EXPECT_EQ(share, name == "Krill" ? 1.0 : 0.0) << name;
}

TEST(Decompose, EqualContributionsSplitEvenly)
{
    // A (Whale by receipts) and B (Fish) hold equal amounts of equal age.
    TransferLedger ledger = {mint(1, 0, A, tokens(10000)), mint(1, 1, B, tokens(10000))};
    ReceivedTotals received{{A, tokens(10000)}, {B, tokens(500)}};
    auto rows = velocity_shares_by_category(ledger, std::vector<BlockHeight>{40}, CategoryTable::standard(), received);
    ASSERT_EQ(rows.size(), 1u);
    for (const auto &[name, share] : rows[0].shares) {
        if (name == "Whale" || name == "Fish")
            EXPECT_EQ(share, 0.5) << name;
        else
            EXPECT_EQ(share, 0.0) << name;
    }
}

TEST(Decompose, WhaleDominatedLedgerMatchesConstructedRatio)
{
    // Every receipt is paired: the whale gets 99 units for each unit some
    // other account gets at the same block, so every sum of w/tau splits 99:1.
    std::mt19937_64 rng(5);
    const AccountId whale = acct(100);
    TransferLedger ledger;
    BlockHeight b = 100;
    for (int i = 0; i < 400; ++i) {
        b += 1 + rng() % 50;
        TokenAmount v = TokenAmount(1 + rng() % 1000) * milli_tokens(1);
        ledger.push_back(mint(b, 0, whale, v * 99));
        ledger.push_back(mint(b, 1, acct(1 + rng() % 30), v));
    }
    auto received = received_totals(ledger);
    auto schedule = make_schedule(200, b + 100, 997);
    auto rows = velocity_shares_by_category(ledger, schedule, CategoryTable::standard(), received);
    ASSERT_EQ(categorize(received.at(whale), CategoryTable::standard()), "Whale");
    for (const auto &row : rows) {
        double whale_share = 0, total = 0;
        for (const auto &[name, share] : row.shares) {
            total += share;
            if (name == "Whale")
                whale_share = share;
        }
        EXPECT_NEAR(whale_share, 0.99, 1e-9) << row.block;
        EXPECT_NEAR(total, 1.0, 1e-12);
    }
}

TEST(Decompose, SharesSumToOneOnGeneratedLedgers)
{
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        synth::GeneratorConfig config{.seed = seed, .accounts = 25, .transfers = 800};
        config.value_log10_min = 16;
        config.value_log10_max = 23;
        auto g = synth::generate(config);
        auto schedule = synth::spread_schedule(g.transfers, 8);
        auto rows =
            velocity_shares_by_category(g.transfers, schedule, CategoryTable::standard(), received_totals(g.transfers));
        for (const auto &row : rows) {
            double total = 0;
            for (const auto &[name, share] : row.shares) {
                EXPECT_GE(share, 0.0);
                EXPECT_LE(share, 1.0);
                total += share;
            }
            EXPECT_NEAR(total, 1.0, 1e-12);
        }
    }
}

TEST(Decompose, ZeroSupply)
{
    TransferLedger ledger = {mint(5, 0, A, 1)};
    EXPECT_EQ(error_kind_of([&] {
                  velocity_shares_by_category(ledger, std::vector<BlockHeight>{1}, CategoryTable::standard(), {});
              }),
              ErrorKind::ZeroSupply);
}

TEST(TimeIndex, AffineAndExplicit)
{
    auto affine = BlockTimeIndex::affine(1000, 1600000000, 12);
    EXPECT_EQ(affine.timestamp(1000), 1600000000);
    EXPECT_EQ(affine.timestamp(1010), 1600000120);
    EXPECT_EQ(affine.timestamp(990), 1599999880);
    EXPECT_EQ(affine.blocks_for_days(1), 7200u);

    auto table = BlockTimeIndex::explicit_table({{200, 2000}, {100, 1000}});
    EXPECT_EQ(table.timestamp(100), 1000);
    EXPECT_EQ(table.timestamp(150), 1500);
    EXPECT_EQ(error_kind_of([&] { table.timestamp(201); }), ErrorKind::MissingTimeIndex);
    EXPECT_EQ(error_kind_of([] { BlockTimeIndex::explicit_table({}); }), ErrorKind::MissingTimeIndex);
    EXPECT_EQ(error_kind_of([] { BlockTimeIndex::explicit_table({{1, 5}, {1, 6}}); }), ErrorKind::DuplicateKey);
    EXPECT_EQ(error_kind_of([] { BlockTimeIndex::explicit_table({{1, 5}, {2, 4}}); }), ErrorKind::InvalidConfig);
}

TEST(Smoothing, IsLinear)
{
    std::mt19937_64 rng(3);
    std::vector<BlockHeight> blocks;
    std::vector<long double> x, y, combo;
    for (BlockHeight b = 0; b < 500; b += 1 + rng() % 900) {
        blocks.push_back(b * 10);
        x.push_back(static_cast<long double>(rng() % 1000000));
        y.push_back(static_cast<long double>(rng() % 1000000));
        combo.push_back(3 * x.back() - 2 * y.back());
    }
    auto time = BlockTimeIndex::affine(0, 0);
    const std::int64_t window = 30 * kSecondsPerDay;
    auto sx = trailing_average(blocks, x, time, window);
    auto sy = trailing_average(blocks, y, time, window);
    auto sc = trailing_average(blocks, combo, time, window);
    for (std::size_t i = 0; i < blocks.size(); ++i)
        EXPECT_NEAR(sc[i], 3 * sx[i] - 2 * sy[i], 1e-12 * std::max(1.0, std::abs(sc[i])));
}

TEST(BalanceSeries, ConstantBalanceSmoothsToItself)
{
    TransferLedger ledger = {mint(10, 0, A, tokens(7))};
    SmoothingOptions smoothing{30, BlockTimeIndex::affine(0, 0)};
    auto schedule = make_schedule(10, 500000, 7200);
    auto series = balance_series(ledger, std::vector<AccountId>{A}, schedule, smoothing);
    ASSERT_EQ(series.size(), 1u);
    for (const auto &p : series[0].points) {
        EXPECT_EQ(p.balance, tokens(7));
        EXPECT_EQ(*p.smoothed, to_long_double(tokens(7)));
    }
}

TEST(BalanceSeries, StepAtWindowMidpointSmoothsToHalf)
{
    // One sample every two days, 30-day window: 16 samples per window. The
    // balance steps to B between the samples at day 14 and day 16.
    const BlockHeight day = 7200;
    const TokenAmount step = tokens(640);
    TransferLedger ledger = {mint(15 * day, 0, A, step)};
    auto schedule = make_schedule(0, 60 * day, 2 * day);
    SmoothingOptions smoothing{30, BlockTimeIndex::affine(0, 0)};
    auto series = balance_series(ledger, std::vector<AccountId>{A}, schedule, smoothing);
    const auto &points = series[0].points;
    auto at = std::find_if(points.begin(), points.end(), [&](const auto &p) { return p.block == 30 * day; });
    ASSERT_NE(at, points.end());
    EXPECT_EQ(*at->smoothed, to_long_double(step) / 2);

    // Naive recomputation of every smoothed value.
    for (const auto &p : points) {
        long double sum = 0;
        int n = 0;
        for (const auto &q : points)
            if (q.block <= p.block && q.block + 30 * day >= p.block) {
                sum += to_long_double(q.balance);
                ++n;
            }
        EXPECT_DOUBLE_EQ(*p.smoothed, static_cast<double>(sum / n));
    }
}

TEST(BalanceSeries, EmptyAccountSetAndMissingIndex)
{
    TransferLedger ledger = {mint(10, 0, A, 5)};
    EXPECT_TRUE(balance_series(ledger, std::vector<AccountId>{}, std::vector<BlockHeight>{10}).empty());
    SmoothingOptions no_index{30, std::nullopt};
    EXPECT_EQ(error_kind_of([&] {
                  balance_series(ledger, std::vector<AccountId>{A}, std::vector<BlockHeight>{10}, no_index);
              }),
              ErrorKind::MissingTimeIndex);
    auto raw = balance_series(ledger, std::vector<AccountId>{A}, std::vector<BlockHeight>{9, 10});
    EXPECT_EQ(raw[0].points[0].balance, 0);
    EXPECT_EQ(raw[0].points[1].balance, 5);
    EXPECT_FALSE(raw[0].points[1].smoothed);
}

TEST(TopHolders, RankingAndTies)
{
    TransferLedger ledger = {mint(1, 0, A, 5), mint(1, 1, B, 7)};
    EXPECT_TRUE(top_holders(ledger, 10, 0).empty());
    auto one = top_holders(ledger, 10, 1);
    ASSERT_EQ(one.size(), 1u);
    EXPECT_EQ(one[0].account, B);

    TransferLedger tie = {mint(1, 0, B, 5), mint(1, 1, A, 5), mint(1, 2, C, 1)};
    auto two = top_holders(tie, 10, 2);
    ASSERT_EQ(two.size(), 2u);
    EXPECT_EQ(two[0].account, A);
    EXPECT_EQ(two[1].account, B);

    auto excluded = top_holders(tie, 10, 2, std::vector<AccountId>{A});
    EXPECT_EQ(excluded[0].account, B);
    EXPECT_EQ(excluded[1].account, C);
}

TEST(TopHolders, IgnoresZeroAndBurningAddresses)
{
    TransferLedger ledger = {mint(1, 0, A, 100), rec(2, 0, A, AccountId::burning(), 60),
                             rec(3, 0, A, AccountId::zero(), 30)};
    auto top = top_holders(ledger, 5, 5);
    ASSERT_EQ(top.size(), 1u);
    EXPECT_EQ(top[0].account, A);
    EXPECT_EQ(top[0].balance, 10);
}

TEST(TopHolders, InvariantUnderOrderPreservingPermutation)
{
    auto g = synth::generate({.seed = 4, .accounts = 30, .transfers = 1000});
    auto shuffled = g.transfers;
    std::mt19937_64 rng(4);
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    sort_records(shuffled);
    BlockHeight t = g.transfers[g.transfers.size() / 2].block;
    auto a = top_holders(g.transfers, t, 10);
    auto b = top_holders(shuffled, t, 10);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a[i].account, b[i].account);
        EXPECT_EQ(a[i].balance, b[i].balance);
    }
}

TEST(WrappedShare, Extremes)
{
    const AccountId wrapper = AccountId::parse(io::kWstethContract);
    TransferLedger all = {mint(1, 0, A, 10), rec(2, 0, A, wrapper, 10)};
    auto full = wrapped_share_series(all, wrapper, std::vector<BlockHeight>{2});
    EXPECT_EQ(full[0].fraction, 1.0);
    TransferLedger none = {mint(1, 0, A, 10)};
    EXPECT_EQ(wrapped_share_series(none, wrapper, std::vector<BlockHeight>{2})[0].fraction, 0.0);
    EXPECT_EQ(error_kind_of([&] { wrapped_share_series(none, wrapper, std::vector<BlockHeight>{0}); }),
              ErrorKind::ZeroSupply);
}

TEST(WrappedShare, BurnedValueLeavesSupply)
{
    const AccountId wrapper = AccountId::parse(io::kWstethContract);
    TransferLedger ledger = {mint(1, 0, A, 100), rec(2, 0, A, AccountId::burning(), 20), rec(3, 0, A, wrapper, 20)};
    EXPECT_EQ(wrapped_share_series(ledger, wrapper, std::vector<BlockHeight>{3})[0].fraction, 0.25);
}

TEST(WrappedShare, ConstructedQuarterRatio)
{
    // Every mint is split 1:3 between the wrapper and ordinary accounts, and
    // ordinary accounts only trade among themselves.
    const AccountId wrapper = AccountId::parse(io::kWstethContract);
    std::mt19937_64 rng(8);
    TransferLedger ledger;
    std::vector<TokenAmount> held(10);
    for (BlockHeight b = 1; b <= 500; ++b) {
        TokenAmount v = TokenAmount(1 + rng() % 1000000) * 1000003;
        ledger.push_back(mint(b, 0, wrapper, v));
        auto k = rng() % 10;
        ledger.push_back(mint(b, 1, acct(k), v * 3));
        held[k] += v * 3;
        auto from = rng() % 10, to = rng() % 10;
        if (held[from] > 0 && from != to) {
            TokenAmount amount = held[from] / 2;
            ledger.push_back(rec(b, 2, acct(from), acct(to), amount));
            held[from] -= amount;
            held[to] += amount;
        }
    }
    SmoothingOptions smoothing{1, BlockTimeIndex::affine(0, 0)};
    auto points = wrapped_share_series(ledger, wrapper, make_schedule(1, 500, 7), smoothing);
    for (const auto &p : points) {
        EXPECT_NEAR(p.fraction, 0.25, 1e-12);
        EXPECT_NEAR(*p.smoothed, 0.25, 1e-12);
    }
}
