#include "support.hpp"

#include <zlib.h>

using namespace lstvel;
using namespace lstvel::test;

namespace {

const std::string kHeader = "block_number,log_index,tx_hash,from_address,to_address,value\n";
const std::string kA = "0x1111111111111111111111111111111111111111";
const std::string kB = "0x2222222222222222222222222222222222222222";

void write_gzip(const std::string &path, const std::string &content)
{
    gzFile gz = gzopen(path.c_str(), "wb");
    ASSERT_NE(gz, nullptr);
    gzwrite(gz, content.data(), static_cast<unsigned>(content.size()));
    gzclose(gz);
}

} // namespace

TEST(LoadTransfers, HeaderOnlyIsEmpty)
{
    auto dir = scratch_dir();
    spit((dir / "t.csv").string(), kHeader);
    EXPECT_TRUE(io::load_transfers((dir / "t.csv").string(), Denomination::Tokens).empty());
}

TEST(LoadTransfers, SortsShuffledRows)
{
    auto dir = scratch_dir();
    spit((dir / "t.csv").string(), kHeader + "9,0,0xab," + kA + "," + kB + ",3\n" + "2,5,," + kA + "," + kB +
                                       ",1\n" + "2,1,," + kB + "," + kA + ",2\n");
    auto ledger = io::load_transfers((dir / "t.csv").string(), Denomination::Shares);
    ASSERT_EQ(ledger.size(), 3u);
    EXPECT_EQ(ledger[0].key(), (RecordKey{2, 1}));
    EXPECT_EQ(ledger[1].key(), (RecordKey{2, 5}));
    EXPECT_EQ(ledger[2].key(), (RecordKey{9, 0}));
    EXPECT_EQ(ledger[2].tx_hash, "0xab");
    EXPECT_EQ(ledger[0].value, 2);
    EXPECT_EQ(ledger[0].denomination, Denomination::Shares);
}

TEST(LoadTransfers, ReportsLineOfMalformedRow)
{
    auto dir = scratch_dir();
    auto path = (dir / "t.csv").string();
    spit(path, kHeader + "1,0,," + kA + "," + kB + ",3\n" + "2,0,," + kA + "," + kB + ",12x\n");
    try {
        io::load_transfers(path, Denomination::Tokens);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::ParseError);
        EXPECT_NE(std::string(e.what()).find("t.csv:3"), std::string::npos) << e.what();
    }
    spit(path, kHeader + "1,0,," + kA + "," + kB + ",115792089237316195423570985008687907853269984665640564039457584007913129639936\n");
    EXPECT_EQ(error_kind_of([&] { io::load_transfers(path, Denomination::Tokens); }), ErrorKind::ParseError);
    spit(path, "block_number,log_index,from_address,value\n");
    EXPECT_EQ(error_kind_of([&] { io::load_transfers(path, Denomination::Tokens); }), ErrorKind::ParseError);
    spit(path, "");
    EXPECT_EQ(error_kind_of([&] { io::load_transfers(path, Denomination::Tokens); }), ErrorKind::ParseError);
}

TEST(LoadTransfers, RejectsDuplicateKeys)
{
    auto dir = scratch_dir();
    auto path = (dir / "t.csv").string();
    spit(path, kHeader + "4,2,," + kA + "," + kB + ",3\n" + "4,2,," + kB + "," + kA + ",1\n");
    try {
        io::load_transfers(path, Denomination::Tokens);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::DuplicateKey);
        EXPECT_NE(std::string(e.what()).find("(4, 2)"), std::string::npos) << e.what();
    }
}

TEST(LoadTransfers, MissingFileIsIoError)
{
    EXPECT_EQ(error_kind_of([] { io::load_transfers("/nonexistent/x.csv", Denomination::Tokens); }), ErrorKind::Io);
}

TEST(LoadTransfers, GzipAndColumnMapping)
{
    auto dir = scratch_dir();
    auto path = (dir / "t.csv.gz").string();
    write_gzip(path, "blk,idx,src,dst,amount,extra\r\n7,1," + kA + "," + kB + ",42,zz\r\n7,0," + kB + "," + kA +
                         ",5,zz\r\n");
    io::HeaderMap::Mapping mapping{{"block_number", "blk"},
                                   {"log_index", "idx"},
                                   {"from_address", "src"},
                                   {"to_address", "dst"},
                                   {"value", "amount"}};
    auto ledger = io::load_transfers(path, Denomination::Tokens, mapping);
    ASSERT_EQ(ledger.size(), 2u);
    EXPECT_EQ(ledger[0].value, 5);
    EXPECT_EQ(ledger[1].from, AccountId::parse(kA));
    EXPECT_EQ(ledger[1].value, 42);
}

TEST(LoadTransfers, RoundTripIsCanonicalSort)
{
    auto g = synth::generate({.seed = 17, .accounts = 10, .transfers = 500});
    auto shuffled = g.transfers;
    std::reverse(shuffled.begin(), shuffled.end());
    auto dir = scratch_dir();
    std::ostringstream raw;
    io::write_transfers(raw, shuffled);
    spit((dir / "in.csv").string(), raw.str());
    auto loaded = io::load_transfers((dir / "in.csv").string(), Denomination::Shares);
    std::ostringstream out, canonical;
    io::write_transfers(out, loaded);
    io::write_transfers(canonical, g.transfers);
    EXPECT_EQ(out.str(), canonical.str());
}

TEST(LoadStates, DeduplicatesKeepingLastRow)
{
    auto dir = scratch_dir();
    auto path = (dir / "s.csv").string();
    spit(path, std::string(io::kStateHeader) + "\n20,1,1,5,6,7\n10,2,1,3,4,5\n20,3,2,50,60,70\n");
    auto states = io::load_states(path);
    ASSERT_EQ(states.size(), 2u);
    EXPECT_EQ(states.snapshots()[0], snapshot(10, 2, 1, 3, 4, 5));
    EXPECT_EQ(states.snapshots()[1], snapshot(20, 3, 2, 50, 60, 70));
    std::ostringstream out;
    io::write_states(out, states);
    EXPECT_EQ(out.str(), std::string(io::kStateHeader) + "\n10,2,1,3,4,5\n20,3,2,50,60,70\n");
}

TEST(Labels, DefaultSetAndFile)
{
    auto labels = io::default_labels();
    EXPECT_EQ(labels.size(), 5u);
    EXPECT_EQ(labels.at(AccountId::parse("0x0B925eD163218f6662a35e0f0371Ac234f9E9371")), "Aave Ethereum wstETH");
    EXPECT_EQ(labels.at(AccountId::parse("0xba12222222228d8ba445958a75a0704d566bf2c8")), "Balancer Vault");

    auto dir = scratch_dir();
    auto path = (dir / "labels.csv").string();
    spit(path, "address,label\n" + kA + ",Exchange hot wallet\n");
    auto loaded = io::load_labels(path);
    EXPECT_EQ(loaded.at(AccountId::parse(kA)), "Exchange hot wallet");
}

TEST(CategoryFile, LoadsWholeTokenBounds)
{
    auto dir = scratch_dir();
    auto path = (dir / "cat.csv").string();
    spit(path, "name,lower,upper\nsmall,0,0.5\nmid,0.5,250\nlarge,250,\n");
    auto table = io::load_category_table(path);
    EXPECT_EQ(table.categorize(kOneToken / 2 - 1), "small");
    EXPECT_EQ(table.categorize(kOneToken / 2), "mid");
    EXPECT_EQ(table.categorize(tokens(250)), "large");
    spit(path, "name,lower,upper\nsmall,0,1\nlarge,2,\n");
    EXPECT_EQ(error_kind_of([&] { io::load_category_table(path); }), ErrorKind::InvalidConfig);
}

TEST(TimeIndexFile, Loads)
{
    auto dir = scratch_dir();
    auto path = (dir / "ts.csv").string();
    spit(path, "block_number,timestamp\n100,1000\n300,1400\n");
    EXPECT_EQ(io::load_time_index(path).timestamp(200), 1200);
}

TEST(Writers, NumbersNeverUseExponents)
{
    EXPECT_EQ(io::format_double(1e-20), "0.00000000000000000001");
    EXPECT_EQ(io::format_double(0.625), "0.625");
    EXPECT_EQ(io::format_double(1.0), "1");
    EXPECT_EQ(io::format_double(1.0 / 3), "0.3333333333333333");

    std::vector<VelocitySample> samples = {{100, acct(1), 0.5, tokens(100000000)}, {100, std::nullopt, 1e-9, 5}};
    std::ostringstream out;
    io::write_velocity_samples(out, samples);
    EXPECT_EQ(out.str(), "block_number,scope,address,money,velocity\n"
                         "100,account,0xa100000000000000000000000000000000000001,100000000000000000000000000,0.5\n"
                         "100,global,,5,0.000000001\n");
}

TEST(Writers, ShareLedgerCarriesProvenance)
{
    ShareLedger ledger;
    ledger.transfers = {rec(1, 0, acct(1), acct(2), 5), rec(9, 0, acct(2), acct(1), 3)};
    ledger.provenance = {Provenance::Reconstructed, Provenance::NativeEvent};
    std::ostringstream out;
    io::write_share_ledger(out, ledger);
    EXPECT_EQ(out.str(), kHeader.substr(0, kHeader.size() - 1) +
                             ",provenance\n"
                             "1,0,,0xa100000000000000000000000000000000000001,"
                             "0xa100000000000000000000000000000000000002,5,reconstructed\n"
                             "9,0,,0xa100000000000000000000000000000000000002,"
                             "0xa100000000000000000000000000000000000001,3,native\n");
}

TEST(Writers, AtomicWriteReplacesFile)
{
    auto dir = scratch_dir();
    auto path = (dir / "f.txt").string();
    io::write_atomically(path, "one\n");
    io::write_atomically(path, "two\n");
    EXPECT_EQ(slurp(path), "two\n");
    EXPECT_FALSE(std::filesystem::exists(path + ".tmp"));
}
