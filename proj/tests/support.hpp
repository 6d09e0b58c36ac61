#pragma once

#include <lstvel/lstvel.hpp>

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>

namespace lstvel::test {

inline AccountId acct(std::uint64_t i) { return AccountId::synthetic(i); }

inline TransferRecord rec(BlockHeight block, std::uint64_t log_index, const AccountId &from, const AccountId &to,
                          const TokenAmount &value, Denomination d = Denomination::Shares)
{
    TransferRecord r;
    r.block = block;
    r.log_index = log_index;
    r.from = from;
    r.to = to;
    r.value = value;
    r.denomination = d;
    return r;
}

inline TransferRecord mint(BlockHeight block, std::uint64_t log_index, const AccountId &to, const TokenAmount &value)
{
    return rec(block, log_index, AccountId::zero(), to, value);
}

inline TokenAmount tokens(std::uint64_t whole) { return TokenAmount(whole) * kOneToken; }

inline LidoStateSnapshot snapshot(BlockHeight block, std::uint64_t deposited, std::uint64_t beacon,
                                  const TokenAmount &beacon_balance, const TokenAmount &buffered,
                                  const TokenAmount &total_shares)
{
    return {block, deposited, beacon, beacon_balance, buffered, total_shares};
}

/// Snapshot whose pooled ether is exactly `pooled` (all buffered).
inline LidoStateSnapshot pool(BlockHeight block, const TokenAmount &pooled, const TokenAmount &shares)
{
    return snapshot(block, 0, 0, 0, pooled, shares);
}

inline std::string fixture(const std::string &name) { return std::string(LSTVEL_FIXTURES) + "/" + name; }

inline std::string slurp(const std::string &path)
{
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

inline void spit(const std::string &path, const std::string &content)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << content;
}

/// Fresh scratch directory per test.
inline std::filesystem::path scratch_dir()
{
    const auto *info = ::testing::UnitTest::GetInstance()->current_test_info();
    auto dir = std::filesystem::temp_directory_path() / "lstvel_tests" /
               (std::string(info->test_suite_name()) + "." + info->name());
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

/// Kind of the Error thrown by f, or nullopt when nothing is thrown.
template <typename F>
std::optional<ErrorKind> error_kind_of(F &&f)
{
    try {
        f();
    } catch (const Error &e) {
        return e.kind();
    }
    return std::nullopt;
}

} // namespace lstvel::test
