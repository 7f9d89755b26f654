#include <popcount/io/csv.hpp>

#include <gtest/gtest.h>
#include <json.hpp>

#include <array>
#include <cstdio>
#include <string>
#include <sys/wait.h>

namespace
{
    struct Output
    {
        int code = -1;
        std::string out;
    };

    // Run the CLI with stderr discarded; stdout and the exit status are returned.
    Output cli(const std::string& args)
    {
        const std::string cmd = std::string(POPCOUNT_CLI) + " " + args + " 2>/dev/null";
        Output r;
        FILE* p = popen(cmd.c_str(), "r");
        if (p == nullptr)
            return r;
        std::array<char, 4096> buf{};
        std::size_t got = 0;
        while ((got = fread(buf.data(), 1, buf.size(), p)) > 0)
            r.out.append(buf.data(), got);
        const int status = pclose(p);
        r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
        return r;
    }

    std::string column(const popcount::io::CsvTable& t, const std::string& name)
    {
        for (std::size_t i = 0; i < t.header.size(); ++i)
        {
            if (t.header[i] == name)
                return t.rows.at(0).at(i);
        }
        throw std::out_of_range(name);
    }
} // namespace

TEST(CliSimulate, FlipRowMatchesOracle)
{
    const auto r = cli("simulate --protocol flip --n 3 --trials 100000 --scheduler bst --init zeros --seed 7 --format csv");
    ASSERT_EQ(r.code, 0);
    const auto t = popcount::io::parse_csv(r.out);
    ASSERT_EQ(t.rows.size(), 1u);
    EXPECT_EQ(column(t, "oracle_value"), "10");
    const double mean = std::stod(column(t, "bst_interactions_mean"));
    const double se = std::stod(column(t, "bst_interactions_se"));
    EXPECT_LE(std::abs(mean - 10.0), 3.0 * se);
    EXPECT_EQ(popcount::io::write_csv(t), r.out);
}

TEST(CliSimulate, RowReproducesItself)
{
    const auto first = cli("simulate --protocol timeopt --n 12 --trials 50 --init random --seed 3");
    ASSERT_EQ(first.code, 0);
    const auto t = popcount::io::parse_csv(first.out);
    std::string cmd = column(t, "command");
    ASSERT_EQ(cmd.rfind("popcount ", 0), 0u);
    const auto again = cli(cmd.substr(9));
    EXPECT_EQ(again.code, 0);
    EXPECT_EQ(again.out, first.out);
}

TEST(CliSimulate, GrosWorstStart)
{
    const auto r = cli("simulate --protocol gros --n 3 --p 4 --scheduler adversarial --init worst --trials 1");
    ASSERT_EQ(r.code, 0);
    const auto t = popcount::io::parse_csv(r.out);
    EXPECT_GE(std::stoull(column(t, "non_null_transitions_min")), 7u);
    EXPECT_EQ(column(t, "p"), "4");
}

TEST(CliSimulate, TimeOptSingleAgent)
{
    const auto r = cli("simulate --protocol timeopt --n 1 --trials 10 --scheduler bst --init random --seed 1");
    ASSERT_EQ(r.code, 0);
    const auto t = popcount::io::parse_csv(r.out);
    EXPECT_EQ(column(t, "converged"), "10");
    EXPECT_EQ(column(t, "non_converged"), "0");
    EXPECT_EQ(column(t, "final_c_min"), "1");
    EXPECT_EQ(column(t, "final_c_max"), "1");
}

TEST(CliSimulate, JsonHasCsvColumns)
{
    const auto csv = cli("simulate --protocol flip --n 4 --trials 20 --seed 2 --format csv");
    const auto json = cli("simulate --protocol flip --n 4 --trials 20 --seed 2 --format json");
    ASSERT_EQ(csv.code, 0);
    ASSERT_EQ(json.code, 0);
    const auto t = popcount::io::parse_csv(csv.out);
    const auto j = nlohmann::ordered_json::parse(json.out);
    ASSERT_TRUE(j.is_array());
    std::vector<std::string> keys;
    for (auto it = j[0].begin(); it != j[0].end(); ++it)
        keys.push_back(it.key());
    EXPECT_EQ(keys, t.header);
}

TEST(CliSimulate, ExplicitVectorStart)
{
    const auto r = cli("simulate --protocol flip --n 3 --trials 5 --init vector=1,0,1");
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(cli("simulate --protocol flip --n 3 --trials 5 --init vector=1,0").code, 1);
    EXPECT_EQ(cli("simulate --protocol flip --n 3 --trials 5 --init vector=1,x,0").code, 1);
}

TEST(CliSimulate, FlagErrorsExitOneWithoutOutput)
{
    for (const char* args : {"simulate --protocol nope --n 3", "simulate --protocol flip", "simulate --protocol flip --n 0",
                             "simulate --protocol flip --n 3 --scheduler adversarial",
                             "simulate --protocol flip --n 3 --init worst", "simulate --protocol flip --n 3 --p 4",
                             "simulate --protocol flip --n 3 --format xml", "frobnicate"})
    {
        const auto r = cli(args);
        EXPECT_EQ(r.code, 1) << args;
        EXPECT_TRUE(r.out.empty()) << args;
    }
}

TEST(CliSimulate, TruncationExitsTwoWithoutOutput)
{
    const auto r = cli("simulate --protocol flip --n 20 --trials 3 --max-interactions 5");
    EXPECT_EQ(r.code, 2);
    EXPECT_TRUE(r.out.empty());
}

TEST(CliOracle, Values)
{
    EXPECT_EQ(cli("oracle --which flip-closed --n 4").out, "64/3 ≈ 21.333333333333333333\n");
    EXPECT_EQ(cli("oracle --which flip-recurrence --n 3").out, "10\n");
    EXPECT_EQ(cli("oracle --which gros-length --n 10").out, "1023\n");
    EXPECT_EQ(cli("oracle --which gros-term --k 4").out, "3\n");
    EXPECT_EQ(cli("oracle --which harmonic --n 1").out, "1\n");
    EXPECT_EQ(cli("oracle --which harmonic --n 3").out, "11/2 ≈ 5.5\n");
    EXPECT_EQ(cli("oracle --which timeopt-exact --n 1").out, "9/2 ≈ 4.5\n");
}

TEST(CliOracle, OutOfRangeExitsOne)
{
    EXPECT_EQ(cli("oracle --which timeopt-exact --n 5").code, 1);
    EXPECT_EQ(cli("oracle --which gros-term --k 0").code, 1);
    EXPECT_EQ(cli("oracle --which gros-length --n 64").code, 1);
    EXPECT_EQ(cli("oracle --which flip-closed").code, 1);
    EXPECT_EQ(cli("oracle --which nothing --n 2").code, 1);
}

TEST(CliVerify, FastPassesAndNamesEveryCriterion)
{
    const auto r = cli("verify --level fast --seed 42");
    EXPECT_EQ(r.code, 0) << r.out;
    for (int id = 1; id <= 11; ++id)
    {
        char tag[16];
        std::snprintf(tag, sizeof tag, "[PASS] C%-2d", id);
        EXPECT_NE(r.out.find(tag), std::string::npos) << tag;
    }
}
