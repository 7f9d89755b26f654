#include <popcount/oracle.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <tuple>
#include <vector>

using namespace popcount;
using oracle::ExactRational;

namespace
{
    ExactRational frac(long long p, long long q) { return ExactRational(p) / ExactRational(q); }

    // Expected BST interactions to reach c = n for the phased protocol, averaged over
    // all 2^n mark vectors, by value iteration over the unlumped chain with an
    // explicit streak counter. Written against the rule itself, not the library.
    double phased_expected_unlumped(unsigned n)
    {
        using State = std::tuple<unsigned, unsigned, unsigned, unsigned, unsigned>; // marks, c0, c1, cnt, phase
        auto threshold = [](unsigned c) { return c <= 1 ? 6.0 : 6.0 * (c * std::log(double(c)) + 1.0); };
        auto successor = [&](State s, unsigned agent) {
            auto [marks, c0, c1, cnt, phase] = s;
            const unsigned b = (marks >> agent) & 1u;
            unsigned& cb = b == 0 ? c0 : c1;
            const unsigned c_phase = phase == 0 ? c0 : c1;
            if (b == phase)
            {
                cnt = 0;
                if (cb > 0)
                    --cb;
                marks ^= 1u << agent;
                (b == 0 ? c1 : c0) += 1;
            }
            else if (cnt >= threshold(cb))
            {
                cnt = 0;
                phase = 1 - phase;
            }
            else if (c_phase == 0)
            {
                ++cnt;
            }
            return State{marks, c0, c1, cnt, phase};
        };

        std::map<State, std::size_t> index;
        std::vector<State> states;
        std::vector<State> stack;
        for (unsigned m = 0; m < (1u << n); ++m)
            stack.push_back({m, 0, 0, 0, 0});
        while (!stack.empty())
        {
            const State s = stack.back();
            stack.pop_back();
            if (!index.emplace(s, states.size()).second)
                continue;
            states.push_back(s);
            if (std::get<1>(s) + std::get<2>(s) == n)
                continue;
            for (unsigned a = 0; a < n; ++a)
                stack.push_back(successor(s, a));
        }
        std::vector<std::vector<std::size_t>> next(states.size());
        for (std::size_t i = 0; i < states.size(); ++i)
        {
            if (std::get<1>(states[i]) + std::get<2>(states[i]) == n)
                continue;
            for (unsigned a = 0; a < n; ++a)
                next[i].push_back(index.at(successor(states[i], a)));
        }
        std::vector<double> e(states.size(), 0.0);
        for (int sweep = 0; sweep < 1000000; ++sweep)
        {
            double change = 0.0;
            for (std::size_t i = 0; i < states.size(); ++i)
            {
                if (next[i].empty())
                    continue;
                double v = 1.0;
                for (std::size_t j : next[i])
                    v += e[j] / n;
                change = std::max(change, std::abs(v - e[i]));
                e[i] = v;
            }
            if (change < 1e-12)
                break;
        }
        double total = 0.0;
        for (unsigned m = 0; m < (1u << n); ++m)
            total += e[index.at(State{m, 0, 0, 0, 0})];
        return total / (1u << n);
    }
} // namespace

TEST(FlipOracle, ClosedFormValues)
{
    EXPECT_EQ(oracle::flip_expected_closed_form(1), 1);
    EXPECT_EQ(oracle::flip_expected_closed_form(2), 4);
    EXPECT_EQ(oracle::flip_expected_closed_form(3), 10);
    EXPECT_EQ(oracle::flip_expected_closed_form(4), frac(64, 3));
}

TEST(FlipOracle, HittingTimes)
{
    EXPECT_EQ(oracle::flip_expected_recurrence(1), 1);
    const auto t = oracle::flip_hitting_times(3);
    ASSERT_EQ(t.size(), 4u);
    EXPECT_EQ(t[0], 0);
    EXPECT_EQ(t[1], 7);
    EXPECT_EQ(t[2], 9);
    EXPECT_EQ(t[3], 10);
    EXPECT_EQ(oracle::flip_hitting_times(2)[2], 4);
}

TEST(FlipOracle, HittingTimesSatisfyTheirEquations)
{
    for (unsigned n = 1; n <= 20; ++n)
    {
        const auto t = oracle::flip_hitting_times(n);
        EXPECT_EQ(t[0], 0);
        EXPECT_EQ(t[n], 1 + t[n - 1]);
        for (unsigned k = 1; k < n; ++k)
            EXPECT_EQ(t[k], 1 + frac(k, n) * t[k - 1] + frac(n - k, n) * t[k + 1]) << "n=" << n << " k=" << k;
    }
}

TEST(FlipOracle, ClosedFormEqualsRecurrenceUpTo64)
{
    for (unsigned n = 1; n <= 64; ++n)
        EXPECT_EQ(oracle::flip_expected_closed_form(n), oracle::flip_expected_recurrence(n)) << "n=" << n;
}

TEST(FlipOracle, SandwichAroundPowerOfTwo)
{
    for (unsigned n = 8; n <= 64; ++n)
    {
        const ExactRational u = oracle::flip_expected_closed_form(n);
        const ExactRational p = ExactRational(oracle::BigInt(1) << n);
        EXPECT_GE(u, p) << "n=" << n;
        EXPECT_LE(u, p * (1 + frac(8, n))) << "n=" << n;
    }
}

TEST(GrosOracle, Terms)
{
    EXPECT_EQ(oracle::gros_term(1), 1u);
    EXPECT_EQ(oracle::gros_term(4), 3u);
    EXPECT_EQ(oracle::gros_term(7), 1u);
    EXPECT_THROW(oracle::gros_term(0), std::invalid_argument);
}

TEST(GrosOracle, Lengths)
{
    EXPECT_EQ(oracle::gros_length(1), 1u);
    EXPECT_EQ(oracle::gros_length(3), 7u);
    EXPECT_EQ(oracle::gros_length(10), 1023u);
    EXPECT_EQ(oracle::expand_gros_sequence(10).size(), 1023u);
    EXPECT_THROW(oracle::gros_length(64), std::overflow_error);
}

TEST(GrosOracle, TermsMatchExpansion)
{
    const auto u = oracle::expand_gros_sequence(6);
    ASSERT_EQ(u.size(), 63u);
    for (std::uint64_t k = 1; k < 64; ++k)
        EXPECT_EQ(oracle::gros_term(k), u[k - 1]) << "k=" << k;
    const std::vector<std::uint32_t> u3{1, 2, 1, 3, 1, 2, 1};
    EXPECT_EQ(oracle::expand_gros_sequence(3), u3);
}

TEST(GrosOracle, ConcatenationProperty)
{
    for (unsigned n = 2; n <= 6; ++n)
    {
        const auto un = oracle::expand_gros_sequence(n);
        const auto prev = oracle::expand_gros_sequence(n - 1);
        const std::size_t half = (std::size_t{1} << (n - 1)) - 1;
        EXPECT_TRUE(std::equal(prev.begin(), prev.end(), un.begin()));
        EXPECT_EQ(un[half], n);
        EXPECT_TRUE(std::equal(prev.begin(), prev.end(), un.begin() + half + 1));
    }
}

TEST(GrosOracle, PrefixMultiplicities)
{
    for (unsigned n = 1; n <= 10; ++n)
    {
        std::map<std::uint32_t, std::uint64_t> seen;
        for (std::uint64_t k = 1; k <= oracle::gros_length(n); ++k)
            ++seen[oracle::gros_term(k)];
        ASSERT_EQ(seen.size(), n);
        for (unsigned j = 1; j <= n; ++j)
            EXPECT_EQ(seen[j], std::uint64_t{1} << (n - j));
    }
}

TEST(HarmonicOracle, Values)
{
    EXPECT_EQ(oracle::harmonic_bound(1), 1);
    EXPECT_EQ(oracle::harmonic_bound(3), frac(11, 2));
    // 10 * H_10 = 10 * 7381/2520.
    EXPECT_EQ(oracle::harmonic_bound(10), frac(7381, 252));
}

TEST(HarmonicOracle, EulerMascheroniEnvelope)
{
    for (unsigned n : {100u, 250u, 1000u, 4000u})
    {
        const double h = oracle::to_double(oracle::harmonic_bound(n)) / n;
        const double gap = h - std::log(double(n));
        EXPECT_GT(gap, 0.5);
        EXPECT_LT(gap, 1.0);
        // With the first correction term the gap is the constant itself.
        EXPECT_GT(gap - 0.5 / n, 0.577);
        EXPECT_LT(gap - 0.5 / n, 0.578);
    }
}

TEST(TimeOptOracle, SingleAgent)
{
    const oracle::TimeOptChain chain(1);
    // Mark 0 is converted at once; mark 1 waits out a 6-long streak, switches phase, then converts.
    EXPECT_EQ(chain.expected_from(0), 1);
    EXPECT_EQ(chain.expected_from(1), 8);
    EXPECT_EQ(oracle::timeopt_exact_expected(1), frac(9, 2));
}

TEST(TimeOptOracle, MatchesUnlumpedChainWithExplicitCounter)
{
    for (unsigned n = 1; n <= 3; ++n)
    {
        const double lumped = oracle::to_double(oracle::timeopt_exact_expected(n));
        const double full = phased_expected_unlumped(n);
        EXPECT_NEAR(lumped, full, 1e-9 * full) << "n=" << n;
    }
}

TEST(TimeOptOracle, IntractableAboveFour)
{
    EXPECT_NO_THROW(oracle::timeopt_exact_expected(4));
    EXPECT_THROW(oracle::timeopt_exact_expected(5), intractable);
    EXPECT_THROW(oracle::TimeOptChain(0), std::invalid_argument);
}

TEST(TimeOptOracle, GrowsWithN)
{
    ExactRational prev = 0;
    for (unsigned n = 1; n <= 4; ++n)
    {
        const ExactRational v = oracle::timeopt_exact_expected(n);
        EXPECT_GT(v, prev);
        // From all zeros every agent must be met at least once: a coupon collector.
        EXPECT_GE(oracle::TimeOptChain(n).expected_from(0), oracle::harmonic_bound(n));
        prev = v;
    }
}

TEST(Rendering, FractionsAndDecimals)
{
    EXPECT_EQ(oracle::to_fraction_string(frac(64, 3)), "64/3");
    EXPECT_EQ(oracle::to_fraction_string(ExactRational(10)), "10");
    EXPECT_EQ(oracle::to_decimal_string(frac(64, 3)), "21.333333333333333333");
    EXPECT_EQ(oracle::to_decimal_string(frac(2, 3)), "0.66666666666666666667");
    EXPECT_EQ(oracle::to_decimal_string(frac(1, 8)), "0.125");
    EXPECT_EQ(oracle::to_decimal_string(ExactRational(1023)), "1023");
    EXPECT_EQ(oracle::to_decimal_string(frac(-1, 3), 3), "-0.333");
}
