#include <popcount/configuration.hpp>
#include <popcount/rng.hpp>
#include <popcount/schedulers.hpp>

#include <boost/math/distributions/chi_squared.hpp>
#include <gtest/gtest.h>

#include <map>
#include <vector>

using namespace popcount;

namespace
{
    Configuration names(std::vector<std::uint32_t> v, std::uint32_t bound) { return make_named_configuration(v, bound); }

    double chi_square_critical(double dof, double alpha)
    {
        const boost::math::chi_squared dist(dof);
        return boost::math::quantile(boost::math::complement(dist, alpha));
    }

    std::pair<std::size_t, std::size_t> key(const InteractionPair& p) { return {p.first, p.second}; }
} // namespace

TEST(WeakAdversarial, SinkAgentFirst)
{
    Scheduler s(SchedulerKind::WeakAdversarial, 0);
    const auto p = s.next_pair(names({0, 0, 1}, 4));
    EXPECT_TRUE(p.involves_bst());
    EXPECT_EQ(p.second, 0u);
    EXPECT_EQ(s.next_pair(names({2, 1, 0}, 4)).second, 2u);
}

TEST(WeakAdversarial, HomonymsWhenNoSink)
{
    Scheduler s(SchedulerKind::WeakAdversarial, 0);
    const auto p = s.next_pair(names({1, 1, 2}, 4));
    EXPECT_EQ(p, InteractionPair::mobiles(0, 1));
    EXPECT_EQ(s.next_pair(names({3, 1, 2, 1}, 5)), InteractionPair::mobiles(1, 3));
}

TEST(WeakAdversarial, RejectsBitConfigurations)
{
    Scheduler s(SchedulerKind::WeakAdversarial, 0);
    const std::vector<unsigned> marks{0, 1};
    EXPECT_THROW(s.next_pair(make_bit_configuration(ProtocolId::Flip, marks)), incompatible_protocol);
    EXPECT_FALSE(compatible(SchedulerKind::WeakAdversarial, ProtocolId::TimeOpt));
    EXPECT_TRUE(compatible(SchedulerKind::WeakAdversarial, ProtocolId::GrosNaming));
}

TEST(WeakAdversarial, NeverMeetsNamedAgentWhileWorkRemains)
{
    Rng rng(31);
    Scheduler s(SchedulerKind::WeakAdversarial, 0);
    for (int i = 0; i < 5000; ++i)
    {
        const std::size_t n = 1 + rng.below(8);
        std::vector<std::uint32_t> v(n);
        for (auto& x : v)
            x = static_cast<std::uint32_t>(rng.below(n + 1));
        std::map<std::uint32_t, int> counts;
        for (auto x : v)
            ++counts[x];
        bool work = counts.count(sink_name) > 0;
        for (auto [name, c] : counts)
            work = work || (name != sink_name && c > 1);
        const auto p = s.next_pair(names(v, static_cast<std::uint32_t>(n + 1)));
        if (work && p.involves_bst())
        {
            EXPECT_EQ(v[p.second], sink_name);
        }
        if (!p.involves_bst())
        {
            EXPECT_EQ(v[p.first], v[p.second]);
        }
    }
}

TEST(BstOnly, SeededSequenceReplays)
{
    const std::vector<unsigned> marks(4, 0);
    const auto cfg = make_bit_configuration(ProtocolId::Flip, marks);
    Scheduler a(SchedulerKind::BstOnly, 1234), b(SchedulerKind::BstOnly, 1234), c(SchedulerKind::BstOnly, 1235);
    bool differs = false;
    for (int i = 0; i < 1000; ++i)
    {
        const auto pa = a.next_pair(cfg);
        EXPECT_TRUE(pa.involves_bst());
        EXPECT_LT(pa.second, 4u);
        EXPECT_EQ(pa, b.next_pair(cfg));
        differs = differs || !(pa == c.next_pair(cfg));
    }
    EXPECT_TRUE(differs);
}

TEST(BstOnly, MarginalIsUniformChiSquare)
{
    const std::size_t n = 10;
    const std::size_t draws = 1000000;
    const std::vector<unsigned> marks(n, 0);
    const auto cfg = make_bit_configuration(ProtocolId::Flip, marks);
    Scheduler s(SchedulerKind::BstOnly, derive_seed(77, 1));
    std::vector<double> freq(n, 0.0);
    for (std::size_t i = 0; i < draws; ++i)
        freq[s.next_pair(cfg).second] += 1.0;
    const double expected = static_cast<double>(draws) / static_cast<double>(n);
    double stat = 0.0;
    for (double f : freq)
        stat += (f - expected) * (f - expected) / expected;
    EXPECT_LT(stat, chi_square_critical(static_cast<double>(n - 1), 1e-3));
}

TEST(UniformPair, EveryUnorderedPairEquallyLikely)
{
    const std::size_t n = 6;
    const std::size_t draws = 600000;
    const std::vector<unsigned> marks(n, 0);
    const auto cfg = make_bit_configuration(ProtocolId::Flip, marks);
    Scheduler s(SchedulerKind::UniformPair, derive_seed(77, 2));
    std::map<std::pair<std::size_t, std::size_t>, double> freq;
    for (std::size_t i = 0; i < draws; ++i)
    {
        const auto p = s.next_pair(cfg);
        if (!p.involves_bst())
        {
            ASSERT_LT(p.first, p.second);
        }
        freq[key(p)] += 1.0;
    }
    const std::size_t pairs = pair_count(n);
    ASSERT_EQ(pairs, 21u);
    ASSERT_EQ(freq.size(), pairs);
    const double expected = static_cast<double>(draws) / static_cast<double>(pairs);
    double stat = 0.0;
    for (auto [k, f] : freq)
        stat += (f - expected) * (f - expected) / expected;
    EXPECT_LT(stat, chi_square_critical(static_cast<double>(pairs - 1), 1e-3));
}

TEST(RoundRobin, EveryWindowCoversEachPairOnce)
{
    for (std::size_t n = 1; n <= 7; ++n)
    {
        const std::vector<unsigned> marks(n, 0);
        const auto cfg = make_bit_configuration(ProtocolId::Flip, marks);
        Scheduler s(SchedulerKind::RoundRobin, 0);
        const std::size_t w = pair_count(n);
        std::vector<InteractionPair> seq;
        for (std::size_t i = 0; i < 3 * w + 5; ++i)
            seq.push_back(s.next_pair(cfg));
        for (std::size_t start = 0; start + w <= seq.size(); ++start)
        {
            std::map<std::pair<std::size_t, std::size_t>, int> seen;
            for (std::size_t i = start; i < start + w; ++i)
                ++seen[key(seq[i])];
            ASSERT_EQ(seen.size(), w) << "n=" << n << " window at " << start;
            for (auto [k, c] : seen)
                ASSERT_EQ(c, 1);
        }
    }
}

TEST(SchedulerNames, RoundTrip)
{
    for (auto k : {SchedulerKind::UniformPair, SchedulerKind::BstOnly, SchedulerKind::RoundRobin, SchedulerKind::WeakAdversarial})
        EXPECT_EQ(parse_scheduler(to_string(k)), k);
    EXPECT_FALSE(parse_scheduler("fair"));
}
