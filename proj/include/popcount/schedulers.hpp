#pragma once

#include "configuration.hpp"
#include "error.hpp"
#include "rng.hpp"
#include "state.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

namespace popcount
{
    enum class SchedulerKind : std::uint8_t
    {
        UniformPair, // uniform over all C(n+1, 2) unordered pairs, BST included
        BstOnly,     // uniform mobile, always paired with BST
        RoundRobin,  // fixed cyclic order over every pair; a weakly fair witness
        WeakAdversarial,
    };

    constexpr std::string_view to_string(SchedulerKind k) noexcept
    {
        switch (k)
        {
        case SchedulerKind::UniformPair:
            return "uniform";
        case SchedulerKind::BstOnly:
            return "bst";
        case SchedulerKind::RoundRobin:
            return "roundrobin";
        case SchedulerKind::WeakAdversarial:
            return "adversarial";
        }
        return "?";
    }

    inline std::optional<SchedulerKind> parse_scheduler(std::string_view s) noexcept
    {
        if (s == "uniform")
            return SchedulerKind::UniformPair;
        if (s == "bst")
            return SchedulerKind::BstOnly;
        if (s == "roundrobin")
            return SchedulerKind::RoundRobin;
        if (s == "adversarial")
            return SchedulerKind::WeakAdversarial;
        return std::nullopt;
    }

    constexpr bool compatible(SchedulerKind k, ProtocolId p) noexcept
    {
        return k != SchedulerKind::WeakAdversarial || p == ProtocolId::GrosNaming;
    }

    constexpr std::uint64_t pair_count(std::uint64_t n) noexcept { return (n + 1) * n / 2; }

    /// Source of interaction pairs for one execution. Single owner; copying a
    /// scheduler forks its random stream and cursor.
    class Scheduler
    {
    public:
        Scheduler(SchedulerKind kind, std::uint64_t seed) : kind_(kind), seed_(seed), rng_(seed) {}

        SchedulerKind kind() const noexcept { return kind_; }
        std::uint64_t seed() const noexcept { return seed_; }

        InteractionPair next_pair(const Configuration& cfg)
        {
            const std::size_t n = cfg.n();
            if (n == 0)
                throw std::invalid_argument("scheduler needs at least one mobile agent");
            switch (kind_)
            {
            case SchedulerKind::BstOnly:
                return InteractionPair::with_bst(rng_.below(n));
            case SchedulerKind::UniformPair:
                return uniform_pair(n);
            case SchedulerKind::RoundRobin:
                return round_robin(n);
            case SchedulerKind::WeakAdversarial:
                return adversarial(cfg);
            }
            return InteractionPair::with_bst(0);
        }

    private:
        InteractionPair uniform_pair(std::size_t n)
        {
            // Ordered draw of two distinct agents among n+1 (index n is BST); each
            // unordered pair is hit by exactly two ordered draws.
            const std::size_t x = rng_.below(n + 1);
            std::size_t y = rng_.below(n);
            if (y >= x)
                ++y;
            if (x == n)
                return InteractionPair::with_bst(y);
            if (y == n)
                return InteractionPair::with_bst(x);
            return InteractionPair::mobiles(std::min(x, y), std::max(x, y));
        }

        // Cycle: (BST,0) .. (BST,n-1), then (i,j) for i < j in lexicographic order.
        InteractionPair round_robin(std::size_t n)
        {
            if (n != rr_n_)
            {
                rr_n_ = n;
                rr_first_ = InteractionPair::bst;
                rr_second_ = 0;
            }
            const InteractionPair out{rr_first_, rr_second_};
            if (rr_first_ == InteractionPair::bst)
            {
                if (++rr_second_ == n)
                {
                    rr_first_ = 0;
                    rr_second_ = 1;
                }
            }
            else if (++rr_second_ == n)
            {
                ++rr_first_;
                rr_second_ = rr_first_ + 1;
            }
            if (rr_first_ != InteractionPair::bst && rr_second_ >= n)
            {
                rr_first_ = InteractionPair::bst;
                rr_second_ = 0;
            }
            return out;
        }

        // BST meets only sink agents; homonyms are reduced whenever no sink agent exists.
        InteractionPair adversarial(const Configuration& cfg)
        {
            if (cfg.protocol() != ProtocolId::GrosNaming)
                throw incompatible_protocol("weak adversarial scheduler drives only the gros protocol");
            const auto& ms = cfg.mobiles;
            const std::size_t n = ms.size();
            for (std::size_t i = 0; i < n; ++i)
            {
                if (ms[i].value == sink_name)
                    return InteractionPair::with_bst(i);
            }
            const std::uint32_t bound = cfg.bst_as<GrosBst>().name_bound;
            if (bound <= (1u << 20))
            {
                seen_.assign(bound, 0);
                for (const MobileState& m : ms)
                    ++seen_[m.value];
                for (std::size_t i = 0; i < n; ++i)
                {
                    if (seen_[ms[i].value] > 1)
                    {
                        for (std::size_t j = i + 1; j < n; ++j)
                        {
                            if (ms[j].value == ms[i].value)
                                return InteractionPair::mobiles(i, j);
                        }
                    }
                }
            }
            else
            {
                for (std::size_t i = 0; i < n; ++i)
                {
                    for (std::size_t j = i + 1; j < n; ++j)
                    {
                        if (ms[j].value == ms[i].value)
                            return InteractionPair::mobiles(i, j);
                    }
                }
            }
            return InteractionPair::with_bst(0);
        }

        SchedulerKind kind_;
        std::uint64_t seed_;
        Rng rng_;
        std::size_t rr_n_ = 0;
        std::size_t rr_first_ = InteractionPair::bst;
        std::size_t rr_second_ = 0;
        std::vector<std::uint32_t> seen_;
    };
} // namespace popcount
