#pragma once

#include "../configuration.hpp"
#include "../engine.hpp"

#include <cstdint>
#include <string>

namespace popcount::experiments
{
    /// Violation counters for the protocol invariants checked during simulation.
    struct InvariantReport
    {
        std::uint64_t steps_checked = 0;
        std::uint64_t estimate_decreased = 0;  // c went down
        std::uint64_t estimate_exceeds_n = 0;  // c > n
        std::uint64_t count_exceeds_marks = 0; // c_b > n_b
        std::uint64_t phase_start_nonzero = 0; // phase left b while c_b > 0
        std::uint64_t flip_structure = 0;      // c = n reached without the all-opposite / all-same pattern
        std::uint64_t terminal_naming = 0;     // silent configuration without n distinct nonzero names

        std::uint64_t violations() const noexcept
        {
            return estimate_decreased + estimate_exceeds_n + count_exceeds_marks + phase_start_nonzero +
                   flip_structure + terminal_naming;
        }

        InvariantReport& operator+=(const InvariantReport& o) noexcept
        {
            steps_checked += o.steps_checked;
            estimate_decreased += o.estimate_decreased;
            estimate_exceeds_n += o.estimate_exceeds_n;
            count_exceeds_marks += o.count_exceeds_marks;
            phase_start_nonzero += o.phase_start_nonzero;
            flip_structure += o.flip_structure;
            terminal_naming += o.terminal_naming;
            return *this;
        }

        friend bool operator==(const InvariantReport&, const InvariantReport&) = default;
    };

    /// Step observer for the one-bit protocols. Tracks the true mark counts
    /// incrementally and checks soundness and monotonicity after every interaction.
    template <class P>
    class BitInvariantObserver
    {
    public:
        BitInvariantObserver(const Configuration& start, InvariantReport& report)
            : report_(report), n_(start.n()), ones_(count_marked(start, 1))
        {
            const auto& bst = start.bst_as<typename P::bst_type>();
            last_c_ = bst.c;
            if constexpr (std::is_same_v<P, TimeOpt>)
                last_phase_ = bst.phase;
            seen_all_[0] = ones_ == 0;
            seen_all_[1] = ones_ == n_;
        }

        void operator()(const StepEvent& ev, const Configuration& cfg)
        {
            ++report_.steps_checked;
            if (ev.pair.involves_bst())
            {
                const unsigned before = ev.before[1].value;
                const unsigned after = cfg.mobiles[ev.pair.second].value;
                if (before != after)
                    ones_ = after == 1 ? ones_ + 1 : ones_ - 1;
            }
            const auto& bst = cfg.bst_as<typename P::bst_type>();
            if (bst.c < last_c_)
                ++report_.estimate_decreased;
            if (bst.c > n_)
                ++report_.estimate_exceeds_n;
            if (bst.c1 > ones_ || bst.c0 > n_ - ones_)
                ++report_.count_exceeds_marks;
            if constexpr (std::is_same_v<P, TimeOpt>)
            {
                if (bst.phase != last_phase_)
                {
                    ++phase_switches_;
                    if (bst.count(last_phase_) != 0)
                        ++report_.phase_start_nonzero;
                    last_phase_ = bst.phase;
                }
            }
            if constexpr (std::is_same_v<P, Flip>)
            {
                if (bst.c == n_ && last_c_ < n_)
                {
                    const bool all_same = ones_ == 0 || ones_ == n_;
                    const unsigned mark = ones_ == n_ ? 1u : 0u;
                    if (!all_same || !seen_all_[1 - mark])
                        ++report_.flip_structure;
                }
                if (ones_ == 0)
                    seen_all_[0] = true;
                if (ones_ == n_)
                    seen_all_[1] = true;
            }
            last_c_ = bst.c;
        }

        std::uint64_t phase_switches() const noexcept { return phase_switches_; }
        std::size_t ones() const noexcept { return ones_; }

    private:
        InvariantReport& report_;
        std::size_t n_;
        std::size_t ones_;
        std::uint64_t last_c_ = 0;
        unsigned last_phase_ = 0;
        std::uint64_t phase_switches_ = 0;
        bool seen_all_[2] = {false, false};
    };

    // True iff all n names are distinct and nonzero.
    inline bool distinctly_named(const Configuration& cfg)
    {
        std::vector<std::uint32_t> names;
        names.reserve(cfg.n());
        for (const MobileState& m : cfg.mobiles)
        {
            if (m.value == sink_name)
                return false;
            names.push_back(m.value);
        }
        std::sort(names.begin(), names.end());
        return std::adjacent_find(names.begin(), names.end()) == names.end();
    }
} // namespace popcount::experiments
