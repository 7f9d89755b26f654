#pragma once

#include "error.hpp"
#include "oracle/gros.hpp"
#include "state.hpp"

#include <cmath>
#include <cstdint>
#include <string>
#include <utility>

namespace popcount
{
    /// Base-station record of the phased one-bit counting protocol.
    ///
    /// `c0`/`c1` are lower bounds on the number of agents carrying each mark,
    /// `c` is the size estimate, and `cnt` is the length of the current streak of
    /// agents marked `1 - phase` seen while `c_phase == 0`.
    struct TimeOptBst
    {
        std::uint64_t c0 = 0;
        std::uint64_t c1 = 0;
        std::uint64_t c = 0;
        std::uint64_t cnt = 0;
        unsigned phase = 0;

        std::uint64_t& count(unsigned b) noexcept { return b == 0 ? c0 : c1; }
        std::uint64_t count(unsigned b) const noexcept { return b == 0 ? c0 : c1; }

        friend bool operator==(const TimeOptBst&, const TimeOptBst&) = default;
    };

    /// Base-station record of the original one-bit flip protocol.
    struct FlipBst
    {
        std::uint64_t c0 = 0;
        std::uint64_t c1 = 0;
        std::uint64_t c = 0;

        std::uint64_t& count(unsigned b) noexcept { return b == 0 ? c0 : c1; }
        std::uint64_t count(unsigned b) const noexcept { return b == 0 ? c0 : c1; }

        friend bool operator==(const FlipBst&, const FlipBst&) = default;
    };

    /// Base-station record of the naming protocol: the 1-based position of the next
    /// name to hand out, and the state bound P (names 1..P-1, sink 0).
    struct GrosBst
    {
        std::uint64_t k = 1;
        std::uint32_t name_bound = 2;

        // Last index whose Gros term is still a valid name, 2^(P-1) - 1.
        std::uint64_t last_index() const noexcept
        {
            return name_bound - 1 >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << (name_bound - 1)) - 1;
        }

        friend bool operator==(const GrosBst&, const GrosBst&) = default;
    };

    template <class Bst, class Agent>
    struct StepResult
    {
        Bst bst;
        Agent agent;

        friend bool operator==(const StepResult&, const StepResult&) = default;
    };

    /// Streak length 6(c ln c + 1) after which the phased protocol switches phase.
    /// Uses 0 ln 0 = 0, so counts 0 and 1 both give 6.
    inline double streak_threshold(std::uint64_t c) noexcept
    {
        const double x = static_cast<double>(c);
        const double x_ln_x = c <= 1 ? 0.0 : x * std::log(x);
        return 6.0 * (x_ln_x + 1.0);
    }

    // In-place transition of the phased protocol; returns true when anything changed.
    inline bool timeopt_apply(TimeOptBst& s, unsigned& b) noexcept
    {
        const TimeOptBst before = s;
        const unsigned mark = b;
        if (mark == s.phase)
        {
            s.cnt = 0;
            if (s.count(mark) > 0)
                --s.count(mark);
            b = 1 - mark;
            ++s.count(b);
        }
        else if (static_cast<double>(s.cnt) >= streak_threshold(s.count(mark)))
        {
            s.cnt = 0;
            s.phase = 1 - s.phase;
        }
        else if (s.count(s.phase) == 0)
        {
            ++s.cnt;
        }
        s.c = s.c0 + s.c1;
        return b != mark || !(s == before);
    }

    inline bool flip_apply(FlipBst& s, unsigned& b) noexcept
    {
        if (s.count(b) > 0)
            --s.count(b);
        b = 1 - b;
        ++s.count(b);
        s.c = s.c0 + s.c1;
        return true;
    }

    // In-place naming transition between BST and an agent named `s`.
    inline bool gros_apply(GrosBst& bst, std::uint32_t& s)
    {
        if (s != sink_name)
            return false;
        if (bst.k > bst.last_index())
        {
            throw name_overflow("naming step " + std::to_string(bst.k) + " exceeds the last valid name for P = " +
                                std::to_string(bst.name_bound));
        }
        s = oracle::gros_term(bst.k);
        ++bst.k;
        return true;
    }

    inline bool gros_mobile_apply(std::uint32_t& s1, std::uint32_t& s2) noexcept
    {
        if (s1 != s2 || s1 == sink_name)
            return false;
        s1 = sink_name;
        s2 = sink_name;
        return true;
    }

    inline StepResult<TimeOptBst, unsigned> timeopt_step(TimeOptBst bst, unsigned b) noexcept
    {
        b &= 1u;
        timeopt_apply(bst, b);
        return {bst, b};
    }

    inline StepResult<FlipBst, unsigned> flip_step(FlipBst bst, unsigned b) noexcept
    {
        b &= 1u;
        flip_apply(bst, b);
        return {bst, b};
    }

    inline StepResult<GrosBst, std::uint32_t> gros_bst_step(GrosBst bst, std::uint32_t s)
    {
        gros_apply(bst, s);
        return {bst, s};
    }

    inline std::pair<std::uint32_t, std::uint32_t> gros_mobile_step(std::uint32_t s1, std::uint32_t s2) noexcept
    {
        gros_mobile_apply(s1, s2);
        return {s1, s2};
    }

    // Protocol policies consumed by the engine. Each exposes the BST record type, the
    // mobile tag it expects, and the two in-place transition functions.

    struct TimeOpt
    {
        using bst_type = TimeOptBst;
        static constexpr ProtocolId id = ProtocolId::TimeOpt;
        static constexpr MobileTag tag = MobileTag::Bit;
        static constexpr bool has_count = true;

        static bool interact_bst(bst_type& bst, MobileState& m) noexcept { return timeopt_apply(bst, m.value); }
        static bool interact_mobiles(MobileState&, MobileState&) noexcept { return false; }
        static std::uint64_t count(const bst_type& bst) noexcept { return bst.c; }
    };

    struct Flip
    {
        using bst_type = FlipBst;
        static constexpr ProtocolId id = ProtocolId::Flip;
        static constexpr MobileTag tag = MobileTag::Bit;
        static constexpr bool has_count = true;

        static bool interact_bst(bst_type& bst, MobileState& m) noexcept { return flip_apply(bst, m.value); }
        static bool interact_mobiles(MobileState&, MobileState&) noexcept { return false; }
        static std::uint64_t count(const bst_type& bst) noexcept { return bst.c; }
    };

    struct GrosNaming
    {
        using bst_type = GrosBst;
        static constexpr ProtocolId id = ProtocolId::GrosNaming;
        static constexpr MobileTag tag = MobileTag::Name;
        static constexpr bool has_count = false;

        static bool interact_bst(bst_type& bst, MobileState& m) { return gros_apply(bst, m.value); }
        static bool interact_mobiles(MobileState& a, MobileState& b) noexcept
        {
            return gros_mobile_apply(a.value, b.value);
        }
    };
} // namespace popcount
