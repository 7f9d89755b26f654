#pragma once

#include "error.hpp"

#include <compare>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>

namespace popcount
{
    enum class ProtocolId : std::uint8_t
    {
        TimeOpt,
        Flip,
        GrosNaming,
    };

    constexpr std::string_view to_string(ProtocolId p) noexcept
    {
        switch (p)
        {
        case ProtocolId::TimeOpt:
            return "timeopt";
        case ProtocolId::Flip:
            return "flip";
        case ProtocolId::GrosNaming:
            return "gros";
        }
        return "?";
    }

    inline std::optional<ProtocolId> parse_protocol(std::string_view s) noexcept
    {
        if (s == "timeopt")
            return ProtocolId::TimeOpt;
        if (s == "flip")
            return ProtocolId::Flip;
        if (s == "gros")
            return ProtocolId::GrosNaming;
        return std::nullopt;
    }

    enum class MobileTag : std::uint8_t
    {
        Bit,
        Name,
    };

    constexpr std::string_view to_string(MobileTag t) noexcept { return t == MobileTag::Bit ? "Bit" : "Name"; }

    // The sink state m of the naming protocol.
    inline constexpr std::uint32_t sink_name = 0;

    // State of one anonymous mobile agent: a one-bit mark, or a name where 0 is the sink.
    struct MobileState
    {
        MobileTag tag = MobileTag::Bit;
        std::uint32_t value = 0;

        static constexpr MobileState bit(unsigned b) noexcept { return {MobileTag::Bit, b & 1u}; }
        static constexpr MobileState name(std::uint32_t s) noexcept { return {MobileTag::Name, s}; }

        constexpr bool is_bit() const noexcept { return tag == MobileTag::Bit; }
        constexpr bool is_sink() const noexcept { return tag == MobileTag::Name && value == sink_name; }

        friend constexpr auto operator<=>(const MobileState&, const MobileState&) = default;
    };

    // An interaction between two agents. BST, when present, is always `first`.
    struct InteractionPair
    {
        static constexpr std::size_t bst = std::numeric_limits<std::size_t>::max();

        std::size_t first = bst;
        std::size_t second = 0;

        static constexpr InteractionPair with_bst(std::size_t mobile) noexcept { return {bst, mobile}; }
        static constexpr InteractionPair mobiles(std::size_t a, std::size_t b) noexcept { return {a, b}; }

        constexpr bool involves_bst() const noexcept { return first == bst; }

        friend constexpr bool operator==(const InteractionPair&, const InteractionPair&) = default;
    };

    inline std::string to_string(const InteractionPair& p)
    {
        if (p.involves_bst())
            return "(BST," + std::to_string(p.second) + ")";
        return "(" + std::to_string(p.first) + "," + std::to_string(p.second) + ")";
    }
} // namespace popcount
