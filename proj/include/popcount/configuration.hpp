#pragma once

#include "error.hpp"
#include "protocols.hpp"
#include "state.hpp"

#include <algorithm>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace popcount
{
    using BstState = std::variant<TimeOptBst, FlipBst, GrosBst>;

    constexpr ProtocolId protocol_of(const BstState& bst) noexcept
    {
        switch (bst.index())
        {
        case 0:
            return ProtocolId::TimeOpt;
        case 1:
            return ProtocolId::Flip;
        default:
            return ProtocolId::GrosNaming;
        }
    }

    constexpr MobileTag expected_tag(ProtocolId p) noexcept
    {
        return p == ProtocolId::GrosNaming ? MobileTag::Name : MobileTag::Bit;
    }

    /// BST record plus the ordered vector of mobile states. Indices exist only for
    /// scheduling; no transition reads them.
    struct Configuration
    {
        BstState bst;
        std::vector<MobileState> mobiles;

        std::size_t n() const noexcept { return mobiles.size(); }
        ProtocolId protocol() const noexcept { return protocol_of(bst); }

        template <class Bst>
        Bst& bst_as()
        {
            return std::get<Bst>(bst);
        }
        template <class Bst>
        const Bst& bst_as() const
        {
            return std::get<Bst>(bst);
        }

        friend bool operator==(const Configuration&, const Configuration&) = default;

        // Throws if n == 0, tags are mixed, or a state is out of range.
        void validate() const
        {
            if (mobiles.empty())
                throw std::invalid_argument("configuration needs at least one mobile agent");
            const MobileTag tag = expected_tag(protocol());
            for (std::size_t i = 0; i < mobiles.size(); ++i)
            {
                const MobileState& m = mobiles[i];
                if (m.tag != tag)
                {
                    throw tag_mismatch("mobile " + std::to_string(i) + " is " + std::string(to_string(m.tag)) + ", " +
                                       std::string(to_string(protocol())) + " expects " +
                                       std::string(to_string(tag)));
                }
                if (m.tag == MobileTag::Bit && m.value > 1)
                    throw std::invalid_argument("mobile " + std::to_string(i) + " holds a non-binary mark");
                if (m.tag == MobileTag::Name && m.value >= std::get<GrosBst>(bst).name_bound)
                    throw std::invalid_argument("mobile " + std::to_string(i) + " holds a name >= P");
            }
        }
    };

    inline Configuration make_bit_configuration(ProtocolId protocol, std::span<const unsigned> marks)
    {
        Configuration cfg;
        switch (protocol)
        {
        case ProtocolId::TimeOpt:
            cfg.bst = TimeOptBst{};
            break;
        case ProtocolId::Flip:
            cfg.bst = FlipBst{};
            break;
        case ProtocolId::GrosNaming:
            throw tag_mismatch("gros protocol takes names, not marks");
        }
        cfg.mobiles.reserve(marks.size());
        for (unsigned b : marks)
            cfg.mobiles.push_back(MobileState::bit(b));
        cfg.validate();
        return cfg;
    }

    inline Configuration make_named_configuration(std::span<const std::uint32_t> names, std::uint32_t name_bound)
    {
        Configuration cfg;
        cfg.bst = GrosBst{1, name_bound};
        cfg.mobiles.reserve(names.size());
        for (std::uint32_t s : names)
            cfg.mobiles.push_back(MobileState::name(s));
        cfg.validate();
        return cfg;
    }

    inline std::size_t count_marked(const Configuration& cfg, unsigned b)
    {
        return static_cast<std::size_t>(std::count_if(cfg.mobiles.begin(), cfg.mobiles.end(),
                                                      [b](const MobileState& m) { return m.value == b; }));
    }
} // namespace popcount
