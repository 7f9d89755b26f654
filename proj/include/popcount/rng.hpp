#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <string_view>

namespace popcount
{
    // Recorded in every output row so a run can be replayed bit-exactly.
    inline constexpr std::string_view rng_algorithm_id = "mt19937_64+splitmix64/v1";

    // One round of SplitMix64 (Steele, Lea, Flood). Used only for seed derivation.
    constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept
    {
        x += 0x9E3779B97F4A7C15ULL;
        x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
        x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
        return x ^ (x >> 31);
    }

    // Independent child seed for stream `index` of `base`.
    constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) noexcept
    {
        return splitmix64(splitmix64(base) ^ splitmix64(index * 0xD1B54A32D192ED03ULL + 1));
    }

    // Seeded 64-bit generator with a platform-independent bounded draw.
    // std::uniform_int_distribution is implementation-defined, so it is not used here.
    class Rng
    {
    public:
        explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

        std::uint64_t next() { return engine_(); }

        // Uniform integer in [0, bound). bound must be positive.
        std::uint64_t below(std::uint64_t bound)
        {
            const std::uint64_t reject_under = (std::numeric_limits<std::uint64_t>::max() - bound + 1) % bound;
            for (;;)
            {
                const std::uint64_t x = engine_();
                if (x >= reject_under)
                {
                    return x % bound;
                }
            }
        }

        bool coin() { return (engine_() >> 63) != 0; }

    private:
        std::mt19937_64 engine_;
    };
} // namespace popcount
