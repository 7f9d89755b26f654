#pragma once

#include "../error.hpp"

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace popcount::oracle
{
    // k-th term (1-based) of the Gros sequence U_n = U_{n-1}, n, U_{n-1}; U_1 = 1.
    // The term is one more than the number of trailing zero bits of k (the ruler function).
    constexpr std::uint32_t gros_term(std::uint64_t k)
    {
        if (k == 0)
            throw std::invalid_argument("gros_term: index is 1-based");
        return static_cast<std::uint32_t>(std::countr_zero(k)) + 1;
    }

    // Number of terms in U_n, i.e. 2^n - 1.
    constexpr std::uint64_t gros_length(unsigned n)
    {
        if (n == 0)
            throw std::invalid_argument("gros_length: n must be >= 1");
        if (n >= 64)
            throw std::overflow_error("gros_length: 2^" + std::to_string(n) + " - 1 does not fit in 64 bits");
        return (std::uint64_t{1} << n) - 1;
    }

    /// U_n built literally from the recurrence U_n = U_{n-1}, n, U_{n-1}.
    /// Independent of gros_term; exponential in n.
    inline std::vector<std::uint32_t> expand_gros_sequence(unsigned n)
    {
        if (n == 0)
            throw std::invalid_argument("expand_gros_sequence: n must be >= 1");
        if (n > 24)
            throw std::invalid_argument("expand_gros_sequence: n > 24 would not fit in memory comfortably");
        std::vector<std::uint32_t> u{1};
        for (std::uint32_t level = 2; level <= n; ++level)
        {
            std::vector<std::uint32_t> next;
            next.reserve(2 * u.size() + 1);
            next.insert(next.end(), u.begin(), u.end());
            next.push_back(level);
            next.insert(next.end(), u.begin(), u.end());
            u = std::move(next);
        }
        return u;
    }
} // namespace popcount::oracle
