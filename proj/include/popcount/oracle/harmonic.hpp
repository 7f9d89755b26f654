#pragma once

#include "rational.hpp"

#include <stdexcept>

namespace popcount::oracle
{
    // n * H_n, the coupon-collector lower bound on BST interactions.
    inline ExactRational harmonic_bound(unsigned n)
    {
        if (n == 0)
            throw std::invalid_argument("harmonic_bound: n must be >= 1");
        ExactRational h = 0;
        for (unsigned l = 1; l <= n; ++l)
            h += ExactRational(1, l);
        return h * n;
    }
} // namespace popcount::oracle
