#pragma once

#include "rational.hpp"

#include <stdexcept>
#include <vector>

namespace popcount::oracle
{
    /// Expected BST interactions for the flip protocol to take n agents from one
    /// common mark to the other: u_n = 2^(n-1) * sum_{k=0}^{n-1} 1 / C(n-1, k).
    inline ExactRational flip_expected_closed_form(unsigned n)
    {
        if (n == 0)
            throw std::invalid_argument("flip_expected_closed_form: n must be >= 1");
        ExactRational sum = 0;
        for (unsigned k = 0; k < n; ++k)
            sum += ExactRational(BigInt(1), binomial(n - 1, k));
        return sum * ExactRational(BigInt(1) << (n - 1));
    }

    /// Same quantity from the hitting-time system
    ///   t_0 = 0,
    ///   t_k = 1 + (k/n) t_{k-1} + ((n-k)/n) t_{k+1},  1 <= k <= n-1,
    ///   t_n = 1 + t_{n-1},
    /// solved exactly by tridiagonal elimination. Returns t_1..t_n (index 0 holds t_0).
    inline std::vector<ExactRational> flip_hitting_times(unsigned n)
    {
        if (n == 0)
            throw std::invalid_argument("flip_hitting_times: n must be >= 1");
        // Row k (1..n):  -a_k t_{k-1} + t_k - c_k t_{k+1} = 1.
        // Forward sweep keeps t_k = alpha_k + beta_k t_{k+1}.
        std::vector<ExactRational> alpha(n + 1), beta(n + 1);
        alpha[0] = 0;
        beta[0] = 0;
        const ExactRational nn(n);
        for (unsigned k = 1; k <= n; ++k)
        {
            const ExactRational a = k < n ? ExactRational(k) / nn : ExactRational(1);
            const ExactRational c = k < n ? ExactRational(n - k) / nn : ExactRational(0);
            // t_k - a (alpha_{k-1} + beta_{k-1} t_k) - c t_{k+1} = 1
            const ExactRational pivot = 1 - a * beta[k - 1];
            alpha[k] = (1 + a * alpha[k - 1]) / pivot;
            beta[k] = c / pivot;
        }
        std::vector<ExactRational> t(n + 1);
        t[0] = 0;
        t[n] = alpha[n];
        for (unsigned k = n - 1; k >= 1; --k)
            t[k] = alpha[k] + beta[k] * t[k + 1];
        return t;
    }

    inline ExactRational flip_expected_recurrence(unsigned n) { return flip_hitting_times(n)[n]; }
} // namespace popcount::oracle
