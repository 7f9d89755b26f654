#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace popcount::oracle
{
    using BigInt = boost::multiprecision::cpp_int;
    // Always kept in lowest terms with a positive denominator.
    using ExactRational = boost::multiprecision::cpp_rational;

    inline BigInt binomial(unsigned n, unsigned k)
    {
        if (k > n)
            return 0;
        k = std::min(k, n - k);
        BigInt out = 1;
        for (unsigned i = 1; i <= k; ++i)
        {
            out *= n - k + i;
            out /= i;
        }
        return out;
    }

    inline std::string to_fraction_string(const ExactRational& r)
    {
        using boost::multiprecision::denominator;
        using boost::multiprecision::numerator;
        if (denominator(r) == 1)
            return numerator(r).str();
        return numerator(r).str() + "/" + denominator(r).str();
    }

    /// Decimal rendering with `digits` significant digits, rounded half away from zero.
    inline std::string to_decimal_string(const ExactRational& r, unsigned digits = 20)
    {
        using boost::multiprecision::denominator;
        using boost::multiprecision::numerator;
        if (digits == 0)
            throw std::invalid_argument("to_decimal_string: need at least one digit");
        BigInt num = numerator(r);
        const BigInt den = denominator(r);
        const bool negative = num < 0;
        if (negative)
            num = -num;
        if (num == 0)
            return "0";

        // Find e with 10^(digits-1) <= num * 10^e / den < 10^digits.
        const BigInt lo = boost::multiprecision::pow(BigInt(10), digits - 1);
        const BigInt hi = lo * 10;
        long e = 0;
        BigInt scaled_num = num;
        BigInt scaled_den = den;
        while (scaled_num / scaled_den >= hi)
        {
            scaled_den *= 10;
            --e;
        }
        while (scaled_num / scaled_den < lo)
        {
            scaled_num *= 10;
            ++e;
        }
        BigInt q = scaled_num / scaled_den;
        const BigInt rem = scaled_num % scaled_den;
        if (rem * 2 >= scaled_den)
            ++q;
        if (q == hi)
        {
            q /= 10;
            --e;
        }

        std::string d = q.str();
        std::string out;
        if (e <= 0)
        {
            // Integer value: digits followed by -e zeros.
            out = d + std::string(static_cast<std::size_t>(-e), '0');
        }
        else if (static_cast<std::size_t>(e) < d.size())
        {
            out = d.substr(0, d.size() - static_cast<std::size_t>(e)) + "." + d.substr(d.size() - static_cast<std::size_t>(e));
        }
        else
        {
            out = "0." + std::string(static_cast<std::size_t>(e) - d.size(), '0') + d;
        }
        // Trim trailing fractional zeros.
        if (out.find('.') != std::string::npos)
        {
            while (out.back() == '0')
                out.pop_back();
            if (out.back() == '.')
                out.pop_back();
        }
        return negative ? "-" + out : out;
    }

    inline double to_double(const ExactRational& r) { return r.convert_to<double>(); }
} // namespace popcount::oracle
