#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

namespace popcount::experiments
{
    struct MetricSummary
    {
        double mean = 0.0;
        double stddev = 0.0;
        double standard_error = 0.0;
        std::uint64_t min = 0;
        std::uint64_t max = 0;
        std::size_t trials = 0;

        friend bool operator==(const MetricSummary&, const MetricSummary&) = default;
    };

    // Summary of a sample. Values are sorted first so the result does not depend on
    // the order trials finished in. stddev is the unbiased sample deviation.
    inline MetricSummary summarize(std::vector<std::uint64_t> values)
    {
        MetricSummary s;
        s.trials = values.size();
        if (values.empty())
            return s;
        std::sort(values.begin(), values.end());
        s.min = values.front();
        s.max = values.back();
        long double sum = 0;
        for (std::uint64_t v : values)
            sum += static_cast<long double>(v);
        const long double mean = sum / static_cast<long double>(values.size());
        long double ss = 0;
        for (std::uint64_t v : values)
        {
            const long double d = static_cast<long double>(v) - mean;
            ss += d * d;
        }
        s.mean = static_cast<double>(mean);
        s.stddev = values.size() > 1 ? static_cast<double>(std::sqrt(ss / static_cast<long double>(values.size() - 1))) : 0.0;
        s.standard_error = s.stddev / std::sqrt(static_cast<double>(values.size()));
        // Guard the min <= mean <= max invariant against rounding at the extremes.
        s.mean = std::clamp(s.mean, static_cast<double>(s.min), static_cast<double>(s.max));
        return s;
    }
} // namespace popcount::experiments
