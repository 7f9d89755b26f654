#pragma once

#include "../configuration.hpp"
#include "../engine.hpp"
#include "../error.hpp"
#include "../schedulers.hpp"
#include "invariants.hpp"

#include <cstdint>
#include <map>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

namespace popcount::experiments
{
    struct WorstUnnamedResult
    {
        std::vector<std::uint32_t> worst_start; // reduced name set of the costliest start, ascending
        std::uint64_t worst_non_null = 0;
        std::uint64_t starts_examined = 0;
        std::uint64_t terminal_violations = 0; // runs whose silent end was not n distinct names
        std::uint64_t truncated = 0;           // runs that hit the budget before silence
    };

    inline constexpr std::size_t max_sweep_n = 16;

    // Reduced start for a name set: the names of `mask` ascending, then sink agents.
    inline std::vector<std::uint32_t> reduced_start(std::uint64_t mask, std::size_t n)
    {
        std::vector<std::uint32_t> names;
        names.reserve(n);
        for (std::uint32_t s = 1; s <= 64 && names.size() < n; ++s)
        {
            if ((mask >> (s - 1)) & 1u)
                names.push_back(s);
        }
        names.resize(n, sink_name);
        return names;
    }

    /// Run the weak adversarial execution from every unnamed reduced configuration of
    /// n = P - 1 agents (every proper subset of {1..n} as the set of present names,
    /// remaining agents at the sink) and report the costliest start.
    inline WorstUnnamedResult sweep_worst_unnamed(std::size_t n, std::uint32_t name_bound)
    {
        if (n == 0)
            throw std::invalid_argument("sweep_worst_unnamed: n must be >= 1");
        if (name_bound != n + 1)
            throw std::invalid_argument("sweep_worst_unnamed: requires n = P - 1");
        if (n > max_sweep_n)
            throw intractable("sweep_worst_unnamed enumerates 2^n - 1 starts; n <= " + std::to_string(max_sweep_n));

        const std::uint64_t full = (std::uint64_t{1} << n) - 1;
        const StopCondition stop = StopCondition::silence(std::uint64_t{16} << n, BudgetMetric::NonNull);
        WorstUnnamedResult out;
        for (std::uint64_t mask = 0; mask < full; ++mask)
        {
            Configuration start = make_named_configuration(reduced_start(mask, n), name_bound);
            Scheduler sched(SchedulerKind::WeakAdversarial, mask);
            RunResult r = run(ProtocolId::GrosNaming, sched, std::move(start), stop);
            ++out.starts_examined;
            if (r.status != RunStatus::Converged)
            {
                ++out.truncated;
                continue;
            }
            if (!distinctly_named(r.config))
                ++out.terminal_violations;
            if (r.record.non_null_transitions > out.worst_non_null || out.worst_start.empty())
            {
                out.worst_non_null = r.record.non_null_transitions;
                out.worst_start = reduced_start(mask, n);
                std::erase(out.worst_start, sink_name);
            }
        }
        return out;
    }

    /// Agent vector of the costliest reduced start for (n, P), cached per pair.
    inline std::vector<std::uint32_t> worst_unnamed_configuration(std::size_t n, std::uint32_t name_bound)
    {
        static std::mutex mu;
        static std::map<std::pair<std::size_t, std::uint32_t>, std::vector<std::uint32_t>> cache;
        {
            std::lock_guard lock(mu);
            if (auto it = cache.find({n, name_bound}); it != cache.end())
                return it->second;
        }
        WorstUnnamedResult r = sweep_worst_unnamed(n, name_bound);
        std::vector<std::uint32_t> names = r.worst_start;
        names.resize(n, sink_name);
        std::lock_guard lock(mu);
        cache.emplace(std::make_pair(n, name_bound), names);
        return names;
    }
} // namespace popcount::experiments
