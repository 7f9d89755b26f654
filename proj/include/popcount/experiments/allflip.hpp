#pragma once

#include "../configuration.hpp"
#include "../engine.hpp"
#include "../rng.hpp"
#include "../schedulers.hpp"
#include "invariants.hpp"

#include <cmath>
#include <cstdint>
#include <vector>

namespace popcount::experiments
{
    struct AllFlipEstimate
    {
        double frequency = 0.0;
        // Binomial standard error under p = 1/2, the value the bound is tested against.
        double standard_error = 0.0;
        std::uint64_t successes = 0;
        std::uint64_t trials = 0;
        std::uint64_t truncated = 0;
        InvariantReport invariants;
    };

    /// Start a zero phase with every agent marked 0 and a fresh BST (c0 = c1 = 0),
    /// run under BST-only scheduling until the phase switches, and count the trials in
    /// which every agent carried mark 1 at the switch.
    inline AllFlipEstimate estimate_allflip_probability(std::size_t n, std::uint64_t trials, std::uint64_t seed)
    {
        if (n < 2)
            throw std::invalid_argument("estimate_allflip_probability: n must be >= 2");
        if (trials == 0)
            throw std::invalid_argument("estimate_allflip_probability: trials must be >= 1");

        const double nd = static_cast<double>(n);
        const auto budget = static_cast<std::uint64_t>(
            std::ceil(1024.0 * (6.0 * (nd * std::log(nd) + 1.0) + nd * (std::log(nd) + 1.0))));
        const std::vector<unsigned> zeros(n, 0);
        const Configuration start = make_bit_configuration(ProtocolId::TimeOpt, zeros);

        AllFlipEstimate out;
        out.trials = trials;
        for (std::uint64_t t = 0; t < trials; ++t)
        {
            Configuration cfg = start;
            Scheduler sched(SchedulerKind::BstOnly, derive_seed(seed, t));
            BitInvariantObserver<TimeOpt> obs(cfg, out.invariants);
            RunRecord rec;
            const bool switched = drive<TimeOpt>(sched, cfg, rec, BudgetMetric::Bst, budget,
                                                 [&](const StepEvent& ev, const Configuration& c) {
                                                     obs(ev, c);
                                                     return c.bst_as<TimeOptBst>().phase != 0;
                                                 });
            if (!switched)
                ++out.truncated;
            else if (obs.ones() == n)
                ++out.successes;
        }
        out.frequency = static_cast<double>(out.successes) / static_cast<double>(trials);
        out.standard_error = std::sqrt(0.25 / static_cast<double>(trials));
        return out;
    }
} // namespace popcount::experiments
