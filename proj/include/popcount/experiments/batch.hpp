#pragma once

#include "../configuration.hpp"
#include "../engine.hpp"
#include "../error.hpp"
#include "../oracle/flip.hpp"
#include "../rng.hpp"
#include "../schedulers.hpp"
#include "invariants.hpp"
#include "stats.hpp"
#include "weak_sweep.hpp"

#include <cmath>
#include <cstdint>
#include <exception>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

namespace popcount::experiments
{
    enum class InitPolicy : std::uint8_t
    {
        AllZero,
        AllOne,
        UniformRandomMarks,
        WorstCaseUnnamed, // naming protocol only: the reduced start that costs the most non-null transitions
        ExplicitVector,
    };

    constexpr std::string_view to_string(InitPolicy p) noexcept
    {
        switch (p)
        {
        case InitPolicy::AllZero:
            return "zeros";
        case InitPolicy::AllOne:
            return "ones";
        case InitPolicy::UniformRandomMarks:
            return "random";
        case InitPolicy::WorstCaseUnnamed:
            return "worst";
        case InitPolicy::ExplicitVector:
            return "vector";
        }
        return "?";
    }

    struct TrialBatchSpec
    {
        ProtocolId protocol = ProtocolId::Flip;
        std::size_t n = 1;
        std::size_t trials = 1;
        SchedulerKind scheduler = SchedulerKind::BstOnly;
        std::uint64_t base_seed = 0;
        InitPolicy init = InitPolicy::AllZero;
        std::vector<std::uint32_t> explicit_states; // ExplicitVector only
        std::optional<StopCondition> stop;          // default: see default_stop()
        std::optional<std::uint32_t> name_bound;    // P for the naming protocol; default n + 1
        unsigned threads = 1;

        std::uint32_t effective_name_bound() const
        {
            return name_bound.value_or(static_cast<std::uint32_t>(n + 1));
        }

        void validate() const
        {
            if (n == 0)
                throw std::invalid_argument("batch: n must be >= 1");
            if (trials == 0)
                throw std::invalid_argument("batch: trials must be >= 1");
            if (!compatible(scheduler, protocol))
                throw incompatible_protocol("adversarial scheduler requires the gros protocol");
            if (init == InitPolicy::WorstCaseUnnamed && protocol != ProtocolId::GrosNaming)
                throw std::invalid_argument("worst-case unnamed start exists only for the gros protocol");
            if (init == InitPolicy::AllOne && protocol == ProtocolId::GrosNaming)
                throw std::invalid_argument("all-ones start is a mark policy; gros agents carry names");
            if (init == InitPolicy::ExplicitVector && explicit_states.size() != n)
                throw std::invalid_argument("explicit start vector has " + std::to_string(explicit_states.size()) +
                                            " entries, n = " + std::to_string(n));
            if (protocol == ProtocolId::GrosNaming && effective_name_bound() < n + 1)
                throw std::invalid_argument("name bound P must be >= n + 1");
            if (init == InitPolicy::ExplicitVector)
            {
                const std::uint32_t limit = protocol == ProtocolId::GrosNaming ? effective_name_bound() : 2;
                for (std::uint32_t v : explicit_states)
                {
                    if (v >= limit)
                        throw std::invalid_argument("explicit start value " + std::to_string(v) + " out of range (< " +
                                                    std::to_string(limit) + ")");
                }
            }
            if (stop)
                stop->validate();
        }
    };

    struct Summary
    {
        MetricSummary bst_interactions;
        MetricSummary total_interactions;
        MetricSummary non_null_transitions;
        std::size_t converged = 0;
        std::size_t non_converged = 0;

        friend bool operator==(const Summary&, const Summary&) = default;
    };

    struct TrialResult
    {
        RunRecord record;
        std::uint64_t phase_switches = 0; // phased protocol only, kept for inspection

        friend bool operator==(const TrialResult&, const TrialResult&) = default;
    };

    struct BatchResult
    {
        Summary summary;
        std::vector<TrialResult> trials;
        InvariantReport invariants;
    };

    /// Interaction budget used when a batch has no explicit stop condition. Each is at
    /// least an order of magnitude above the expected convergence time.
    inline StopCondition default_stop(ProtocolId protocol, std::size_t n)
    {
        const double nd = static_cast<double>(n);
        switch (protocol)
        {
        case ProtocolId::Flip:
        {
            const double u = n <= 1000 ? oracle::to_double(oracle::flip_expected_closed_form(static_cast<unsigned>(n)))
                                       : std::ldexp(1.0, 62);
            return StopCondition::count_reaches_n(static_cast<std::uint64_t>(std::min(64.0 * u + 64.0, std::ldexp(1.0, 62))),
                                                  BudgetMetric::Bst);
        }
        case ProtocolId::TimeOpt:
            return StopCondition::count_reaches_n(static_cast<std::uint64_t>(std::ceil(64.0 * nd * std::log(nd + 1.0))),
                                                  BudgetMetric::Bst);
        case ProtocolId::GrosNaming:
            break;
        }
        const double budget = n >= 58 ? std::ldexp(1.0, 62) : 16.0 * std::ldexp(1.0, static_cast<int>(n));
        return StopCondition::silence(static_cast<std::uint64_t>(budget), BudgetMetric::NonNull);
    }

    inline Configuration initial_configuration(const TrialBatchSpec& spec, Rng& rng)
    {
        const std::size_t n = spec.n;
        if (spec.protocol == ProtocolId::GrosNaming)
        {
            const std::uint32_t bound = spec.effective_name_bound();
            std::vector<std::uint32_t> names(n, sink_name);
            switch (spec.init)
            {
            case InitPolicy::AllZero:
                break;
            case InitPolicy::UniformRandomMarks:
                for (auto& s : names)
                    s = static_cast<std::uint32_t>(rng.below(bound));
                break;
            case InitPolicy::WorstCaseUnnamed:
                names = worst_unnamed_configuration(n, bound);
                break;
            case InitPolicy::ExplicitVector:
                names = spec.explicit_states;
                break;
            case InitPolicy::AllOne:
                throw std::invalid_argument("all-ones start is not defined for names");
            }
            return make_named_configuration(names, bound);
        }
        std::vector<unsigned> marks(n, 0);
        switch (spec.init)
        {
        case InitPolicy::AllZero:
            break;
        case InitPolicy::AllOne:
            std::fill(marks.begin(), marks.end(), 1u);
            break;
        case InitPolicy::UniformRandomMarks:
            for (auto& b : marks)
                b = rng.coin() ? 1u : 0u;
            break;
        case InitPolicy::ExplicitVector:
            for (std::size_t i = 0; i < n; ++i)
                marks[i] = spec.explicit_states[i];
            break;
        case InitPolicy::WorstCaseUnnamed:
            throw std::invalid_argument("worst-case unnamed start is defined only for names");
        }
        return make_bit_configuration(spec.protocol, marks);
    }

    /// One trial of a batch. Seeds are split from the base seed by trial index, so a
    /// trial is reproducible on its own.
    inline TrialResult run_trial(const TrialBatchSpec& spec, std::size_t index, InvariantReport& report)
    {
        const std::uint64_t trial_seed = derive_seed(spec.base_seed, index);
        Rng init_rng(derive_seed(trial_seed, 1));
        Configuration start = initial_configuration(spec, init_rng);
        Scheduler sched(spec.scheduler, derive_seed(trial_seed, 0));
        const StopCondition stop = spec.stop.value_or(default_stop(spec.protocol, spec.n));

        TrialResult out;
        switch (spec.protocol)
        {
        case ProtocolId::TimeOpt:
        {
            BitInvariantObserver<TimeOpt> obs(start, report);
            out.record = run(spec.protocol, sched, std::move(start), stop, obs).record;
            out.phase_switches = obs.phase_switches();
            break;
        }
        case ProtocolId::Flip:
        {
            BitInvariantObserver<Flip> obs(start, report);
            out.record = run(spec.protocol, sched, std::move(start), stop, obs).record;
            break;
        }
        case ProtocolId::GrosNaming:
        {
            RunResult r = run(spec.protocol, sched, std::move(start), stop);
            if (r.status == RunStatus::Converged && !distinctly_named(r.config))
                ++report.terminal_naming;
            out.record = r.record;
            break;
        }
        }
        return out;
    }

    inline Summary summarize_trials(const std::vector<TrialResult>& trials)
    {
        std::vector<std::uint64_t> bst, total, non_null;
        Summary s;
        for (const TrialResult& t : trials)
        {
            if (!t.record.converged())
            {
                ++s.non_converged;
                continue;
            }
            ++s.converged;
            bst.push_back(*t.record.converged_at_bst_interaction);
            total.push_back(*t.record.converged_at_total);
            non_null.push_back(*t.record.converged_at_non_null);
        }
        s.bst_interactions = summarize(std::move(bst));
        s.total_interactions = summarize(std::move(total));
        s.non_null_transitions = summarize(std::move(non_null));
        return s;
    }

    /// Run `spec.trials` seeded trials. Trials may run on `spec.threads` threads; the
    /// result is identical for any thread count.
    inline BatchResult run_batch(const TrialBatchSpec& spec)
    {
        spec.validate();
        if (spec.init == InitPolicy::WorstCaseUnnamed)
            (void)worst_unnamed_configuration(spec.n, spec.effective_name_bound()); // warm the cache once

        BatchResult out;
        out.trials.resize(spec.trials);
        const unsigned threads = std::max(1u, std::min<unsigned>(spec.threads, static_cast<unsigned>(spec.trials)));
        std::vector<InvariantReport> reports(threads);
        std::vector<std::exception_ptr> errors(threads);

        auto work = [&](unsigned w) {
            try
            {
                for (std::size_t i = w; i < spec.trials; i += threads)
                    out.trials[i] = run_trial(spec, i, reports[w]);
            }
            catch (...)
            {
                errors[w] = std::current_exception();
            }
        };
        if (threads == 1)
        {
            work(0);
        }
        else
        {
            std::vector<std::jthread> pool;
            for (unsigned w = 0; w < threads; ++w)
                pool.emplace_back(work, w);
        }
        for (const auto& e : errors)
        {
            if (e)
                std::rethrow_exception(e);
        }
        for (const auto& r : reports)
            out.invariants += r;
        out.summary = summarize_trials(out.trials);
        if (out.summary.converged == 0)
        {
            throw all_trials_truncated("none of " + std::to_string(spec.trials) + " trials of " +
                                       std::string(to_string(spec.protocol)) + " at n = " + std::to_string(spec.n) +
                                       " converged within budget");
        }
        return out;
    }

    /// One batch per n, with per-n base seeds split from the template's seed.
    inline std::vector<std::pair<std::size_t, BatchResult>> sweep_n(const TrialBatchSpec& tmpl,
                                                                    const std::vector<std::size_t>& n_values)
    {
        if (n_values.empty())
            throw std::invalid_argument("sweep_n: no n values");
        for (std::size_t i = 1; i < n_values.size(); ++i)
        {
            if (n_values[i] <= n_values[i - 1])
                throw std::invalid_argument("sweep_n: n values must be strictly ascending");
        }
        std::vector<std::pair<std::size_t, BatchResult>> out;
        out.reserve(n_values.size());
        for (std::size_t n : n_values)
        {
            TrialBatchSpec spec = tmpl;
            spec.n = n;
            spec.base_seed = derive_seed(tmpl.base_seed, n);
            if (!tmpl.name_bound)
                spec.name_bound.reset();
            out.emplace_back(n, run_batch(spec));
        }
        return out;
    }
} // namespace popcount::experiments
