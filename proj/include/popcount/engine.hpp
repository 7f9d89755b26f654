#pragma once

#include "configuration.hpp"
#include "error.hpp"
#include "protocols.hpp"
#include "schedulers.hpp"
#include "state.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

namespace popcount
{
    struct InteractionOutcome
    {
        Configuration config;
        bool non_null = false;
        bool involved_bst = false;
    };

    struct RunRecord
    {
        std::uint64_t total_interactions = 0;
        std::uint64_t bst_interactions = 0;
        std::uint64_t non_null_transitions = 0;
        std::optional<std::uint64_t> converged_at_bst_interaction;
        std::optional<std::uint64_t> converged_at_non_null;
        std::optional<std::uint64_t> converged_at_total;
        // Size estimate c for the counting protocols; for the naming protocol, the
        // number of agents holding a name no other agent holds.
        std::uint64_t final_c = 0;

        bool converged() const noexcept { return converged_at_total.has_value(); }

        friend bool operator==(const RunRecord&, const RunRecord&) = default;
    };

    enum class StopKind : std::uint8_t
    {
        CountReachesN, // halt when BST's estimate equals n
        Silence,       // halt when no pair can change any state
        MaxInteractions,
    };

    enum class BudgetMetric : std::uint8_t
    {
        Total,
        Bst,
        NonNull,
    };

    /// When to stop a run. `budget` caps the chosen metric for every kind; for
    /// MaxInteractions it is the bound itself (total interactions).
    struct StopCondition
    {
        StopKind kind = StopKind::CountReachesN;
        BudgetMetric metric = BudgetMetric::Total;
        std::uint64_t budget = 0;

        static StopCondition count_reaches_n(std::uint64_t budget, BudgetMetric metric = BudgetMetric::Total)
        {
            return {StopKind::CountReachesN, metric, budget};
        }
        static StopCondition silence(std::uint64_t budget, BudgetMetric metric = BudgetMetric::Total)
        {
            return {StopKind::Silence, metric, budget};
        }
        static StopCondition max_interactions(std::uint64_t bound) { return {StopKind::MaxInteractions, BudgetMetric::Total, bound}; }

        void validate() const
        {
            if (budget == 0)
                throw std::invalid_argument("stop condition needs a positive interaction budget");
        }
    };

    enum class RunStatus : std::uint8_t
    {
        Converged,
        BudgetExhausted,
    };

    struct RunResult
    {
        Configuration config;
        RunRecord record;
        RunStatus status = RunStatus::Converged;
    };

    /// What an observer sees after each interaction: the pair, whether it was
    /// non-null, and the pre-interaction states of the mobiles involved
    /// (`before[0]` is unused for BST pairs).
    struct StepEvent
    {
        InteractionPair pair;
        bool non_null = false;
        MobileState before[2];
    };

    struct NullObserver
    {
        void operator()(const StepEvent&, const Configuration&) const noexcept {}
    };

    namespace detail
    {
        inline void check_pair(const InteractionPair& p, std::size_t n)
        {
            if (p.involves_bst())
            {
                if (p.second >= n)
                    throw invalid_pair("mobile index " + std::to_string(p.second) + " out of range for n = " + std::to_string(n));
                return;
            }
            if (p.first >= n || p.second >= n)
                throw invalid_pair("pair " + to_string(p) + " out of range for n = " + std::to_string(n));
            if (p.first == p.second)
                throw invalid_pair("pair " + to_string(p) + " names one agent twice");
        }

        inline void check_tags(ProtocolId protocol, const Configuration& cfg)
        {
            if (cfg.protocol() != protocol)
            {
                throw tag_mismatch("configuration belongs to " + std::string(to_string(cfg.protocol())) + ", not " +
                                   std::string(to_string(protocol)));
            }
            const MobileTag tag = expected_tag(protocol);
            for (const MobileState& m : cfg.mobiles)
            {
                if (m.tag != tag)
                {
                    throw tag_mismatch(std::string(to_string(protocol)) + " expects " + std::string(to_string(tag)) +
                                       " states, found " + std::string(to_string(m.tag)));
                }
            }
        }

        // Apply one interaction in place. Assumes the pair and tags were validated.
        template <class P>
        bool step(typename P::bst_type& bst, std::vector<MobileState>& ms, const InteractionPair& p)
        {
            if (p.involves_bst())
                return P::interact_bst(bst, ms[p.second]);
            return P::interact_mobiles(ms[p.first], ms[p.second]);
        }

        // Naming protocol: silent iff no sink agent and no two agents share a name.
        inline bool gros_quiescent(const std::vector<MobileState>& ms, std::vector<std::uint8_t>& scratch,
                                   std::uint32_t name_bound)
        {
            if (name_bound > (1u << 20))
            {
                for (std::size_t i = 0; i < ms.size(); ++i)
                {
                    if (ms[i].value == sink_name)
                        return false;
                    for (std::size_t j = i + 1; j < ms.size(); ++j)
                    {
                        if (ms[i].value == ms[j].value)
                            return false;
                    }
                }
                return true;
            }
            scratch.assign(name_bound, 0);
            for (const MobileState& m : ms)
            {
                if (m.value == sink_name || scratch[m.value]++ != 0)
                    return false;
            }
            return true;
        }

        inline std::uint64_t unique_names(const std::vector<MobileState>& ms)
        {
            std::uint64_t out = 0;
            for (std::size_t i = 0; i < ms.size(); ++i)
            {
                if (ms[i].value == sink_name)
                    continue;
                bool alone = true;
                for (std::size_t j = 0; j < ms.size() && alone; ++j)
                    alone = i == j || ms[j].value != ms[i].value;
                out += alone ? 1 : 0;
            }
            return out;
        }

        template <class F>
        decltype(auto) dispatch(ProtocolId protocol, F&& f)
        {
            switch (protocol)
            {
            case ProtocolId::TimeOpt:
                return f(TimeOpt{});
            case ProtocolId::Flip:
                return f(Flip{});
            case ProtocolId::GrosNaming:
                break;
            }
            return f(GrosNaming{});
        }
    } // namespace detail

    /// Successor of `config` under `protocol` for the given pair. Pure.
    inline InteractionOutcome apply_interaction(ProtocolId protocol, const Configuration& config, const InteractionPair& pair)
    {
        detail::check_tags(protocol, config);
        detail::check_pair(pair, config.n());
        InteractionOutcome out{config, false, pair.involves_bst()};
        out.non_null = detail::dispatch(protocol, [&]<class P>(P) {
            return detail::step<P>(std::get<typename P::bst_type>(out.config.bst), out.config.mobiles, pair);
        });
        return out;
    }

    /// Definition of silence: every pair, BST pairs included, yields a null transition.
    /// Quadratic in n; `is_silent` is the fast path.
    inline bool is_silent_brute_force(ProtocolId protocol, const Configuration& config)
    {
        const std::size_t n = config.n();
        for (std::size_t i = 0; i < n; ++i)
        {
            try
            {
                if (apply_interaction(protocol, config, InteractionPair::with_bst(i)).non_null)
                    return false;
            }
            catch (const name_overflow&)
            {
                // BST would need to act on this agent; that is not silence.
                return false;
            }
            for (std::size_t j = i + 1; j < n; ++j)
            {
                if (apply_interaction(protocol, config, InteractionPair::mobiles(i, j)).non_null)
                    return false;
            }
        }
        return true;
    }

    inline bool is_silent(ProtocolId protocol, const Configuration& config)
    {
        detail::check_tags(protocol, config);
        switch (protocol)
        {
        case ProtocolId::Flip:
            // Every BST interaction flips the agent's mark.
            return false;
        case ProtocolId::GrosNaming:
        {
            std::vector<std::uint8_t> scratch;
            return detail::gros_quiescent(config.mobiles, scratch, config.bst_as<GrosBst>().name_bound);
        }
        case ProtocolId::TimeOpt:
            break;
        }
        return is_silent_brute_force(protocol, config);
    }

    /// Drive `config` with pairs from `sched` until `stop_when(event, config)` returns
    /// true or the budget on `metric` is spent. Updates the counters in `record`.
    /// Returns true if `stop_when` fired.
    template <class P, class StopWhen>
    bool drive(Scheduler& sched, Configuration& config, RunRecord& record, BudgetMetric metric, std::uint64_t budget,
               StopWhen&& stop_when)
    {
        auto& bst = std::get<typename P::bst_type>(config.bst);
        auto& ms = config.mobiles;
        const std::size_t n = ms.size();
        const std::uint64_t* spent = metric == BudgetMetric::Total ? &record.total_interactions
                                     : metric == BudgetMetric::Bst ? &record.bst_interactions
                                                                   : &record.non_null_transitions;
        StepEvent ev;
        while (*spent < budget)
        {
            ev.pair = sched.next_pair(config);
            detail::check_pair(ev.pair, n);
            if (ev.pair.involves_bst())
            {
                ev.before[1] = ms[ev.pair.second];
            }
            else
            {
                ev.before[0] = ms[ev.pair.first];
                ev.before[1] = ms[ev.pair.second];
            }
            ev.non_null = detail::step<P>(bst, ms, ev.pair);
            ++record.total_interactions;
            record.bst_interactions += ev.pair.involves_bst() ? 1 : 0;
            record.non_null_transitions += ev.non_null ? 1 : 0;
            if (stop_when(ev, std::as_const(config)))
                return true;
        }
        return false;
    }

    /// Run an execution from `config` until `stop`. `observer(event, config)` is
    /// called after every interaction.
    template <class Observer = NullObserver>
    RunResult run(ProtocolId protocol, Scheduler& sched, Configuration config, const StopCondition& stop,
                  Observer&& observer = Observer{})
    {
        stop.validate();
        config.validate();
        detail::check_tags(protocol, config);
        if (!compatible(sched.kind(), protocol))
        {
            throw incompatible_protocol(std::string(to_string(sched.kind())) + " scheduler cannot drive " +
                                        std::string(to_string(protocol)));
        }
        return detail::dispatch(protocol, [&]<class P>(P) {
            RunResult out{std::move(config), {}, RunStatus::BudgetExhausted};
            RunRecord& rec = out.record;
            const std::uint64_t n = out.config.n();

            if (stop.kind == StopKind::CountReachesN && !P::has_count)
                throw std::invalid_argument("the naming protocol has no size estimate; stop on silence instead");

            std::vector<std::uint8_t> scratch;
            auto predicate = [&](const Configuration& cfg) {
                if constexpr (P::has_count)
                {
                    if (stop.kind != StopKind::Silence)
                        return P::count(cfg.bst_as<typename P::bst_type>()) == n;
                    return is_silent(P::id, cfg);
                }
                else
                {
                    return detail::gros_quiescent(cfg.mobiles, scratch, cfg.bst_as<GrosBst>().name_bound);
                }
            };
            auto mark_converged = [&] {
                rec.converged_at_bst_interaction = rec.bst_interactions;
                rec.converged_at_non_null = rec.non_null_transitions;
                rec.converged_at_total = rec.total_interactions;
            };

            if (predicate(out.config))
            {
                mark_converged();
            }
            const bool halt_on_convergence = stop.kind != StopKind::MaxInteractions;
            if (!(halt_on_convergence && rec.converged()))
            {
                drive<P>(sched, out.config, rec, stop.metric, stop.budget, [&](const StepEvent& ev, const Configuration& cfg) {
                    observer(ev, cfg);
                    // Only a non-null step can make the predicate true for the first time.
                    if (!rec.converged() && ev.non_null && predicate(cfg))
                    {
                        mark_converged();
                        return halt_on_convergence;
                    }
                    return false;
                });
            }
            if constexpr (P::has_count)
                rec.final_c = P::count(out.config.template bst_as<typename P::bst_type>());
            else
                rec.final_c = detail::unique_names(out.config.mobiles);
            out.status = rec.converged() ? RunStatus::Converged : RunStatus::BudgetExhausted;
            return out;
        });
    }
} // namespace popcount
