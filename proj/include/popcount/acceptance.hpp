#pragma once

#include "experiments.hpp"
#include "oracle.hpp"
#include "rng.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace popcount::acceptance
{
    enum class Level : std::uint8_t
    {
        Fast, // reduced n and trial counts, about a minute or less
        Full, // every criterion at its stated size, plus the n = 14 flip and n = 16 adversarial extensions
    };

    inline std::string_view to_string(Level l) noexcept { return l == Level::Fast ? "fast" : "full"; }

    struct CriterionResult
    {
        int id = 0;
        std::string name;
        bool passed = false;
        std::string observed;
        std::string expected;
        double seconds = 0.0; // wall time; not part of the rendered report
        double time_limit = 0.0;
    };

    struct SuiteOptions
    {
        Level level = Level::Fast;
        std::uint64_t seed = 42;
        unsigned threads = 1;
        // Called with each criterion as soon as it finishes.
        std::function<void(const CriterionResult&)> on_result;
    };

    namespace detail
    {
        inline std::string fmt(const char* f, double v)
        {
            char buf[64];
            std::snprintf(buf, sizeof buf, f, v);
            return buf;
        }

        inline std::string num(double v) { return fmt("%.6g", v); }

        class Timer
        {
        public:
            double seconds() const
            {
                return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
            }

        private:
            std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
        };

        struct Plan
        {
            std::vector<std::size_t> flip_n;
            std::size_t flip_trials;
            std::vector<std::size_t> timeopt_n;
            std::vector<std::size_t> lower_bound_n;
            std::size_t timeopt_trials;
            std::vector<std::size_t> allflip_n;
            std::uint64_t allflip_trials;
            std::uint64_t exact_trials;
            std::size_t weak_max_n;
        };

        inline Plan plan_for(Level level)
        {
            if (level == Level::Fast)
                return {{2, 3, 4, 5, 6, 7, 8}, 2000, {8, 16, 32, 64}, {16, 64}, 200, {2, 8, 32}, 10000, 100000, 10};
            return {{2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14},
                    10000,
                    {8, 16, 32, 64, 128, 256},
                    {16, 64, 256},
                    1000,
                    {2, 8, 32},
                    100000,
                    1000000,
                    16};
        }
    } // namespace detail

    /// Run every acceptance criterion. Results are deterministic in (level, seed)
    /// apart from the wall-time fields.
    inline std::vector<CriterionResult> run_suite(const SuiteOptions& opt)
    {
        using namespace experiments;
        using detail::num;
        const detail::Plan plan = detail::plan_for(opt.level);
        std::vector<CriterionResult> out;
        auto emit = [&](CriterionResult r) {
            if (r.time_limit > 0 && r.seconds > r.time_limit)
            {
                r.passed = false;
                r.observed += "; exceeded time limit";
            }
            if (opt.on_result)
                opt.on_result(r);
            out.push_back(std::move(r));
        };
        auto seed_for = [&](std::uint64_t criterion) { return derive_seed(opt.seed, criterion); };
        InvariantReport simulated;

        // 1. Closed form and recurrence agree exactly.
        {
            detail::Timer t;
            unsigned first_bad = 0;
            for (unsigned n = 1; n <= 64 && first_bad == 0; ++n)
            {
                if (oracle::flip_expected_closed_form(n) != oracle::flip_expected_recurrence(n))
                    first_bad = n;
            }
            emit({1, "flip oracle identity (closed form = recurrence, n=1..64)", first_bad == 0,
                  first_bad == 0 ? "equal for all 64 n" : "differs at n=" + std::to_string(first_bad), "exact equality",
                  t.seconds(), 5.0});
        }

        // 2. Flip simulation against u_n.
        {
            detail::Timer t;
            TrialBatchSpec spec;
            spec.protocol = ProtocolId::Flip;
            spec.trials = plan.flip_trials;
            spec.scheduler = SchedulerKind::BstOnly;
            spec.init = InitPolicy::AllZero;
            spec.base_seed = seed_for(2);
            spec.threads = opt.threads;
            bool ok = true;
            std::string worst;
            double worst_excess = -1e300;
            for (auto& [n, r] : sweep_n(spec, plan.flip_n))
            {
                simulated += r.invariants;
                const double u = oracle::to_double(oracle::flip_expected_closed_form(static_cast<unsigned>(n)));
                const auto& m = r.summary.bst_interactions;
                const double tol = std::max(3.0 * m.standard_error, 0.02 * u);
                const double dev = std::abs(m.mean - u);
                const bool pass = dev <= tol && r.summary.non_converged == 0;
                ok = ok && pass;
                if (dev - tol > worst_excess)
                {
                    worst_excess = dev - tol;
                    worst = "n=" + std::to_string(n) + " mean=" + num(m.mean) + " u_n=" + num(u) + " |dev|=" + num(dev) +
                            " tol=" + num(tol);
                }
            }
            emit({2,
                  "flip mean vs u_n (n=" + std::to_string(plan.flip_n.front()) + ".." + std::to_string(plan.flip_n.back()) +
                      ", " + std::to_string(plan.flip_trials) + " trials)",
                  ok, "tightest " + worst, "|mean-u_n| <= max(3 SE, 0.02 u_n)", t.seconds(), 300.0});
        }

        // 3 and 4. Phased protocol convergence, doubling ratios, lower bound.
        {
            detail::Timer t;
            TrialBatchSpec spec;
            spec.protocol = ProtocolId::TimeOpt;
            spec.trials = plan.timeopt_trials;
            spec.scheduler = SchedulerKind::BstOnly;
            spec.init = InitPolicy::UniformRandomMarks;
            spec.base_seed = seed_for(3);
            spec.threads = opt.threads;
            const auto sweep = sweep_n(spec, plan.timeopt_n);
            bool ok = true;
            std::string ratios;
            std::size_t converged = 0, total = 0;
            std::map<std::size_t, MetricSummary> by_n;
            for (std::size_t i = 0; i < sweep.size(); ++i)
            {
                const auto& [n, r] = sweep[i];
                simulated += r.invariants;
                converged += r.summary.converged;
                total += r.trials.size();
                by_n[n] = r.summary.bst_interactions;
                if (i > 0)
                {
                    const double ratio = r.summary.bst_interactions.mean / sweep[i - 1].second.summary.bst_interactions.mean;
                    ok = ok && ratio >= 1.8 && ratio <= 2.7;
                    ratios += (ratios.empty() ? "" : " ") + detail::fmt("%.3f", ratio);
                }
            }
            ok = ok && converged == total;
            const double secs = t.seconds();
            emit({3, "phased protocol converges, doubling ratio in [1.8, 2.7]", ok,
                  "converged " + std::to_string(converged) + "/" + std::to_string(total) + ", ratios " + ratios,
                  "100% converged; every ratio in [1.8, 2.7]", secs, 600.0});

            bool lb_ok = true;
            std::string lb;
            for (std::size_t n : plan.lower_bound_n)
            {
                const auto& m = by_n.at(n);
                const double bound = oracle::to_double(oracle::harmonic_bound(static_cast<unsigned>(n)));
                lb_ok = lb_ok && m.mean >= bound - 3.0 * m.standard_error;
                lb += (lb.empty() ? "" : "; ") + ("n=" + std::to_string(n) + " mean=" + num(m.mean) + " nH_n=" + num(bound));
            }
            emit({4, "phased protocol mean >= n H_n - 3 SE", lb_ok, lb, "mean >= n H_n - 3 SE", 0.0, 0.0});
        }

        // 5. All-flip probability.
        {
            detail::Timer t;
            bool ok = true;
            std::string obs;
            for (std::size_t n : plan.allflip_n)
            {
                const AllFlipEstimate e = estimate_allflip_probability(n, plan.allflip_trials, derive_seed(seed_for(5), n));
                simulated += e.invariants;
                ok = ok && e.truncated == 0 && e.frequency >= 0.5 - 3.0 * e.standard_error;
                obs += (obs.empty() ? "" : "; ") + ("n=" + std::to_string(n) + " freq=" + detail::fmt("%.5f", e.frequency));
            }
            emit({5, "all-flip frequency (" + std::to_string(plan.allflip_trials) + " trials)", ok, obs,
                  ">= 0.5 - 3 SE", t.seconds(), 180.0});
        }

        // 6. Invariants across everything simulated in 2-5.
        emit({6, "invariants hold in every simulated step (criteria 2-5)", simulated.violations() == 0,
              std::to_string(simulated.violations()) + " violations in " + std::to_string(simulated.steps_checked) + " steps",
              "0 violations", 0.0, 0.0});

        // 7. Exact small-n expectation against Monte Carlo.
        {
            detail::Timer t;
            bool ok = true;
            std::string obs;
            for (unsigned n : {1u, 2u})
            {
                TrialBatchSpec spec;
                spec.protocol = ProtocolId::TimeOpt;
                spec.n = n;
                spec.trials = plan.exact_trials;
                spec.scheduler = SchedulerKind::BstOnly;
                spec.init = InitPolicy::UniformRandomMarks;
                spec.base_seed = derive_seed(seed_for(7), n);
                spec.threads = opt.threads;
                const BatchResult r = run_batch(spec);
                const oracle::ExactRational exact = oracle::timeopt_exact_expected(n);
                const double e = oracle::to_double(exact);
                const auto& m = r.summary.bst_interactions;
                ok = ok && r.summary.non_converged == 0 && std::abs(m.mean - e) <= 3.0 * m.standard_error;
                obs += (obs.empty() ? "" : "; ") + ("n=" + std::to_string(n) + " exact=" + oracle::to_fraction_string(exact) +
                                                    " mc=" + detail::fmt("%.5f", m.mean) + " se=" + detail::fmt("%.5f", m.standard_error));
            }
            emit({7, "exact phased-protocol expectation vs Monte Carlo (" + std::to_string(plan.exact_trials) + " trials)", ok,
                  obs, "|mc - exact| <= 3 SE", t.seconds(), 0.0});
        }

        // 8 and 10. Weak-fairness adversarial sweep.
        {
            detail::Timer t;
            bool ok = true;
            std::uint64_t terminal = 0, truncated = 0;
            std::string obs;
            const double limit = 300.0;
            double within_limit_seconds = 0.0;
            for (std::size_t n = 2; n <= plan.weak_max_n; ++n)
            {
                const WorstUnnamedResult w = sweep_worst_unnamed(n, static_cast<std::uint32_t>(n + 1));
                if (n <= 12)
                    within_limit_seconds = t.seconds();
                const std::uint64_t lo = (std::uint64_t{1} << n) - 1;
                const std::uint64_t hi = std::uint64_t{2} << n;
                ok = ok && w.worst_non_null >= lo && w.worst_non_null <= hi && w.truncated == 0;
                terminal += w.terminal_violations;
                truncated += w.truncated;
                if (n == 2 || n == 12 || n == plan.weak_max_n || w.worst_non_null < lo || w.worst_non_null > hi)
                    obs += (obs.empty() ? "" : "; ") + ("n=" + std::to_string(n) + " worst=" + std::to_string(w.worst_non_null));
            }
            emit({8, "adversarial worst non-null in [2^n - 1, 2^(n+1)] (n=2.." + std::to_string(plan.weak_max_n) + ")", ok, obs,
                  "bounds hold, no truncated run", within_limit_seconds, limit});
            emit({10, "silent terminal configurations are distinctly named", terminal == 0 && truncated == 0,
                  std::to_string(terminal) + " bad terminals, " + std::to_string(truncated) + " truncated",
                  "n distinct nonzero names every run", 0.0, 0.0});
        }

        // 9. Gros sequence.
        {
            detail::Timer t;
            bool ok = true;
            std::string why;
            const auto u6 = oracle::expand_gros_sequence(6);
            for (std::uint64_t k = 1; k < 64 && ok; ++k)
            {
                if (oracle::gros_term(k) != u6[k - 1])
                {
                    ok = false;
                    why = "term mismatch at k=" + std::to_string(k);
                }
            }
            std::uint64_t length = 0; // L_n = 2 L_{n-1} + 1
            for (unsigned n = 1; n <= 30 && ok; ++n)
            {
                length = 2 * length + 1;
                if (oracle::gros_length(n) != length || oracle::gros_length(n) != (std::uint64_t{1} << n) - 1)
                {
                    ok = false;
                    why = "length mismatch at n=" + std::to_string(n);
                }
            }
            for (unsigned n = 1; n <= 10 && ok; ++n)
            {
                std::vector<std::uint64_t> seen(n + 2, 0);
                for (std::uint64_t k = 1; k <= oracle::gros_length(n); ++k)
                {
                    const auto g = oracle::gros_term(k);
                    if (g > n)
                    {
                        ok = false;
                        break;
                    }
                    ++seen[g];
                }
                for (unsigned j = 1; j <= n && ok; ++j)
                {
                    if (seen[j] != (std::uint64_t{1} << (n - j)))
                    {
                        ok = false;
                        why = "multiplicity of " + std::to_string(j) + " in U_" + std::to_string(n);
                    }
                }
            }
            emit({9, "Gros sequence terms, lengths and multiplicities", ok, ok ? "all checks agree" : why,
                  "terms k<64, lengths n<=30, multiplicities n<=10", t.seconds(), 0.0});
        }

        // 11. Determinism probe: repeat seeded work and require identical results. The
        // byte-level comparison of two whole reports is done by the caller.
        {
            detail::Timer t;
            TrialBatchSpec spec;
            spec.protocol = ProtocolId::TimeOpt;
            spec.n = 16;
            spec.trials = 200;
            spec.init = InitPolicy::UniformRandomMarks;
            spec.base_seed = seed_for(11);
            const BatchResult a = run_batch(spec);
            spec.threads = std::max(2u, opt.threads);
            const BatchResult b = run_batch(spec);
            const WorstUnnamedResult wa = sweep_worst_unnamed(8, 9);
            const WorstUnnamedResult wb = sweep_worst_unnamed(8, 9);
            const bool ok = a.summary == b.summary && a.trials == b.trials && a.invariants == b.invariants &&
                            wa.worst_non_null == wb.worst_non_null && wa.worst_start == wb.worst_start;
            emit({11, "seeded runs replay identically (1 vs 2 threads, repeated sweep)", ok,
                  ok ? "identical" : "results differ", "identical", t.seconds(), 0.0});
        }

        std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
        return out;
    }

    /// Deterministic pass/fail table. Wall times are deliberately left out.
    inline std::string render_report(const std::vector<CriterionResult>& results, Level level, std::uint64_t seed)
    {
        std::string s = "popcount acceptance report\nlevel: " + std::string(to_string(level)) +
                        "\nseed: " + std::to_string(seed) + "\nrng: " + std::string(rng_algorithm_id) + "\n\n";
        std::size_t passed = 0;
        for (const auto& r : results)
        {
            passed += r.passed ? 1 : 0;
            char head[32];
            std::snprintf(head, sizeof head, "[%s] C%-2d ", r.passed ? "PASS" : "FAIL", r.id);
            s += head + r.name + "\n        observed: " + r.observed + "\n        expected: " + r.expected + "\n";
        }
        s += "\n" + std::to_string(passed) + "/" + std::to_string(results.size()) + " criteria passed\n";
        return s;
    }
} // namespace popcount::acceptance
